"""Aligned maps and the action of projective cacti on them.

Simplex points are nondecreasing tuples in I = [-1, 1].  The combinatorics
(which lobe owns each t_i, the index sets S_l, the tree T(C, t) and the
maps rho_l) is computed with exact rationals; floats only enter when an
aligned map is evaluated.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .cacti import Cactus, minimal, rho
from .configs import (
    ConfigError,
    FramedConfig,
    SpatialConfig,
    codegeneracy,
    coface,
    e1,
    e_config,
    forget,
    gram_schmidt,
    insert,
    shrink_limit,
)
from .knots import FramedKnot
from .trees import Leaf, UNode

DERIV_TOL = 1e-9


class ActionError(ValueError):
    pass


def as_simplex_point(t, n: int | None = None, exact: bool = True) -> tuple:
    vals = tuple(Fraction(x) if exact else float(x) for x in t)
    if n is not None and len(vals) != n:
        raise ActionError(f"expected {n} coordinates, got {len(vals)}")
    for a, b in zip(vals, vals[1:]):
        if a > b:
            raise ActionError("simplex coordinates must be nondecreasing")
    if vals and (vals[0] < -1 or vals[-1] > 1):
        raise ActionError("simplex coordinates must lie in [-1, 1]")
    return vals


@dataclass(frozen=True)
class AlignedMap:
    """A map from the n-simplex to framed infinitesimal configurations."""

    n: int
    d: int
    fn: Callable[[tuple], FramedConfig] = field(repr=False)
    tag: str = "user"

    def __call__(self, t) -> FramedConfig:
        return self.fn(as_simplex_point(t, self.n))


# ---------------------------------------------------------------- basics


def constant(n: int, d: int = 3) -> AlignedMap:
    """The basepoint: every simplex point goes to e^n."""
    e = e_config(n, d)
    return AlignedMap(n, d, lambda t: e, "constant")


def tower_project(phi: AlignedMap) -> AlignedMap:
    """Restriction along the last coface, with the last point forgotten."""
    if phi.n == 0:
        raise ActionError("cannot project an arity 0 map")
    n = phi.n - 1

    def fn(t):
        return codegeneracy(n, phi(tuple(t) + (Fraction(1),)))

    return AlignedMap(n, phi.d, fn, f"project({phi.tag})")


def face_point(S, u, n: int) -> tuple:
    """The point of the S-face of the n-simplex with coordinates u.

    With S = {s_0 < ... < s_r}, t_{i+1} = u_{#{s in S : s <= i}} where
    u_0 = -1 and u_{r+1} = 1.
    """
    S = sorted(S)
    if len(u) != len(S) - 1:
        raise ActionError(f"face of {len(S)} vertices has {len(S) - 1} coordinates, got {len(u)}")
    ext = (Fraction(-1),) + tuple(u) + (Fraction(1),)
    out = []
    for i in range(n):
        out.append(ext[sum(1 for s in S if s <= i)])
    return tuple(out)


def restrict_to_face(phi: AlignedMap, S, u) -> FramedConfig:
    """phi_S(u): phi on the S-face, keeping one point per interior group
    and forgetting the points pushed to the ends."""
    S = sorted(S)
    t = face_point(S, u, phi.n)
    c = phi(t)
    keep = []
    for g in range(1, len(S)):
        first = next(i for i in range(phi.n) if sum(1 for s in S if s <= i) == g)
        keep.append(first + 1)
    return forget(c, keep)


def face_defect(c: FramedConfig, i: int) -> float:
    """Distance from c to the image of the coface d^i."""
    n = c.n
    k = min(i, n - 1)
    return c.distance(coface(i, codegeneracy(k, c)))


def face_samples(n: int, rng=None, per_face: int = 3) -> list:
    """(i, t) with t on the codimension-1 face d^i: t_1 = -1 (i = 0),
    t_i = t_{i+1}, or t_n = 1 (i = n).  Midpoints plus seeded points."""
    import random

    rng = rng or random.Random(0)
    out = []
    for i in range(n + 1):
        for s in range(per_face):
            if s == 0:
                base = [Fraction(2 * k + 1, n) - 1 for k in range(n - 1)] if n > 1 else []
            else:
                base = sorted(Fraction(rng.randint(-48, 48), 48) for _ in range(n - 1))
            if i == 0:
                t = [Fraction(-1)] + base
            elif i == n:
                t = base + [Fraction(1)]
            else:
                t = base[: i - 1] + [base[i - 1]] + base[i - 1:]
            out.append((i, tuple(t)))
    return out


def face_coherence(phi: AlignedMap, rng=None, per_face: int = 3) -> float:
    worst = 0.0
    for i, t in face_samples(phi.n, rng, per_face):
        worst = max(worst, face_defect(phi(t), i))
    return worst


# ------------------------------------------------------- knot evaluation


def _knot_data(f: FramedKnot, s: float):
    Df = f.frame(s)
    tan = Df[:, 0]
    nt = np.linalg.norm(tan)
    if nt < DERIV_TOL:
        raise ActionError(f"degenerate derivative at t = {s}")
    return f.curve(s), gram_schmidt(Df), tan / nt


def ev(f: FramedKnot, n: int) -> AlignedMap:
    """Spatial evaluation: points f(t_i) with Gram-Schmidt frames and the
    boundary anchors.  Coincident points get the limiting secant -f'/|f'|."""
    d = f.d

    def fn(t):
        params = (-1.0,) + tuple(float(x) for x in t) + (1.0,)
        data = [_knot_data(f, s) for s in params]
        P = np.array([x for x, _, _ in data])
        G = np.stack([g for _, g, _ in data])
        G[0] = G[-1] = np.eye(d)
        N = n + 2
        V = np.zeros((N, N, d))
        for i in range(N):
            for j in range(i + 1, N):
                w = P[i] - P[j]
                nw = np.linalg.norm(w)
                w = -data[i][2] if nw == 0 else w / nw
                V[i, j], V[j, i] = w, -w
        return SpatialConfig(P, V, G)

    return AlignedMap(n, d, fn, f"ev({f.name})")


def phi_bar(f: FramedKnot, t, outside=None):
    """Extension of the knot evaluation to parameters outside I.

    Points with |t| > 1 sit at (t, 0, ..., 0) with frame I.  ``outside``
    is the direction v_ij given to coincident points outside I; the
    default is (1, 0, ..., 0).  Returns (points, v, frames).
    """
    d = f.d
    outside = e1(d) if outside is None else np.asarray(outside, float)
    n = len(t)
    P = np.zeros((n, d))
    G = np.zeros((n, d, d))
    tans = []
    for i, s in enumerate(float(x) for x in t):
        if abs(s) <= 1:
            P[i], G[i], tan = _knot_data(f, s)
        else:
            P[i, 0] = s
            G[i] = np.eye(d)
            tan = None
        tans.append(tan)
    V = np.zeros((n, n, d))
    for i in range(n):
        for j in range(i + 1, n):
            w = P[i] - P[j]
            nw = np.linalg.norm(w)
            if nw == 0:
                w = outside if tans[i] is None else -tans[i]
            else:
                w = w / nw
            V[i, j], V[j, i] = w, -w
    return P, V, G


def q_ev(f: FramedKnot, n: int) -> AlignedMap:
    """Infinitesimal evaluation: t -> 2t, the extension phi_bar, then the
    t -> 1 limit of the shrinking map.  Coincident points outside I get
    v = -e1 so that the faces t_i = t_{i+1} match the doubling coface."""
    d = f.d

    def fn(t):
        P, V, G = phi_bar(f, [2 * x for x in t], outside=-e1(d))
        return shrink_limit(P, V, G)

    return AlignedMap(n, d, fn, f"q_ev({f.name})")


# -------------------------------------------------------- action context


@dataclass(frozen=True)
class LobeContext:
    label: int
    S: frozenset
    entries: tuple  # exact points of I fed to rho, in order
    items: tuple  # ("t", i) or ("lobe", child) for each entry
    k: tuple
    j: tuple
    rho: object

    @property
    def t_sub(self) -> tuple:
        return tuple(self.rho(x) for x in self.entries)


@dataclass(frozen=True)
class ActionContext:
    cactus: Cactus
    t: tuple
    lobes: dict  # label -> LobeContext
    root_lobes: tuple  # lobes at the global root, left to right
    owner: tuple  # lobe owning each t_i
    tree: UNode

    @property
    def root_arity(self) -> int:
        return len(self.root_lobes)


@dataclass
class _Walk:
    segs: list = field(default_factory=list)  # (label, arc index, lo, hi)
    first: dict = field(default_factory=dict)
    last: dict = field(default_factory=dict)
    layout: dict = field(default_factory=dict)  # label -> [("arc", seg) | ("lobe", child)]


def _walk(C: Cactus) -> tuple:
    C = minimal(C)
    P = C.perimeter
    W = _Walk()
    pos = [Fraction(-1)]

    def arc(lab, q, frac):
        ln = 2 * frac * C.lengths[lab - 1] / P
        W.segs.append((lab, q, pos[0], pos[0] + ln))
        pos[0] += ln
        W.layout[lab].append(("arc", len(W.segs) - 1))

    def visit(w):
        lab = w.label
        W.layout[lab] = []
        W.first[lab] = len(W.segs)
        a = C.arcs[lab]
        arc(lab, 0, a[0])
        for q, b in enumerate(w.blacks):
            for ww in b.whites:
                W.layout[lab].append(("lobe", ww.label))
                visit(ww)
            arc(lab, q + 1, a[q + 1])
        W.last[lab] = len(W.segs) - 1

    roots = tuple(w.label for w in C.tree.root.whites)
    for w in C.tree.root.whites:
        visit(w)
    return C, W, roots


def _owners(W: _Walk, t) -> list:
    """Segment owning each t_i: the interior of an arc, else at a shared
    endpoint the next arc if it opens its lobe, else the previous arc."""
    segs = W.segs
    out = []
    for x in t:
        if x <= -1:
            out.append(0)
            continue
        if x >= 1:
            out.append(len(segs) - 1)
            continue
        for s, (_, q, lo, hi) in enumerate(segs):
            if lo < x < hi:
                out.append(s)
                break
            if x == hi:
                nxt = segs[s + 1]
                out.append(s + 1 if nxt[1] == 0 else s)
                break
    return out


def action_context(C: Cactus, t) -> ActionContext:
    t = as_simplex_point(t)
    n = len(t)
    Cm, W, roots = _walk(C)
    seg_of = _owners(W, t)
    owner = tuple(W.segs[s][0] for s in seg_of)

    def count_before(seg):
        return sum(1 for s in seg_of if s < seg)

    def count_in(lab):
        return sum(1 for s in seg_of if W.first[lab] <= s <= W.last[lab])

    lobes = {}
    tree_nodes = {}

    def build(lab):
        k = [count_before(W.first[lab])]
        j = [0]
        items = []
        entries = []
        kids = []
        for kind, x in W.layout[lab]:
            if kind == "arc":
                for i in range(n):
                    if seg_of[i] == x:
                        j[-1] += 1
                        items.append(("t", i + 1))
                        entries.append(t[i])
                        kids.append(Leaf(i + 1))
            else:
                b = count_in(x)
                k.append(k[-1] + j[-1] + b)
                j.append(0)
                kids.append(build(x))
                if b:
                    items.append(("lobe", x))
                    entries.append(W.segs[W.first[x]][2])
        S = set()
        for kp, jp in zip(k, j):
            S.update(range(kp, kp + jp + 1))
        lobes[lab] = LobeContext(lab, frozenset(S), tuple(entries), tuple(items), tuple(k), tuple(j), rho(Cm, lab))
        node = UNode(lab, tuple(kids))
        tree_nodes[lab] = node
        return node

    root = UNode(0, tuple(build(lab) for lab in roots))
    for lc in lobes.values():
        if len(lc.entries) != len(lc.S) - 1:
            raise ActionError(f"lobe {lc.label}: {len(lc.entries)} entries for |S| = {len(lc.S)}")
    return ActionContext(Cm, t, lobes, roots, owner, root)


def upsilon_tree(C: Cactus, t) -> UNode:
    return action_context(C, t).tree


# ------------------------------------------------------ iterated insertion


def circ_tree(root_conf: FramedConfig, root_items, confs: dict, items: dict, order=None) -> FramedConfig:
    """Iterated insertion along a planted tree.

    ``root_items`` and ``items[l]`` list the children of each vertex as
    ("t", i) leaves or ("lobe", l) vertices, matching the points of the
    corresponding configuration.  ``order`` lists the lobes in the order
    their edges are contracted (default: each lobe after its descendants,
    last slot first); any order gives the same result by associativity.
    """
    cur = {0: root_conf}
    kids = {0: list(root_items)}
    for lab, c in confs.items():
        cur[lab] = c
        kids[lab] = list(items[lab])
    parent = {}
    for p, ks in kids.items():
        for kind, x in ks:
            if kind == "lobe":
                parent[x] = p
    if order is None:
        order = []

        def post(v):
            for kind, x in reversed(kids[v]):
                if kind == "lobe":
                    post(x)
                    order.append(x)

        post(0)
    alive = {v: v for v in cur}

    def find(v):
        while alive[v] != v:
            v = alive[v]
        return v

    for lab in order:
        p = find(parent[lab])
        pos = kids[p].index(("lobe", lab))
        cur[p] = insert(cur[p], pos + 1, cur[lab])
        kids[p] = kids[p][:pos] + kids[lab] + kids[p][pos + 1:]
        alive[lab] = p
    if len(order) != len(confs):
        raise ActionError("contraction order must list every lobe once")
    return cur[0]


def _check_maps(maps: Sequence[AlignedMap], m: int) -> tuple:
    if len(maps) != m:
        raise ActionError(f"expected {m} aligned maps, got {len(maps)}")
    ns = {phi.n for phi in maps}
    ds = {phi.d for phi in maps}
    if len(ns) != 1 or len(ds) != 1:
        raise ActionError("aligned maps must share arity and dimension")
    return ns.pop(), ds.pop()


def lobe_configs(ctx: ActionContext, maps: Sequence[AlignedMap]) -> dict:
    """x^l = phi^l_{S_l}(rho_l(t^{C,l})) for every lobe with a nonempty branch."""
    out = {}
    for lab, lc in ctx.lobes.items():
        if lc.entries:
            out[lab] = restrict_to_face(maps[lab - 1], lc.S, lc.t_sub)
    return out


def act(C: Cactus, maps: Sequence[AlignedMap], t, order=None) -> FramedConfig:
    """alpha_m(C; phi^1..phi^m)(t)."""
    n, d = _check_maps(maps, C.m)
    ctx = action_context(C, as_simplex_point(t, n))
    confs = lobe_configs(ctx, maps)
    items = {lab: ctx.lobes[lab].items for lab in confs}
    root_items = [("lobe", lab) for lab in ctx.root_lobes if ctx.lobes[lab].entries]
    if not root_items:
        return e_config(0, d)
    return circ_tree(e_config(len(root_items), d), root_items, confs, items, order)


def action_map(C: Cactus, maps: Sequence[AlignedMap]) -> AlignedMap:
    n, d = _check_maps(maps, C.m)
    maps = tuple(maps)
    return AlignedMap(n, d, lambda t: act(C, maps, t), f"act[{C.m}]")


def random_contraction_order(ctx: ActionContext, rng) -> list:
    """A random order of the lobes with nonempty branches."""
    labs = [lab for lab, lc in ctx.lobes.items() if lc.entries]
    rng.shuffle(labs)
    return labs


def act_with_order(C: Cactus, maps, t, rng) -> FramedConfig:
    n, _ = _check_maps(maps, C.m)
    ctx = action_context(C, as_simplex_point(t, n))
    return act(C, maps, t, order=random_contraction_order(ctx, rng))


def arity2_formula(C: Cactus, maps, t) -> FramedConfig:
    """The two displayed arity 2 composites, as an independent check."""
    ctx = action_context(C, t)
    d = maps[0].d
    x = lobe_configs(ctx, maps)
    if set(x) != {1, 2}:
        raise ActionError("both lobes must carry points")
    if len(ctx.root_lobes) == 2:
        a, b = ctx.root_lobes
        return insert(insert(e_config(2, d), 2, x[b]), 1, x[a])
    low = ctx.root_lobes[0]
    high = 3 - low
    pos = ctx.lobes[low].items.index(("lobe", high)) + 1
    return insert(e_config(1, d), 1, insert(x[low], pos, x[high]))


__all__ = [
    "ActionContext",
    "ActionError",
    "AlignedMap",
    "LobeContext",
    "act",
    "act_with_order",
    "action_context",
    "action_map",
    "arity2_formula",
    "circ_tree",
    "constant",
    "ev",
    "face_coherence",
    "face_defect",
    "face_point",
    "face_samples",
    "phi_bar",
    "q_ev",
    "restrict_to_face",
    "tower_project",
    "upsilon_tree",
]
