"""Spineless cacti: normalized, unnormalized and projective.

A cactus is stored as its b/w tree together with, for every lobe, the
barycentric partition of the lobe into arcs (one more arc than the lobe
has black children) and the lobe lengths.  Normalized cacti have all
lengths 1, projective cacti have lengths summing to 1.

The perimeter representation (``ArcList``) is the list of (label, length)
pairs met when walking the outside of the cactus from the global root.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .trees import (
    Black,
    BwTree,
    TreeError,
    White,
    angle_collapse,
    corolla,
    invert,
)

Q = Fraction
ArcList = tuple  # tuple of (label, Fraction) pairs


class CactusError(ValueError):
    pass


class EmptyOperadError(CactusError):
    pass


@dataclass(frozen=True)
class Cactus:
    tree: BwTree
    arcs: dict
    lengths: tuple

    def __post_init__(self):
        m = self.tree.m
        if m < 1:
            raise EmptyOperadError("arity 0 cacti do not exist")
        object.__setattr__(self, "arcs", {k: tuple(Q(x) for x in v) for k, v in self.arcs.items()})
        object.__setattr__(self, "lengths", tuple(Q(x) for x in self.lengths))
        if len(self.lengths) != m:
            raise CactusError("need one length per lobe")
        if any(x <= 0 for x in self.lengths):
            raise CactusError("lobe lengths must be positive")
        for lab in range(1, m + 1):
            a = self.arcs.get(lab)
            if a is None or len(a) != self.tree.white(lab).arity + 1:
                raise CactusError(f"lobe {lab} needs {self.tree.white(lab).arity + 1} arcs")
            if any(x < 0 for x in a) or sum(a) != 1:
                raise CactusError(f"arcs of lobe {lab} must be >= 0 and sum to 1")

    @property
    def m(self) -> int:
        return self.tree.m

    @property
    def perimeter(self) -> Fraction:
        return sum(self.lengths, Q(0))

    def __eq__(self, other):
        return isinstance(other, Cactus) and to_arclist(self) == to_arclist(other)

    def __hash__(self):
        return hash(to_arclist(self))

    def __repr__(self):
        return f"Cactus({arclist_str(to_arclist(self))})"

    def normalized(self) -> "Cactus":
        return Cactus(self.tree, self.arcs, (Q(1),) * self.m)

    def projective(self) -> "Cactus":
        p = self.perimeter
        return Cactus(self.tree, self.arcs, tuple(x / p for x in self.lengths))

    def scaled(self, total) -> "Cactus":
        p = self.perimeter
        return Cactus(self.tree, self.arcs, tuple(x * Q(total) / p for x in self.lengths))

    def with_lengths(self, lengths) -> "Cactus":
        return Cactus(self.tree, self.arcs, tuple(lengths))

    def is_normalized(self) -> bool:
        return all(x == 1 for x in self.lengths)

    def is_projective(self) -> bool:
        return self.perimeter == 1


def star(m: int, lengths=None) -> Cactus:
    """The corolla cactus with lobes 1..m left to right at the root."""
    lengths = lengths if lengths is not None else (Q(1, m),) * m
    return Cactus(corolla(range(1, m + 1)), {i: (Q(1),) for i in range(1, m + 1)}, lengths)


def unit(length=1) -> Cactus:
    return star(1, (Q(length),))


# ------------------------------------------------------------- arc lists


def _raw_arclist(C: Cactus) -> list:
    out = []

    def walk_white(w: White):
        a = C.arcs[w.label]
        ln = C.lengths[w.label - 1]
        out.append((w.label, a[0] * ln))
        for q, b in enumerate(w.blacks):
            for ww in b.whites:
                walk_white(ww)
            out.append((w.label, a[q + 1] * ln))

    for w in C.tree.root.whites:
        walk_white(w)
    return out


def canonical_arclist(arcs) -> ArcList:
    """Drop zero arcs and merge neighbours with equal labels."""
    out: list = []
    for lab, ln in arcs:
        ln = Q(ln)
        if ln < 0:
            raise CactusError("negative arc length")
        if ln == 0:
            continue
        if out and out[-1][0] == lab:
            out[-1] = (lab, out[-1][1] + ln)
        else:
            out.append((lab, ln))
    return tuple(out)


def to_arclist(C: Cactus) -> ArcList:
    return canonical_arclist(_raw_arclist(C))


def arclist_str(A) -> str:
    return " ".join(f"{lab}:{ln}" for lab, ln in A)


class _Frame:
    __slots__ = ("label", "arcs", "blacks", "last_arc")

    def __init__(self, label, first_len):
        self.label = label
        self.arcs = [first_len]
        self.blacks: list = []
        self.last_arc = True


def from_arclist(A) -> Cactus:
    """Rebuild the cactus (on its minimal tree) from a perimeter arc list.

    Lobe lengths are the per-label totals, so the result is normalized or
    projective exactly when the input lengths are.
    """
    A = canonical_arclist(A)
    if not A:
        raise CactusError("empty arc list")
    labels = sorted({lab for lab, _ in A})
    m = len(labels)
    if labels != list(range(1, m + 1)):
        raise CactusError(f"labels must be 1..m, got {labels}")

    root_whites: list = []
    stack: list = []
    done: dict = {}
    seen: set = set()

    def pop():
        fr = stack.pop()
        if not fr.last_arc:
            fr.arcs.append(Q(0))
        done[fr.label] = fr
        node = ("w", fr.label)
        if stack:
            parent = stack[-1]
            parent.blacks[-1].append(node)
            parent.last_arc = False
        else:
            root_whites.append(node)

    for lab, ln in A:
        if stack and stack[-1].label == lab:
            fr = stack[-1]
            if fr.last_arc:
                fr.arcs[-1] += ln
            else:
                fr.arcs.append(ln)
                fr.last_arc = True
            continue
        if lab in seen:
            if not any(fr.label == lab for fr in stack):
                raise CactusError(f"pattern (i,j,i,j) at lobe {lab}: not a cactus")
            while stack[-1].label != lab:
                pop()
            fr = stack[-1]
            fr.arcs.append(ln)
            fr.last_arc = True
            continue
        seen.add(lab)
        if stack:
            parent = stack[-1]
            if parent.last_arc:
                parent.blacks.append([])
        stack.append(_Frame(lab, ln))
    while stack:
        pop()

    def build_white(lab):
        fr = done[lab]
        return White(lab, tuple(Black(tuple(build_white(x[1]) for x in b)) for b in fr.blacks))

    T = BwTree(Black(tuple(build_white(x[1]) for x in root_whites)))
    lengths = tuple(sum(fr.arcs, Q(0)) for fr in (done[i] for i in range(1, m + 1)))
    arcs = {i: tuple(x / lengths[i - 1] for x in done[i].arcs) for i in range(1, m + 1)}
    T, arcs = _collapse_zero_arcs(T, arcs)
    return Cactus(T, arcs, lengths)


def _collapse_zero_arcs(T: BwTree, arcs: dict):
    arcs = dict(arcs)
    changed = True
    while changed:
        changed = False
        for lab in range(1, T.m + 1):
            a = arcs[lab]
            if len(a) > 1 and 0 in a:
                i = a.index(0)
                T = angle_collapse(T, lab, i)
                arcs[lab] = a[:i] + a[i + 1 :]
                changed = True
                break
    return T, arcs


def minimal(C: Cactus) -> Cactus:
    T, arcs = _collapse_zero_arcs(C.tree, C.arcs)
    return Cactus(T, arcs, C.lengths)


def underlying_tree(C: Cactus) -> BwTree:
    return minimal(C).tree


def cactus_from_tree(T: BwTree, arcs=None, lengths=None) -> Cactus:
    """Cactus on T; missing arc data defaults to equal barycentric parts."""
    arcs = dict(arcs or {})
    for lab in range(1, T.m + 1):
        if lab not in arcs:
            k = T.white(lab).arity + 1
            arcs[lab] = (Q(1, k),) * k
    if lengths is None:
        lengths = (Q(1),) * T.m
    return Cactus(T, arcs, lengths)


# ------------------------------------------------------------- symmetric action


def sigma_act(C: Cactus, sigma: Sequence[int]) -> Cactus:
    """Right action: the lobe labelled l gets the label sigma^{-1}(l)."""
    inv = invert(sigma)
    T = C.tree.act(sigma)
    arcs = {inv[lab - 1]: a for lab, a in C.arcs.items()}
    lengths = [Q(0)] * C.m
    for lab in range(1, C.m + 1):
        lengths[inv[lab - 1] - 1] = C.lengths[lab - 1]
    return Cactus(T, arcs, tuple(lengths))


# ------------------------------------------------------------- composition


def _cut(A: ArcList, a: Fraction, b: Fraction) -> list:
    """Portion of the arc list A covering perimeter coordinates [a, b]."""
    out = []
    pos = Q(0)
    for lab, ln in A:
        lo, hi = max(pos, a), min(pos + ln, b)
        if hi > lo:
            out.append((lab, hi - lo))
        pos += ln
        if pos >= b:
            break
    return out


VARIANTS = ("projective", "unnormalized", "normalized")


def insert(C: Cactus, i: int, D: Cactus, variant: str = "projective") -> Cactus:
    """Partial composition C o_i D.

    The global root of D goes to the local root of lobe i and the outer
    circuit of D is identified with lobe i.  In the projective and
    unnormalized variants D is rescaled to the length of lobe i; in the
    normalized variant D keeps its lengths.
    """
    if variant not in VARIANTS:
        raise CactusError(f"unknown variant {variant!r}")
    m, k = C.m, D.m
    if not 1 <= i <= m:
        raise CactusError(f"insertion slot {i} out of range 1..{m}")
    len_i = C.lengths[i - 1]
    pD = D.perimeter
    scale = pD if variant == "normalized" else len_i
    AD = to_arclist(D)
    out = []
    pos = Q(0)
    for lab, ln in to_arclist(C):
        if lab == i:
            a, b = pos / len_i * pD, (pos + ln) / len_i * pD
            for lab2, ln2 in _cut(AD, a, b):
                out.append((lab2 + i - 1, ln2 / pD * scale))
            pos += ln
        else:
            out.append((lab + k - 1 if lab > i else lab, ln))
    return from_arclist(out)


def compose(C: Cactus, Ds: Sequence[Cactus], variant: str = "projective") -> Cactus:
    """Full composition gamma(C; D_1, ..., D_m), inserting from the last slot."""
    if len(Ds) != C.m:
        raise CactusError("need one cactus per lobe")
    out = C
    for i in range(C.m, 0, -1):
        out = insert(out, i, Ds[i - 1], variant)
    return out


def block_permutation(sigma: Sequence[int], ks: Sequence[int]) -> tuple:
    """tau with tau(offset_lhs(j) + r) = offset_rhs(sigma(j)) + r, where
    the lhs blocks have sizes k_{sigma(j)} and the rhs blocks sizes k_j."""
    m = len(sigma)
    off_rhs = [0] * (m + 1)
    for j in range(m):
        off_rhs[j + 1] = off_rhs[j] + ks[j]
    tau = []
    for j in range(m):
        s = sigma[j]
        for r in range(ks[s - 1]):
            tau.append(off_rhs[s - 1] + r + 1)
    return tuple(tau)


# ------------------------------------------------------------- circle maps


def local_root(C: Cactus, lab: int) -> Fraction:
    """Perimeter coordinate (from the global root) of the local root of a lobe."""
    pos = Q(0)
    for l2, ln in to_arclist(C):
        if l2 == lab:
            return pos
        pos += ln
    raise CactusError(f"no lobe {lab}")


def coend_eval(C: Cactus, s) -> tuple:
    """g(s) in (S^1)^m, S^1 = [0,1) in turns; s is a perimeter coordinate."""
    s = Q(s)
    P = C.perimeter
    if not 0 <= s < P:
        raise CactusError("s must lie in [0, perimeter)")
    acc = [Q(0)] * C.m
    pos = Q(0)
    for lab, ln in to_arclist(C):
        if pos >= s:
            break
        acc[lab - 1] += min(ln, s - pos)
        pos += ln
    return tuple((acc[i] / C.lengths[i]) % 1 for i in range(C.m))


def coend_speeds(C: Cactus) -> tuple:
    """Speed of pi_i o g on its non-constant pieces, with the perimeter
    normalized to one turn."""
    P = C.perimeter
    return tuple(P / x for x in C.lengths)


@dataclass(frozen=True)
class PLMap:
    """Continuous piecewise-linear map given by exact breakpoints."""

    xs: tuple
    ys: tuple

    def __call__(self, x):
        if isinstance(x, float):
            return self._eval_float(x)
        x = Q(x)
        xs, ys = self.xs, self.ys
        if x <= xs[0]:
            return ys[0]
        for k in range(1, len(xs)):
            if x <= xs[k]:
                x0, x1 = xs[k - 1], xs[k]
                return ys[k - 1] + (ys[k] - ys[k - 1]) * (x - x0) / (x1 - x0)
        return ys[-1]

    def _eval_float(self, x):
        xs, ys = self.xs, self.ys
        if x <= xs[0]:
            return float(ys[0])
        for k in range(1, len(xs)):
            if x <= xs[k]:
                x0, x1 = float(xs[k - 1]), float(xs[k])
                return float(ys[k - 1]) + float(ys[k] - ys[k - 1]) * (x - x0) / (x1 - x0)
        return float(ys[-1])


def perimeter_segments(C: Cactus) -> list:
    """(label, start, end) of every arc with the perimeter scaled to [-1, 1]."""
    A = to_arclist(C)
    P = C.perimeter
    pos = Q(-1)
    out = []
    for lab, ln in A:
        step = 2 * ln / P
        out.append((lab, pos, pos + step))
        pos += step
    return out


def rho(C: Cactus, lab: int) -> PLMap:
    """rho_l(C): fixes -1 and 1, constant off lobe l, affine on its arcs."""
    segs = perimeter_segments(C)
    total = sum((b - a for l2, a, b in segs if l2 == lab), Q(0))
    xs = [Q(-1)]
    ys = [Q(-1)]
    acc = Q(0)
    for l2, a, b in segs:
        if l2 == lab:
            acc += b - a
        xs.append(b)
        ys.append(-1 + 2 * acc / total)
    return PLMap(tuple(xs), tuple(ys))


# ------------------------------------------------------------- random cacti


def random_cactus(rng, m: int, kind: str = "projective", denom: int = 12, tree=None) -> Cactus:
    """Random cactus with small-denominator rational data.

    ``rng`` is a random.Random.  Arc partitions may contain zeros so that
    lower-dimensional cells are also sampled.
    """
    from .trees import enumerate_bw_trees

    T = tree if tree is not None else rng.choice(enumerate_bw_trees(m))
    arcs = {}
    for lab in range(1, m + 1):
        k = T.white(lab).arity + 1
        arcs[lab] = _random_simplex_point(rng, k, denom)
    if kind == "normalized":
        lengths = (Q(1),) * m
    else:
        raw = [rng.randint(1, denom) for _ in range(m)]
        if kind == "projective":
            lengths = tuple(Q(r, sum(raw)) for r in raw)
        else:
            lengths = tuple(Q(r, 4) for r in raw)
    return Cactus(T, arcs, lengths)


def _random_simplex_point(rng, k: int, denom: int) -> tuple:
    cuts = sorted(rng.randint(0, denom) for _ in range(k - 1))
    pts = [0] + cuts + [denom]
    return tuple(Q(pts[j + 1] - pts[j], denom) for j in range(k))


__all__ = [
    "ArcList",
    "Cactus",
    "CactusError",
    "EmptyOperadError",
    "PLMap",
    "TreeError",
    "VARIANTS",
    "arclist_str",
    "block_permutation",
    "cactus_from_tree",
    "canonical_arclist",
    "coend_eval",
    "coend_speeds",
    "compose",
    "from_arclist",
    "insert",
    "local_root",
    "minimal",
    "perimeter_segments",
    "random_cactus",
    "rho",
    "sigma_act",
    "star",
    "to_arclist",
    "underlying_tree",
    "unit",
]
