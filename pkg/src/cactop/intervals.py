"""Little intervals and cubes, overlapping intervals, the normalized
subspace Ov^1 and its projection onto normalized cacti.

Everything is exact: endpoints are Fractions.  A height order is a tuple
``sigma`` with ``sigma[h-1]`` the label at height h (height 1 is lowest),
so sigma^{-1}(i) is the height of interval i.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cacti import Cactus, from_arclist
from .trees import (
    BwTree,
    compatible_permutations,
    enumerate_bw_trees,
    invert,
    is_compatible,
    tree_stats,
)

Q = Fraction
II = (Q(-1), Q(1))


class OvError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Q(self.lo))
        object.__setattr__(self, "hi", Q(self.hi))
        if not (-1 <= self.lo < self.hi <= 1):
            raise OvError(f"bad interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def __call__(self, x):
        """The affine embedding I -> I with image this interval."""
        return (self.hi + self.lo) / 2 + (self.hi - self.lo) / 2 * x

    def inverse(self, y):
        return (y - (self.hi + self.lo) / 2) * 2 / (self.hi - self.lo)

    def compose(self, inner: "Interval") -> "Interval":
        return Interval(self(inner.lo), self(inner.hi))

    def overlaps(self, other: "Interval") -> bool:
        return max(self.lo, other.lo) < min(self.hi, other.hi)


UNIT = Interval(-1, 1)


def _iv(x) -> Interval:
    return x if isinstance(x, Interval) else Interval(Q(x[0]), Q(x[1]))


@dataclass(frozen=True)
class OvElement:
    """m intervals plus the height order on overlapping pairs.

    ``order`` holds (i, j) exactly when L_i and L_j overlap and i is
    below j.
    """

    intervals: tuple
    order: frozenset

    def __post_init__(self):
        ivs = tuple(_iv(x) for x in self.intervals)
        object.__setattr__(self, "intervals", ivs)
        order = frozenset((int(i), int(j)) for i, j in self.order)
        object.__setattr__(self, "order", order)
        m = len(ivs)
        for i, j in order:
            if not (1 <= i <= m and 1 <= j <= m) or i == j:
                raise OvError(f"bad order pair {(i, j)}")
            if not ivs[i - 1].overlaps(ivs[j - 1]):
                raise OvError(f"order pair {(i, j)} on non-overlapping intervals")
        for i, j in itertools.combinations(range(1, m + 1), 2):
            if ivs[i - 1].overlaps(ivs[j - 1]):
                if ((i, j) in order) == ((j, i) in order):
                    raise OvError(f"overlapping pair {(i, j)} must be ordered exactly once")
        if _topo(m, order) is None:
            raise OvError("height order has a cycle")

    @classmethod
    def from_sigma(cls, intervals, sigma: Sequence[int]) -> "OvElement":
        ivs = tuple(_iv(x) for x in intervals)
        m = len(ivs)
        if sorted(sigma) != list(range(1, m + 1)):
            raise OvError("sigma must be a permutation of 1..m")
        h = invert(sigma)
        order = set()
        for i, j in itertools.permutations(range(1, m + 1), 2):
            if ivs[i - 1].overlaps(ivs[j - 1]) and h[i - 1] < h[j - 1]:
                order.add((i, j))
        return cls(ivs, frozenset(order))

    @property
    def m(self) -> int:
        return len(self.intervals)

    def sigma(self) -> tuple:
        """Lexicographically smallest linear extension."""
        return _topo(self.m, self.order)

    def linear_extensions(self) -> list:
        out = []
        for perm in itertools.permutations(range(1, self.m + 1)):
            h = invert(perm)
            if all(h[i - 1] < h[j - 1] for i, j in self.order):
                out.append(perm)
        return out

    def act(self, sigma: Sequence[int]) -> "OvElement":
        """Right action [(L_i), tau] sigma = [(L_sigma(i)), sigma^{-1} tau]."""
        inv = invert(sigma)
        ivs = tuple(self.intervals[s - 1] for s in sigma)
        order = frozenset((inv[i - 1], inv[j - 1]) for i, j in self.order)
        return OvElement(ivs, order)

    def to_json(self) -> dict:
        from .rational import fmt_q

        return {
            "intervals": [[fmt_q(L.lo), fmt_q(L.hi)] for L in self.intervals],
            "order": sorted([list(p) for p in self.order]),
        }

    @classmethod
    def from_json(cls, data) -> "OvElement":
        from .rational import parse_q

        ivs = [Interval(parse_q(a), parse_q(b)) for a, b in data["intervals"]]
        return cls(tuple(ivs), frozenset(tuple(p) for p in data.get("order", [])))


def _topo(m: int, order) -> tuple | None:
    below = {j: set() for j in range(1, m + 1)}
    for i, j in order:
        below[j].add(i)
    out = []
    placed = set()
    while len(out) < m:
        ready = [j for j in range(1, m + 1) if j not in placed and below[j] <= placed]
        if not ready:
            return None
        out.append(ready[0])
        placed.add(ready[0])
    return tuple(out)


def ov_equal(a: OvElement, b: OvElement) -> bool:
    return a.m == b.m and a.intervals == b.intervals and a.order == b.order


def ov_identity() -> OvElement:
    return OvElement((UNIT,), frozenset())


def ov_compose(outer: OvElement, inners: Sequence[OvElement]) -> OvElement:
    """gamma(outer; inners), heights by the block permutation beta."""
    m = outer.m
    if len(inners) != m:
        raise OvError("need one inner element per interval")
    sigma = outer.sigma()
    ks = [e.m for e in inners]
    taus = [e.sigma() for e in inners]
    sinv = invert(sigma)
    ivs = []
    height = []
    for i in range(1, m + 1):
        tinv = invert(taus[i - 1])
        below = sum(ks[sigma[l] - 1] for l in range(sinv[i - 1] - 1))
        for j in range(1, ks[i - 1] + 1):
            ivs.append(outer.intervals[i - 1].compose(inners[i - 1].intervals[j - 1]))
            height.append(below + tinv[j - 1])
    beta = [0] * len(height)
    for lab, h in enumerate(height, start=1):
        beta[h - 1] = lab
    return OvElement.from_sigma(ivs, beta)


def ov_insert(outer: OvElement, i: int, inner: OvElement) -> OvElement:
    inners = [ov_identity()] * outer.m
    inners[i - 1] = inner
    return ov_compose(outer, inners)


def ov_compose_by_heights(outer: OvElement, inners: Sequence[OvElement]) -> OvElement:
    """Reference composition: nested integer heights, re-read the order."""
    sigma = outer.sigma()
    H = invert(sigma)
    ivs = []
    keys = []
    for i in range(1, outer.m + 1):
        e = inners[i - 1]
        h = invert(e.sigma())
        for j in range(1, e.m + 1):
            ivs.append(outer.intervals[i - 1].compose(e.intervals[j - 1]))
            keys.append((H[i - 1], h[j - 1]))
    n = len(ivs)
    order = set()
    for a, b in itertools.permutations(range(n), 2):
        if ivs[a].overlaps(ivs[b]) and keys[a] < keys[b]:
            order.add((a + 1, b + 1))
    return OvElement(tuple(ivs), frozenset(order))


def star_ov(m: int) -> OvElement:
    """*_m: the intervals [-1 + 2(i-1)/m, -1 + 2i/m] side by side."""
    h = Q(2, m)
    return OvElement(tuple(Interval(-1 + h * (i - 1), -1 + h * i) for i in range(1, m + 1)), frozenset())


def random_ov(rng, m: int, denom: int = 8) -> OvElement:
    ivs = []
    for _ in range(m):
        a, b = sorted(rng.sample(range(-denom, denom + 1), 2))
        ivs.append(Interval(Q(a, denom), Q(b, denom)))
    sigma = tuple(rng.sample(range(1, m + 1), m))
    return OvElement.from_sigma(ivs, sigma)


# ----------------------------------------------------------------- cubes


@dataclass(frozen=True)
class Cube2:
    x: Interval
    y: Interval

    def compose(self, inner: "Cube2") -> "Cube2":
        return Cube2(self.x.compose(inner.x), self.y.compose(inner.y))

    def overlaps(self, other: "Cube2") -> bool:
        return self.x.overlaps(other.x) and self.y.overlaps(other.y)


def check_cubes(cubes: Sequence[Cube2]):
    for a, b in itertools.combinations(range(len(cubes)), 2):
        if cubes[a].overlaps(cubes[b]):
            raise OvError(f"cubes {a + 1} and {b + 1} overlap")


def cubes_compose(outer: Sequence[Cube2], inners: Sequence[Sequence[Cube2]]) -> list:
    out = []
    for c, inner in zip(outer, inners):
        out.extend(c.compose(d) for d in inner)
    return out


def cubes2_to_ov(cubes: Sequence[Cube2]) -> OvElement:
    """x-shadows, heights ordered by y-centres."""
    check_cubes(cubes)
    m = len(cubes)
    order = set()
    for i, j in itertools.permutations(range(1, m + 1), 2):
        a, b = cubes[i - 1], cubes[j - 1]
        if a.x.overlaps(b.x):
            ca, cb = a.y.lo + a.y.hi, b.y.lo + b.y.hi
            if ca == cb:
                raise OvError(f"cubes {i} and {j} overlap in x with equal y-centres")
            if ca < cb:
                order.add((i, j))
    return OvElement(tuple(c.x for c in cubes), frozenset(order))


def ov_to_cubes(e: OvElement) -> list:
    """A preimage under cubes2_to_ov: stack by the stored linear extension."""
    m = e.m
    if m == 0:
        return []
    h = invert(e.sigma())
    step = Q(2, m)
    return [
        Cube2(e.intervals[i], Interval(-1 + step * (h[i] - 1), -1 + step * h[i]))
        for i in range(m)
    ]


def random_cubes(rng, m: int, denom: int = 8) -> list:
    """Random disjoint cubes: a random grid of rows with side-by-side
    x-shadows inside each row."""
    rows = rng.randint(1, m)
    assign = [rng.randrange(rows) for _ in range(m)]
    ys = sorted(rng.sample(range(-denom, denom + 1), 2 * rows))
    cubes: list = [None] * m
    for r in range(rows):
        members = [i for i in range(m) if assign[i] == r]
        if not members:
            continue
        xs = sorted(rng.sample(range(-denom, denom + 1), 2 * len(members)))
        for k, i in enumerate(members):
            cubes[i] = Cube2(
                Interval(Q(xs[2 * k], denom), Q(xs[2 * k + 1], denom)),
                Interval(Q(ys[2 * r], denom), Q(ys[2 * r + 1], denom)),
            )
    return cubes


# ------------------------------------------------------------------- Ov^1


@dataclass(frozen=True)
class Ov1Witness:
    tree: BwTree
    sigma: tuple
    black_intervals: dict  # black path -> (x_v, y_v)


@dataclass(frozen=True)
class Bounds:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction


def white_bounds(T: BwTree, sigma, lab: int, xv, yv) -> Bounds:
    m = T.m
    h = Q(2, m)
    st = tree_stats(T, lab, sigma)
    from .trees import alpha_white

    def A(ws):
        return sum((alpha_white(T, w) for w in ws), 0)

    lam_minus = [w for w in st.lam if w not in st.lam_plus]
    rho_minus = [w for w in st.rho if w not in st.rho_plus]
    return Bounds(xv + h * A(lam_minus), xv + h * A(st.lam), yv - h * A(st.rho), yv - h * A(rho_minus))


def reconstruct_blacks(T: BwTree, e: OvElement) -> dict:
    out = {}
    for path, (b, _) in T.blacks.items():
        if path == ():
            out[path] = II
        else:
            xs = [e.intervals[w.label - 1].lo for w in b.whites]
            ys = [e.intervals[w.label - 1].hi for w in b.whites]
            out[path] = (min(xs), max(ys))
    return out


def check_witness(e: OvElement, T: BwTree, sigma) -> Ov1Witness | None:
    """Witness for e in Ov^1(m, sigma, T) if the bounds hold, else None."""
    if T.m != e.m or not is_compatible(T, sigma):
        return None
    hinv = invert(sigma)
    if any(hinv[i - 1] > hinv[j - 1] for i, j in e.order):
        return None
    from .trees import alpha_black

    h = Q(2, e.m)
    K = reconstruct_blacks(T, e)
    for lab in range(1, e.m + 1):
        xv, yv = K[T.parent_black(lab)]
        bd = white_bounds(T, sigma, lab, xv, yv)
        L = e.intervals[lab - 1]
        if not (bd.a <= L.lo <= bd.b and bd.c <= L.hi <= bd.d):
            return None
        prev = None
        for p in T.black_children(lab):
            x, y = K[p]
            if y - x != alpha_black(T, p) * h:
                return None
            if x < bd.b or y > bd.c:
                return None
            if prev is not None and x < prev:
                return None
            prev = y
    return Ov1Witness(T, tuple(sigma), K)


def _tree_admissible(e: OvElement, T: BwTree) -> bool:
    """The sigma-independent half of the witness bounds, used to prune
    trees before trying linear extensions."""
    from .trees import alpha_black, alpha_white

    h = Q(2, e.m)
    K = reconstruct_blacks(T, e)
    for path, (xv, yv) in K.items():
        if path and yv - xv != alpha_black(T, path) * h:
            return False
    for lab in range(1, e.m + 1):
        xv, yv = K[T.parent_black(lab)]
        st = tree_stats(T, lab)
        L = e.intervals[lab - 1]
        lo_max = xv + h * sum(alpha_white(T, w) for w in st.lam)
        hi_min = yv - h * sum(alpha_white(T, w) for w in st.rho)
        if not (xv <= L.lo <= lo_max and hi_min <= L.hi <= yv):
            return False
    return True


def ov1_witnesses(e: OvElement, first_only: bool = False) -> list:
    out = []
    sigmas = e.linear_extensions()
    for T in enumerate_bw_trees(e.m):
        if not _tree_admissible(e, T):
            continue
        for sigma in sigmas:
            w = check_witness(e, T, sigma)
            if w is not None:
                out.append(w)
                if first_only:
                    return out
    return out


def ov1_membership(e: OvElement) -> Ov1Witness | None:
    ws = ov1_witnesses(e, first_only=True)
    return ws[0] if ws else None


def p_m(e: OvElement, w: Ov1Witness) -> Cactus:
    """Projection Ov^1(m) -> Cact^1(m) using a witness (sigma, T, K)."""
    T, sigma, K = w.tree, w.sigma, w.black_intervals
    if check_witness(e, T, sigma) is None:
        raise OvError("not a witness for this element")
    m = e.m
    arcs = {}
    for lab in range(1, m + 1):
        xv, yv = K[T.parent_black(lab)]
        bd = white_bounds(T, sigma, lab, xv, yv)
        pts = [bd.b]
        for p in T.black_children(lab):
            pts.extend(K[p])
        pts.append(bd.c)
        gaps = [pts[2 * k + 1] - pts[2 * k] for k in range(len(pts) // 2)]
        arcs[lab] = tuple(g * m / 2 for g in gaps)
    from .cacti import minimal

    return minimal(Cactus(T, arcs, (Q(1),) * m))


def p_m_by_heights(e: OvElement, sigma=None) -> Cactus:
    """Reference projection: label each point of I by the visible (highest)
    interval, scale lengths by m/2 and read the arc list."""
    sigma = sigma or e.sigma()
    h = invert(sigma)
    cuts = sorted({Q(-1), Q(1)} | {L.lo for L in e.intervals} | {L.hi for L in e.intervals})
    arcs = []
    for a, b in zip(cuts, cuts[1:]):
        mid = (a + b) / 2
        cover = [i for i in range(1, e.m + 1) if e.intervals[i - 1].lo < mid < e.intervals[i - 1].hi]
        if not cover:
            raise OvError("point of I covered by no interval")
        top = max(cover, key=lambda i: h[i - 1])
        arcs.append((top, (b - a) * e.m / 2))
    C = from_arclist(arcs)
    if not C.is_normalized():
        raise OvError("visible lengths are not normalized")
    return C


def random_ov1(rng, m: int, denom: int = 6, tree=None, sigma=None) -> tuple:
    """Random element of Ov^1(m, sigma, T) sampled top-down; returns
    (element, T, sigma)."""
    from .trees import alpha_black

    T = tree or rng.choice(enumerate_bw_trees(m))
    sigma = sigma or rng.choice(compatible_permutations(T))
    h = Q(2, m)
    K = {(): II}
    ivs: dict = {}

    def rq(lo, hi):
        if lo == hi:
            return lo
        return lo + (hi - lo) * Q(rng.randint(0, denom), denom)

    def visit(path):
        xv, yv = K[path]
        b = T.blacks[path][0]
        for w in b.whites:
            lab = w.label
            bd = white_bounds(T, sigma, lab, xv, yv)
            ivs[lab] = Interval(rq(bd.a, bd.b), rq(bd.c, bd.d))
            kids = T.black_children(lab)
            cuts = sorted(rng.randint(0, denom) for _ in range(len(kids)))
            pos = bd.b
            prev = 0
            for p, cut in zip(kids, cuts):
                pos += h * Q(cut - prev, denom)
                prev = cut
                ln = alpha_black(T, p) * h
                K[p] = (pos, pos + ln)
                pos += ln
            for p in kids:
                visit(p)

    visit(())
    e = OvElement.from_sigma([ivs[i] for i in range(1, m + 1)], sigma)
    return e, T, tuple(sigma)


# --------------------------------------------------------- the Ov^1(2) circle


def ov1_circle(u) -> OvElement:
    """Parametrization of Ov^1(2) by u in [0, 8) (angle u*pi/4).

    u in [-1, 1] (mod 8) and [3, 5] are the fibres over the two
    0-cells; [1, 3] and [5, 7] are the two tower edges.
    """
    u = Q(u) % 8
    if u >= 7:
        u -= 8
    if u == 0:
        return OvElement.from_sigma([(-1, 0), (0, 1)], (1, 2))
    if -1 <= u < 0:
        return OvElement.from_sigma([(-1, -u), (0, 1)], (1, 2))
    if 0 < u <= 1:
        return OvElement.from_sigma([(-1, 0), (-u, 1)], (2, 1))
    if 1 < u < 3:
        s = (u - 1) / 2 - 1
        return OvElement.from_sigma([(s, s + 1), (-1, 1)], (2, 1))
    if 3 <= u <= 4:
        return OvElement.from_sigma([(0, 1), (-1, 1 - (u - 3))], (2, 1))
    if 4 < u <= 5:
        return OvElement.from_sigma([(-(u - 4), 1), (-1, 0)], (1, 2))
    s = (u - 5) / 2 - 1
    return OvElement.from_sigma([(-1, 1), (s, s + 1)], (1, 2))


CIRCLE_VERTICES = (Q(0), Q(1), Q(3), Q(4), Q(5), Q(7))
