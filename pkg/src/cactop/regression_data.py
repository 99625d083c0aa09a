"""Hand-encoded combinatorial data for the worked examples used as
regression fixtures."""
from __future__ import annotations

from fractions import Fraction

from .trees import Black, BwTree, White, Leaf, UNode


def _w(label, *blacks):
    return White(label, tuple(blacks))


def _b(*whites):
    return Black(tuple(whites))


def tree19() -> BwTree:
    """The 19-white tree with sigma = id used for the alpha/lambda/rho
    statistics regression."""
    v6 = _b(_w(7), _w(8), _w(14))
    v2 = _b(_w(15))
    v5 = _b(_w(16))
    v1 = _b(_w(6, v6), _w(9), _w(10), _w(11), _w(12, v2), _w(13, v5))
    vA = _b(_w(5, v1))
    v3 = _b(_w(17), _w(18), _w(19))
    root = _b(_w(2), _w(1, vA), _w(4, v3), _w(3))
    return BwTree(root)


# named black vertices of tree19 as paths (white position, black position)
TREE19_BLACKS = {
    "v_r": (),
    "v1": ((1, 0), (0, 0)),
    "v2": ((1, 0), (0, 0), (4, 0)),
    "v3": ((2, 0),),
    "v6": ((1, 0), (0, 0), (0, 0)),
}

# expected statistics: name -> alpha for black vertices
TREE19_ALPHA_BLACK = {"v_r": 19, "v1": 11, "v2": 1, "v3": 3, "v6": 3}

# white label -> (alpha, lambda, lambda+, rho, rho+) under sigma = id
TREE19_WHITE = {
    3: (1, {2, 1, 4}, {4}, set(), set()),
    4: (4, {2, 1}, set(), {3}, set()),
    11: (1, {10, 9, 6}, set(), {13, 12}, {13, 12}),
}


def seven_lobe_tree() -> BwTree:
    root = _b(_w(2, _b(_w(6), _w(1, _b(_w(4)), _b(_w(3))))), _w(7), _w(5))
    return BwTree(root)


def seven_lobe_cactus():
    """The 7-lobe projective cactus, all lobes of length 1/7, with the
    12-point parameter t at fixed positions on the perimeter."""
    from .cacti import Cactus

    T = seven_lobe_tree()
    h = Fraction(1, 2)
    q = Fraction(1, 4)
    arcs = {lab: (Fraction(1),) for lab in range(1, 8)}
    arcs[2] = (h, h)
    arcs[1] = (h, q, q)
    lengths = tuple(Fraction(1, 7) for _ in range(7))
    return Cactus(T, arcs, lengths)


def seven_lobe_t() -> tuple:
    """Points of the 12-simplex on the perimeter [-1,1] (total length 2).

    Perimeter layout (each lobe has length 2/7): lobe 2 arc0 [1/7 long],
    lobe 6, lobe 1 arc0, lobe 4, lobe 1 arc1, lobe 3, lobe 1 arc2,
    lobe 2 arc1, lobe 7, lobe 5.
    """
    from .cacti import Cactus  # noqa: F401

    u = Fraction(2, 7)
    pos = Fraction(-1)
    segs = []
    for lab, ln in [
        (2, u / 2), (6, u), (1, u / 2), (4, u), (1, u / 4), (3, u),
        (1, u / 4), (2, u / 2), (7, u), (5, u),
    ]:
        segs.append((lab, pos, pos + ln))
        pos += ln
    assert pos == 1
    s = {i: seg for i, seg in enumerate(segs)}

    def inside(k, a, b):
        lo, hi = s[k][1], s[k][2]
        return lo + (hi - lo) * Fraction(a, b)

    t = [
        Fraction(-1),            # t1 at the global root, on lobe 2
        inside(2, 1, 3),         # t2, t3 on lobe 1, first arc
        inside(2, 2, 3),
        s[3][1],                 # t4 at the start of lobe 4
        inside(5, 1, 4),         # t5..t7 inside lobe 3
        inside(5, 1, 2),
        inside(5, 3, 4),
        s[5][2],                 # t8 at the end of lobe 3
        inside(8, 1, 2),         # t9 on lobe 7
        inside(9, 1, 3),         # t10, t11 on lobe 5
        inside(9, 2, 3),
        Fraction(1),             # t12 at the end
    ]
    return tuple(t)


SEVEN_LOBE_S = {
    1: {1, 2, 3, 4, 8},
    2: {0, 1, 8},
    3: {4, 5, 6, 7, 8},
    4: {3, 4},
    5: {9, 10, 11, 12},
    6: {1},
    7: {8, 9},
}


def seven_lobe_upsilon():
    L = Leaf
    n4 = UNode(4, (L(4),))
    n3 = UNode(3, (L(5), L(6), L(7), L(8)))
    n1 = UNode(1, (L(2), L(3), n4, n3))
    n6 = UNode(6, ())
    n2 = UNode(2, (L(1), n6, n1))
    n7 = UNode(7, (L(9),))
    n5 = UNode(5, (L(10), L(11), L(12)))
    return UNode(0, (n2, n7, n5))
