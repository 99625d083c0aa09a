import itertools
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cactop import cacti as K
from cactop import trees as T
from cactop.regression_data import seven_lobe_cactus, seven_lobe_tree


@st.composite
def cactus(draw, lo=1, hi=4, kind="projective"):
    seed = draw(st.integers(0, 2**32 - 1))
    R = random.Random(seed)
    return K.random_cactus(R, R.randint(lo, hi), kind)


def test_star2_arclist():
    assert K.to_arclist(K.star(2)) == ((1, Q(1, 2)), (2, Q(1, 2)))


def test_two_story_arclist():
    a = Q(1, 3)
    tower = T.BwTree.from_flat({"root": 0, "children": [[1], [2], [3], []], "colors": "bwbw", "white_labels": [1, 3]})
    C = K.Cactus(tower, {1: (a, 1 - a), 2: (Q(1),)}, (Q(1), Q(1)))
    assert K.to_arclist(C) == ((1, a), (2, Q(1)), (1, 1 - a))


def test_seven_lobe_roundtrip_exact():
    C = seven_lobe_cactus()
    back = K.from_arclist(K.to_arclist(C))
    assert back == C
    assert K.to_arclist(back) == K.to_arclist(C)
    assert K.underlying_tree(C) == seven_lobe_tree()


def test_crossing_arclist_rejected():
    with pytest.raises(K.CactusError):
        K.from_arclist([(1, Q(1)), (2, Q(1)), (1, Q(1)), (2, Q(1))])


@given(cactus(1, 5))
def test_arclist_roundtrip(C):
    A = K.to_arclist(C)
    assert K.from_arclist(A) == C.projective()
    assert K.to_arclist(K.from_arclist(A)) == A
    labels = [lab for lab, _ in A]
    assert all(a != b for a, b in zip(labels, labels[1:]))
    for lab in range(1, C.m + 1):
        assert sum((x for l2, x in A if l2 == lab), Q(0)) == C.lengths[lab - 1]


def test_zero_arc_gives_collapsed_tree():
    t = T.enumerate_bw_trees(2, 1)[0]
    lab = next(l for l, a in t.arities().items() if a)
    for i in (0, 1):
        arcs = {1: (Q(1),), 2: (Q(1),)}
        arcs[lab] = (Q(0), Q(1)) if i == 0 else (Q(1), Q(0))
        C = K.Cactus(t, arcs, (Q(1, 2), Q(1, 2)))
        assert K.underlying_tree(C) == T.angle_collapse(t, lab, i)


def test_normalized_star_speed():
    for m in (1, 2, 3, 5):
        assert K.coend_speeds(K.star(m, (Q(1),) * m)) == (m,) * m


@given(cactus(1, 4))
def test_coend_is_degree_one(C):
    P = C.perimeter
    assert K.coend_speeds(C) == tuple(P / x for x in C.lengths)
    # each factor advances by exactly one turn around the perimeter
    n = 48
    pts = [K.coend_eval(C, P * k / n) for k in range(n)]
    for i in range(C.m):
        total = sum(((pts[(k + 1) % n][i] - pts[k][i]) % 1 for k in range(n)), Q(0))
        assert total == 1


def test_rho_star2():
    r1 = K.rho(K.star(2), 1)
    for x in (Q(-1), Q(-1, 2), Q(0)):
        assert r1(x) == 2 * x + 1
    for x in (Q(1, 3), Q(1)):
        assert r1(x) == 1


@given(cactus(1, 4), st.data())
def test_rho_properties(C, data):
    lab = data.draw(st.integers(1, C.m))
    r = K.rho(C, lab)
    assert r(Q(-1)) == -1 and r(Q(1)) == 1
    xs = sorted({Q(k, 24) for k in range(-24, 25)} | set(r.xs))
    ys = [r(x) for x in xs]
    assert all(a <= b for a, b in zip(ys, ys[1:]))
    for l2, a, b in K.perimeter_segments(C):
        if l2 != lab:
            assert r(a) == r(b)


def test_unit_law_relabels():
    R = random.Random(1)
    for _ in range(20):
        C = K.random_cactus(R, R.randint(1, 4))
        for i in range(1, C.m + 1):
            assert K.insert(C, i, K.unit()) == C
        assert K.insert(K.unit(), 1, C) == C


@given(cactus(1, 3), cactus(1, 3), cactus(1, 3), st.data())
def test_projective_associativity(A, B, C, data):
    i = data.draw(st.integers(1, A.m))
    j = data.draw(st.integers(1, B.m))
    assert K.insert(K.insert(A, i, B), i + j - 1, C) == K.insert(A, i, K.insert(B, j, C))
    if A.m >= 2:
        a, b = sorted(data.draw(st.permutations(range(1, A.m + 1)))[:2])
        assert K.insert(K.insert(A, b, C), a, B) == K.insert(K.insert(A, a, B), b + B.m - 1, C)


def test_normalized_insertion_is_not_associative():
    A = K.from_arclist([(1, Q(3, 4)), (2, Q(1)), (1, Q(1, 4))]).normalized()
    B = K.from_arclist([(1, Q(1)), (2, Q(1))]).normalized()
    C = K.from_arclist([(2, Q(1)), (1, Q(1))]).normalized()
    v = "normalized"
    left = K.insert(K.insert(A, 1, B, v), 1, C, v)
    right = K.insert(A, 1, K.insert(B, 1, C, v), v)
    assert left != right
    assert K.arclist_str(K.to_arclist(left)) == "2:1 1:1 3:1/2 4:1 3:1/2"
    assert K.arclist_str(K.to_arclist(right)) == "2:1 1:1 3:1/4 4:1 3:3/4"


@given(cactus(1, 3, kind="unnormalized"), cactus(1, 3, kind="unnormalized"), cactus(1, 3, kind="unnormalized"), st.data())
def test_unnormalized_associativity_and_right_unit(A, B, C, data):
    v = "unnormalized"
    i = data.draw(st.integers(1, A.m))
    j = data.draw(st.integers(1, B.m))
    left = K.insert(K.insert(A, i, B, v), i + j - 1, C, v)
    right = K.insert(A, i, K.insert(B, j, C, v), v)
    assert K.to_arclist(left) == K.to_arclist(right)
    assert K.to_arclist(K.insert(A, i, K.unit(), v)) == K.to_arclist(A)


def test_insert_slot_out_of_range():
    with pytest.raises(K.CactusError):
        K.insert(K.star(2), 3, K.unit())
    with pytest.raises(K.EmptyOperadError):
        K.Cactus(T.BwTree(T.Black(())), {}, ())


def test_sigma_identity_and_right_action():
    R = random.Random(4)
    for m in (1, 2, 3, 4):
        perms = list(itertools.permutations(range(1, m + 1)))
        for _ in range(5):
            C = K.random_cactus(R, m)
            assert K.sigma_act(C, tuple(range(1, m + 1))) == C
            for s in perms:
                for u in perms:
                    assert K.sigma_act(K.sigma_act(C, s), u) == K.sigma_act(C, T.compose_perm(s, u))


@given(cactus(1, 3), st.data())
def test_insertion_equivariance(C, data):
    Ds = [data.draw(cactus(1, 3)) for _ in range(C.m)]
    s = tuple(data.draw(st.permutations(range(1, C.m + 1))))
    inner = [Ds[k - 1] for k in T.invert(s)]
    lhs = K.compose(K.sigma_act(C, s), Ds)
    rhs = K.sigma_act(K.compose(C, inner), K.block_permutation(s, [D.m for D in inner]))
    assert lhs == rhs


def test_local_roots_of_star():
    C = K.star(3)
    assert [K.local_root(C, lab) for lab in (1, 2, 3)] == [0, Q(1, 3), Q(2, 3)]


@pytest.mark.parametrize("variant", K.VARIANTS)
def test_insert_into_second_lobe(variant):
    out = K.insert(K.star(3), 2, K.star(2), variant)
    assert out.m == 4 and K.underlying_tree(out).key() == "b(w1(),w2(),w3(),w4())"
    A = K.from_arclist([(1, Q(1, 2)), (2, Q(1)), (1, Q(1, 2)), (3, Q(1))])
    B = K.from_arclist([(1, Q(1, 3)), (2, Q(1)), (1, Q(2, 3))])
    out = K.insert(A, 2, B, variant)
    assert K.underlying_tree(out).key() == "b(w1(b(w2(b(w3())))),w4())"
    # the circuit of B replaces lobe 2; only Cact^1 keeps its length
    inner = "2:1/3 3:1 2:2/3" if variant == "normalized" else "2:1/6 3:1/2 2:1/3"
    assert K.arclist_str(K.to_arclist(out)) == f"1:1/2 {inner} 1:1/2 4:1"
