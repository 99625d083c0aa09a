import itertools
import random
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cactop import cacti as K
from cactop import intervals as I
from cactop import trees as T


@st.composite
def ov(draw, lo=0, hi=4):
    R = random.Random(draw(st.integers(0, 2**32 - 1)))
    return I.random_ov(R, R.randint(lo, hi))


def test_equality_examples():
    a = I.OvElement.from_sigma([(-1, 0), (0, 1)], (1, 2))
    b = I.OvElement.from_sigma([(-1, 0), (0, 1)], (2, 1))
    assert I.ov_equal(a, b)
    c = I.OvElement.from_sigma([(-1, 1), (-1, 1)], (1, 2))
    d = I.OvElement.from_sigma([(-1, 1), (-1, 1)], (2, 1))
    assert not I.ov_equal(c, d)


def test_bad_elements_rejected():
    with pytest.raises(I.OvError):
        I.Interval(0, 0)
    with pytest.raises(I.OvError):
        I.Interval(-2, 0)
    with pytest.raises(I.OvError):
        I.OvElement(((-1, 1), (-1, 1)), frozenset())
    with pytest.raises(I.OvError):
        I.OvElement(((-1, 0), (0, 1)), frozenset({(1, 2)}))
    with pytest.raises(I.OvError):
        I.OvElement(((-1, 1),) * 3, frozenset({(1, 2), (2, 3), (3, 1)}))


@given(ov(1, 4))
def test_unit_laws(e):
    ident = I.ov_identity()
    assert I.ov_equal(I.ov_compose(e, [ident] * e.m), e)
    assert I.ov_equal(I.ov_compose(ident, [e]), e)


@given(ov(1, 3), st.data())
def test_compose_matches_height_oracle(e, data):
    inners = [data.draw(ov(0, 3)) for _ in range(e.m)]
    assert I.ov_equal(I.ov_compose(e, inners), I.ov_compose_by_heights(e, inners))


@given(ov(1, 3), ov(0, 3), ov(0, 3), st.data())
def test_associativity(e, f, g, data):
    i = data.draw(st.integers(1, e.m))
    if f.m:
        j = data.draw(st.integers(1, f.m))
        assert I.ov_equal(I.ov_insert(I.ov_insert(e, i, f), i + j - 1, g), I.ov_insert(e, i, I.ov_insert(f, j, g)))


@given(ov(1, 3), st.data())
def test_equivariance(e, data):
    Ds = [data.draw(ov(0, 3)) for _ in range(e.m)]
    s = tuple(data.draw(st.permutations(range(1, e.m + 1))))
    inner = [Ds[k - 1] for k in T.invert(s)]
    rhs = I.ov_compose(e, inner).act(K.block_permutation(s, [D.m for D in inner]))
    assert I.ov_equal(I.ov_compose(e.act(s), Ds), rhs)


@given(ov(1, 4), st.data())
def test_action_is_right_action_and_gate_equivariant(e, data):
    s = tuple(data.draw(st.permutations(range(1, e.m + 1))))
    u = tuple(data.draw(st.permutations(range(1, e.m + 1))))
    assert I.ov_equal(e.act(s).act(u), e.act(T.compose_perm(s, u)))
    if e.m <= 3:
        assert (I.ov1_membership(e) is None) == (I.ov1_membership(e.act(s)) is None)


def test_cubes_examples():
    stacked = [I.Cube2(I.UNIT, I.Interval(-1, 0)), I.Cube2(I.UNIT, I.Interval(0, 1))]
    e = I.cubes2_to_ov(stacked)
    assert e.intervals == (I.UNIT, I.UNIT) and e.order == {(1, 2)}
    side = [I.Cube2(I.Interval(-1, 0), I.UNIT), I.Cube2(I.Interval(0, 1), I.UNIT)]
    e = I.cubes2_to_ov(side)
    assert e.intervals == (I.Interval(-1, 0), I.Interval(0, 1)) and e.order == frozenset()
    with pytest.raises(I.OvError):
        I.cubes2_to_ov([I.Cube2(I.UNIT, I.UNIT)] * 2)


@given(ov(0, 4))
def test_cubes_preimage_exists(e):
    assert I.ov_equal(I.cubes2_to_ov(I.ov_to_cubes(e)), e)


def test_gate_examples():
    for m in range(1, 5):
        e = I.star_ov(m)
        assert [(L.lo, L.hi) for L in e.intervals] == [(-1 + Q(2 * k, m), -1 + Q(2 * (k + 1), m)) for k in range(m)]
        w = I.ov1_membership(e)
        assert w.tree == T.corolla(range(1, m + 1))
        assert I.p_m(e, w) == K.star(m).normalized()
    a = I.OvElement.from_sigma([(-1, 1), (Q(-1, 2), Q(1, 2))], (1, 2))
    b = I.OvElement.from_sigma([(-1, 0), (0, 1)], (1, 2))
    assert I.ov1_membership(a) and I.ov1_membership(b)
    assert I.ov1_membership(I.ov_insert(a, 1, b)) is None


def test_witness_reconstruction_property():
    R = random.Random(8)
    for _ in range(60):
        e, _, _ = I.random_ov1(R, R.randint(1, 3))
        for w in I.ov1_witnesses(e):
            for path, (x, y) in w.black_intervals.items():
                if path == ():
                    assert (x, y) == (-1, 1)
                    continue
                b = w.tree.blacks[path][0]
                assert x == min(e.intervals[v.label - 1].lo for v in b.whites)
                assert y == max(e.intervals[v.label - 1].hi for v in b.whites)


def test_pm_witness_independence_and_height_oracle():
    R = random.Random(9)
    multi = 0
    for _ in range(150):
        e, _, _ = I.random_ov1(R, 3)
        ws = I.ov1_witnesses(e)
        multi += len(ws) > 1
        images = {I.p_m(e, w) for w in ws}
        assert len(images) == 1
        assert images.pop() == I.p_m_by_heights(e)
    assert multi > 0  # overlaps of several (sigma, T) cells were exercised


def test_pm_rejects_non_witness():
    e = I.star_ov(2)
    w = I.ov1_membership(e)
    other = I.Ov1Witness(T.corolla([2, 1]), (1, 2), w.black_intervals)
    with pytest.raises(I.OvError):
        I.p_m(e, other)


def test_circle_vertices():
    left = K.from_arclist([(1, Q(1)), (2, Q(1))])
    right = K.from_arclist([(2, Q(1)), (1, Q(1))])
    for u in I.CIRCLE_VERTICES:
        e = I.ov1_circle(u)
        C = I.p_m(e, I.ov1_membership(e))
        assert C in (left, right)
    mid = I.ov1_circle(2)
    assert K.arclist_str(K.to_arclist(I.p_m(mid, I.ov1_membership(mid)))) == "2:1/2 1:1 2:1/2"
