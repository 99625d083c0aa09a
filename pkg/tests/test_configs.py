import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cactop import configs as G
from cactop import knots as N
from cactop.action import phi_bar

SQ2 = math.sqrt(2)


def _rng(seed):
    return np.random.default_rng(seed)


def test_e_config_frozen():
    for p in range(1, 6):
        for d in (2, 3, 4):
            e = G.e_config(p, d)
            assert e.n == p and e.d == d
            assert np.array_equal(e.frames, np.stack([np.eye(d)] * p))
            for i in range(1, p + 1):
                for j in range(i + 1, p + 1):
                    assert np.array_equal(e.vec(i, j), -G.e1(d))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_e_config_from_any_coface(d):
    for p in range(1, 5):
        for k in range(p):
            assert G.coface(k, G.e_config(p - 1, d)).distance(G.e_config(p, d)) == 0.0


@given(st.integers(0, 10**6), st.integers(1, 5), st.sampled_from([2, 3, 4]))
def test_unit_point_insertion(seed, n, d):
    c = G.random_config(_rng(seed), n, d)
    for i in range(1, n + 1):
        assert G.insert(c, i, G.point(d)).distance(c) == 0.0
    assert G.insert(G.point(d), 1, c).distance(c) <= 1e-15


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_empty_insertion_is_codegeneracy(seed, n):
    c = G.random_config(_rng(seed), n, 3)
    for i in range(1, n + 1):
        assert G.insert(c, i, G.empty(3)).distance(G.codegeneracy(i - 1, c)) == 0.0
        assert G.insert(c, i, G.empty(3)).n == n - 1


@given(st.integers(0, 10**6), st.sampled_from([2, 3, 4]))
def test_insertion_associativity(seed, d):
    import random

    from cactop.verify import insert_assoc_deviation

    assert insert_assoc_deviation(_rng(seed), random.Random(seed), d) <= 1e-10


@given(st.integers(0, 10**6), st.integers(1, 5), st.sampled_from([2, 3, 4]))
def test_cosimplicial_identities(seed, n, d):
    from cactop.verify import cosimplicial_deviation

    assert cosimplicial_deviation(_rng(seed), n, d) <= 1e-12


@given(st.integers(0, 10**6), st.integers(2, 4), st.integers(0, 4))
def test_insert_preserves_unit_norms(seed, m, n):
    nr = _rng(seed)
    c, c2 = G.random_config(nr, m, 3), G.random_config(nr, n, 3)
    out = G.insert(c, 1 + seed % m, c2)
    out.check(1e-12)
    assert out.n == m + n - 1


def test_insert_slot_out_of_range():
    with pytest.raises(G.ConfigError):
        G.insert(G.e_config(2, 3), 3, G.point(3))


def test_h_examples():
    R = _rng(0)
    for _ in range(50):
        x = R.normal(size=3) * R.uniform(0, 6)
        assert np.array_equal(G.H(x, 0.0), x)
        r = np.linalg.norm(x)
        for t in (0.1, 0.5, 0.9, 0.999):
            if r >= 4:
                assert np.allclose(G.H(x, t), x, rtol=0, atol=1e-15)
            if r <= SQ2:
                assert np.allclose(G.H(x, t), (1 - t) ** 2 * x, rtol=1e-14, atol=0)


def test_cutoffs():
    assert G.mu(1.0) == 0.0 and G.mu(SQ2) == 0.0 and G.mu(2.0) == 1.0 and G.mu(3.0) == 1.0
    assert G.nu(1.0) == 1.0 and G.nu(2.0) == 1.0 and G.nu(4.0) == 0.0 and G.nu(5.0) == 0.0
    assert 0 < G.mu(1.7) < 1 and 0 < G.nu(3.0) < 1


def test_limit_matches_numerics():
    # H(x,t)/(1-t)^k -> the asymptotic coefficient
    eps = 1e-7
    for x in ([0.3, 0.4, 0.0], [1.2, 0.9, 0.0], [2.0, 0.0, 0.0], [3.0, 0.5, 0.0]):
        a = G.asymptotic(x)
        num = G.H(x, 1 - eps) / eps**a.order
        want = np.asarray(x) * math.exp(a.logmag)
        assert np.allclose(num, want, rtol=1e-5)


def test_rejected_interpolation_jumps_at_sqrt2():
    eps = 1e-9
    inside = np.array([1.4, 0.0, 0.0])
    between = np.array([1.7, 0.0, 0.0])
    # H keeps both points on the quadratic scale
    assert G.asymptotic(inside).order == G.asymptotic(between).order == 2
    # the rejected map moves the point at 1.7 to the linear scale
    assert np.allclose(G.H_rejected(between, 1 - eps) / eps, G.mu(1.7) * between, rtol=1e-6)
    assert np.linalg.norm(G.H_rejected(inside, 1 - eps) / eps) < 1e-6
    # so its pair direction with a point near the origin is a jump, while
    # the shrink limit of H varies continuously across |x| = sqrt2
    near = np.array([0.0, 0.5, 0.0])
    frames = np.stack([np.eye(3)] * 2)

    def v12(b):
        P = np.array([near, [b, 0.0, 0.0]])
        return G.shrink_limit(P, np.zeros((2, 2, 3)), frames).vec(1, 2)

    for delta in (1e-2, 1e-3, 1e-4):
        assert np.abs(v12(SQ2) - v12(SQ2 + delta)).max() < delta
    rej = G.H_rejected(near, 1 - eps) - G.H_rejected(between, 1 - eps)
    assert np.allclose(rej / np.linalg.norm(rej), [-1, 0, 0], atol=1e-6)
    assert np.abs(v12(1.7) - np.array([-1.0, 0, 0])).max() > 0.1


@given(st.integers(0, 10**6), st.floats(0.2, 1.0))
def test_shrink_scale_invariant_inside_sqrt2(seed, c):
    R = _rng(seed)
    P = R.normal(size=(4, 3))
    P *= 1.3 / np.abs(np.linalg.norm(P, axis=1)).max()
    frames = np.stack([np.eye(3) + 0.2 * R.normal(size=(3, 3)) for _ in range(4)])
    a = G.shrink_limit(P, np.zeros((4, 4, 3)), frames)
    b = G.shrink_limit(c * P, np.zeros((4, 4, 3)), frames)
    assert a.distance(b) <= 1e-12
    assert a.distance(G.from_points(P, a.frames)) <= 1e-12


def test_axis_configuration_gives_e_n():
    xs = [-3.0, -2.5, -1.0, -0.3, 0.2, 1.9, 2.0, 3.5, 5.0]
    P = np.array([[x, 0.0, 0.0] for x in xs])
    sp = G.spatial_from_points(P)
    n = len(xs)
    c = G.shrink_limit(P, sp.v[1:-1, 1:-1], np.stack([np.eye(3)] * n))
    assert c.distance(G.e_config(n, 3)) == 0.0
    assert sp.to_infinitesimal().distance(G.e_config(n, 3)) == 0.0


def test_gram_schmidt():
    assert np.array_equal(G.gram_schmidt(np.eye(3)), np.eye(3))
    U = np.array([[2.0, 1.0, -3.0], [0.0, 0.5, 4.0], [0.0, 0.0, 7.0]])
    assert np.allclose(G.gram_schmidt(U), np.eye(3), atol=1e-15)
    R = _rng(3)
    for _ in range(20):
        A = R.normal(size=(3, 3))
        Q = G.gram_schmidt(A)
        assert np.allclose(Q.T @ Q, np.eye(3), atol=1e-13)
        assert np.allclose(G.gram_schmidt(Q), Q, atol=1e-13)
    with pytest.raises(G.ConfigError):
        G.gram_schmidt(np.zeros((3, 3)))


def test_phi_bar_outside_convention():
    P, V, F = phi_bar(N.identity(), (-3, -3))
    assert np.array_equal(P, [[-3, 0, 0], [-3, 0, 0]])
    assert np.array_equal(V[0, 1], [1, 0, 0])
    assert np.array_equal(F, np.stack([np.eye(3)] * 2))


def test_spatial_anchors():
    sp = G.spatial_from_points(np.array([[0.1, 0.2, 0.0]]))
    assert np.array_equal(sp.points[0], [-1, 0, 0]) and np.array_equal(sp.points[-1], [1, 0, 0])
    assert np.array_equal(sp.frames[0], np.eye(3)) and np.array_equal(sp.frames[-1], np.eye(3))


def test_spatial_coface_matches_infinitesimal():
    R = _rng(5)
    P = np.sort(R.uniform(-0.9, 0.9, size=3))[:, None] * np.array([1.0, 0, 0]) + 0.1 * R.normal(size=(3, 3))
    sp = G.spatial_from_points(P)
    # interior doublings; k = 0 and k = n + 1 double the boundary anchors
    for k in range(1, 4):
        lhs = G.spatial_coface(k, sp).to_infinitesimal()
        rhs = G.coface(k, sp.to_infinitesimal())
        assert lhs.distance(rhs) <= 1e-12
