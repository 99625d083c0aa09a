import json
import random
from fractions import Fraction as Q

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cactop import intervals as I
from cactop import knots as N

NAMES = ["trefoil", "twist"]


@pytest.mark.parametrize("name", NAMES + ["identity"])
def test_identity_outside_the_slab(name):
    f = N.get_knot(name)
    for t in (-5.0, -1.5, -1.0, 1.0, 1.2, 4.0):
        assert np.array_equal(f.curve(t), [t, 0, 0])
        assert np.array_equal(f.frame(t), np.eye(3))


@pytest.mark.parametrize("name", NAMES)
def test_knot_sanity(name):
    rep = N.check_knot(N.get_knot(name))
    assert rep["min_speed"] > 1e-3
    assert rep["outside_error"] == 0.0
    assert rep["stays_in_slab"]
    assert rep["min_separation"] > 1e-3


@pytest.mark.parametrize("name", NAMES)
def test_jacobian_matches_finite_differences(name):
    f = N.get_knot(name)
    R = np.random.default_rng(0)
    h = 1e-6
    for _ in range(40):
        x = np.array([R.uniform(-0.99, 0.99), *(R.normal(size=2) * 0.03)])
        J = f.jac(x)
        num = np.column_stack([(f(x + h * e) - f(x - h * e)) / (2 * h) for e in np.eye(3)])
        assert np.abs(J - num).max() < 1e-5


def test_trefoil_is_knotted_looking():
    f = N.trefoil()
    pts = np.array([f.curve(t) for t in np.linspace(-1, 1, 200)])
    assert np.abs(pts[:, 1:]).max() > 0.1


def test_unknown_knot():
    with pytest.raises(N.KnotError):
        N.get_knot("figure-eight")


def test_twist_needs_three_dimensions():
    with pytest.raises(N.KnotError):
        N.twist(2)


def test_arity_zero_and_unit():
    e0 = I.OvElement((), frozenset())
    out = N.budney_act(e0, [])
    assert out.trivial
    f = N.trefoil()
    g = N.budney_act(I.ov_identity(), [f])
    assert N.knot_distance(f, g) == 0.0


def test_rescale_exact_off_support():
    L = I.Interval(Q(-1, 2), Q(1, 4))
    g = N.rescale(L, N.trefoil())
    for t in np.linspace(-1.5, 1.5, 101):
        if not -0.5 < t < 0.25:
            x = np.array([t, 0.01, -0.02])
            assert np.array_equal(g(x), x)
            assert np.array_equal(g.jac(x), np.eye(3))


def test_disjoint_supports_commute_exactly():
    f, g = N.trefoil(), N.twist()
    a = I.OvElement.from_sigma([(-1, 0), (0, 1)], (1, 2))
    b = I.OvElement.from_sigma([(-1, 0), (0, 1)], (2, 1))
    F1 = N.budney_act(a, [f, g], sigma=(1, 2))
    F2 = N.budney_act(b, [f, g], sigma=(2, 1))
    for t in np.linspace(-1.2, 1.2, 241):
        assert np.array_equal(F1.curve(t), F2.curve(t))
        assert np.array_equal(F1.frame(t), F2.frame(t))


def test_sigma_must_be_linear_extension():
    e = I.OvElement.from_sigma([(-1, 1), (-1, 1)], (1, 2))
    with pytest.raises(N.KnotError):
        N.budney_act(e, [N.trefoil(), N.twist()], sigma=(2, 1))


@given(st.integers(0, 10**6))
def test_composition_law(seed):
    R = random.Random(seed)
    e = I.random_ov(R, R.randint(1, 2))
    inner = [I.random_ov(R, R.randint(0, 2)) for _ in range(e.m)]
    ks = [[N.get_knot(R.choice(NAMES)) for _ in range(x.m)] for x in inner]
    lhs = N.budney_act(I.ov_compose(e, inner), [k for row in ks for k in row])
    rhs = N.budney_act(e, [N.budney_act(x, row) for x, row in zip(inner, ks)])
    assert N.knot_distance(lhs, rhs, samples=24) <= 1e-10


def test_star_fixes_identity_exactly():
    ident = N.identity()
    for m in range(1, 5):
        out = N.budney_act(I.star_ov(m), [ident] * m)
        for t in np.linspace(-1.5, 1.5, 31):
            assert np.array_equal(out.curve(t), ident.curve(t))


def test_sampled_knot_loader(tmp_path):
    f = N.trefoil()
    ts = np.linspace(-1, 1, 2001)
    rows = [[float(t), f.curve(t).tolist(), f.frame(t).tolist()] for t in ts]
    path = tmp_path / "k.json"
    path.write_text(json.dumps(rows))
    g = N.get_knot(str(path))
    for t in np.linspace(-0.95, 0.95, 37):
        assert np.abs(g.curve(t) - f.curve(t)).max() < 1e-4
    assert np.array_equal(g.curve(1.5), [1.5, 0, 0])
    with pytest.raises(N.KnotError):
        N.sampled_knot(rows[:5])
