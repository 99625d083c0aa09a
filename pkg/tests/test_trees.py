import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cactop import trees as T
from cactop.regression_data import tree19


def _word_census(m):
    """Independent count of b/w trees by dimension: the label sequence met
    walking around the tree is a word over 1..m using every label, with
    no two equal adjacent letters and no a..b..a..b pattern, and its
    length is m plus the dimension."""
    counts = [0] * m
    for length in range(m, 2 * m):
        for w in itertools.product(range(1, m + 1), repeat=length):
            if len(set(w)) != m or any(a == b for a, b in zip(w, w[1:])):
                continue
            if _crossing(w):
                continue
            counts[length - m] += 1
    return counts


def _crossing(w):
    for a, b in itertools.combinations(set(w), 2):
        runs = [x for x in w if x in (a, b)]
        runs = [x for k, x in enumerate(runs) if k == 0 or runs[k - 1] != x]
        if len(runs) >= 4:
            return True
    return False


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_census_matches_word_oracle(m):
    counts = [len(T.enumerate_bw_trees(m, k)) for k in range(m)]
    assert counts == _word_census(m)


def test_census_frozen():
    assert [len(T.enumerate_bw_trees(m)) for m in (1, 2, 3, 4)] == [1, 4, 36, 528]
    assert [len(T.enumerate_bw_trees(3, k)) for k in range(3)] == [6, 18, 12]


def test_arity_zero_is_an_error():
    with pytest.raises(T.TreeError):
        T.enumerate_bw_trees(0)


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_enumeration_invariants(m):
    trees = T.enumerate_bw_trees(m)
    assert len({t.key() for t in trees}) == len(trees)
    for t in trees:
        assert t.dimension == sum(t.arities().values())
        assert T.BwTree(t.root) == t
        assert t.dimension == T.BwTree(t.root).dimension


def test_arity2_collapse_example():
    tower = T.BwTree.from_flat({"root": 0, "children": [[1], [2], [3], []], "colors": "bwbw", "white_labels": [1, 3]})
    assert tower.dimension == 1
    out = T.angle_collapse(tower, 1, 0)
    assert out.dimension == 0
    assert out.key() == "b(w2(),w1())"
    assert T.angle_collapse(tower, 1, 1).key() == "b(w1(),w2())"


def test_collapse_errors():
    with pytest.raises(T.TreeError):
        T.angle_collapse(T.corolla([1, 2, 3]), 2, 0)
    tower = T.enumerate_bw_trees(2, 1)[0]
    lab = next(l for l, a in tower.arities().items() if a)
    with pytest.raises(T.TreeError):
        T.angle_collapse(tower, lab, 2)


def test_tree19_collapses_to_a_vertex_in_dimension_steps():
    t = tree19()
    R = random.Random(0)
    steps = 0
    while t.dimension:
        before = t.dimension
        lab, i, t = R.choice(T.collapses(t))
        assert t.dimension == before - 1
        steps += 1
    assert steps == tree19().dimension


@pytest.mark.parametrize("m", [2, 3, 4])
def test_collapse_keeps_labels_and_compatibility(m):
    for t in T.enumerate_bw_trees(m):
        compat = set(T.compatible_permutations(t))
        for _, _, c in T.collapses(t):
            assert c.m == t.m and c.dimension == t.dimension - 1
            assert compat <= set(T.compatible_permutations(c))


def test_below_is_a_partial_order():
    trees = T.enumerate_bw_trees(3)
    rel = {(a, b): T.below(a, b) for a in trees for b in trees}
    for a in trees:
        assert rel[a, a]
    for a, b in itertools.combinations(trees, 2):
        assert not (rel[a, b] and rel[b, a])
    for a, b, c in itertools.product(trees, repeat=3):
        if rel[a, b] and rel[b, c]:
            assert rel[a, c]


def test_compatibility_examples():
    for s in itertools.permutations([1, 2, 3]):
        assert T.is_compatible(T.corolla([1, 2, 3]), s)
    tower = T.BwTree.from_flat({"root": 0, "children": [[1], [2], [3], []], "colors": "bwbw", "white_labels": [1, 3]})
    assert T.is_compatible(tower, (1, 2))
    assert not T.is_compatible(tower, (2, 1))
    assert T.is_compatible(tree19(), tuple(range(1, 20)))


def test_stats_on_corolla():
    st_ = T.tree_stats(T.corolla([1, 2, 3, 4]), 1, (1, 2, 3, 4))
    assert st_.alpha == 1 and st_.lam == () and set(st_.rho) == {2, 3, 4}


def test_stats_reject_incompatible_sigma():
    tower = T.enumerate_bw_trees(2, 1)[0]
    bad = next(s for s in itertools.permutations([1, 2]) if not T.is_compatible(tower, s))
    with pytest.raises(T.CompatibilityError):
        T.tree_stats(tower, 1, bad)


@st.composite
def tree_and_sigma(draw):
    m = draw(st.integers(1, 4))
    t = draw(st.sampled_from(T.enumerate_bw_trees(m)))
    s = draw(st.sampled_from(T.compatible_permutations(t)))
    return t, s


@given(tree_and_sigma())
def test_plus_sets_are_subsets(ts):
    t, s = ts
    for lab in range(1, t.m + 1):
        x = T.tree_stats(t, lab, s)
        assert set(x.lam_plus) <= set(x.lam)
        assert set(x.rho_plus) <= set(x.rho)
        assert x.alpha >= 1


@given(tree_and_sigma(), st.data())
def test_symmetric_action_is_right_action(ts, data):
    t, _ = ts
    perms = list(itertools.permutations(range(1, t.m + 1)))
    s = data.draw(st.sampled_from(perms))
    u = data.draw(st.sampled_from(perms))
    assert t.act(s).act(u) == t.act(T.compose_perm(s, u))


def test_flat_roundtrip():
    for t in T.enumerate_bw_trees(3) + [tree19()]:
        assert T.BwTree.from_flat(t.to_flat()) == t
