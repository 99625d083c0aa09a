import numpy as np
import pytest

from cactop import cacti as K
from cactop import cells as X
from cactop import intervals as I
from cactop import trees as T


def _oracle(m):
    p = np.array([1], dtype=np.int64)
    for i in range(1, m):
        p = np.polymul(p, [i, 1])
    return [int(x) for x in p[::-1]]


def test_point_and_circle():
    X1 = X.cact1_complex(1)
    assert X1.counts() == [1] and X.betti(X1) == [1]
    X2 = X.cact1_complex(2)
    assert X2.counts() == [2, 2] and X.betti(X2) == [1, 1]


@pytest.mark.parametrize("m", [1, 2, 3, 4])
@pytest.mark.parametrize("fld", ["f2", "q"])
def test_betti_against_product_oracle(m, fld):
    Xm = X.cact1_complex(m)
    X.check_d2(Xm, fld)
    assert X.betti(Xm, fld) == _oracle(m) == X.poincare_oracle(m)
    assert Xm.euler() == (1 if m == 1 else 0)


def test_oracle_by_hand():
    assert _oracle(3) == [1, 3, 2]
    assert _oracle(4) == [1, 6, 11, 6]


@pytest.mark.parametrize("m", [2, 3, 4])
def test_faces_are_collapses(m):
    Xm = X.cact1_complex(m)
    for k in range(1, Xm.dim + 1):
        for idx, t in enumerate(Xm.cells[k]):
            faces = Xm.boundary[k][idx]
            assert all(c in (-1, 1) for c in faces.values())
            want = {c for _, _, c in T.collapses(t)}
            assert {Xm.cells[k - 1][f] for f in faces} == want


@pytest.mark.parametrize("m", [2, 3, 4])
def test_symmetric_action_free(m):
    assert X.action_is_free(m)


def test_rank_helpers():
    assert X.rank_f2([0b011, 0b110, 0b101]) == 2
    assert X.rank_q([{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: -1}], 3) == 2
    assert X.rank_q([{0: 1, 1: 1}, {1: 1, 2: 1}, {0: 1, 2: 1}], 3) == 3


def test_fiber_point_for_m1():
    fc = X.fiber_complex(K.unit())
    assert fc.complex.counts() == [1]


def test_fiber_over_star3_contractible():
    fc = X.fiber_complex(K.star(3))
    assert fc.complex.dim >= 1
    assert X.reduced_betti(fc.complex) == [0] * (fc.complex.dim + 1)
    assert X.reduced_betti(fc.complex, "q") == [0] * (fc.complex.dim + 1)


def test_fiber_over_star2_and_circle_cells():
    fc = X.fiber_complex(K.star(2))
    assert not any(X.reduced_betti(fc.complex))
    # Ov^1(2) is a circle with six vertices and six edges
    assert len(I.CIRCLE_VERTICES) == 6


@pytest.mark.parametrize("m", [1, 2, 3])
def test_all_fibers_contractible(m):
    for t in T.enumerate_bw_trees(m):
        C = X.sample_cactus(t)
        assert K.underlying_tree(C) == t
        assert not any(X.reduced_betti(X.fiber_complex(C).complex)), t.key()


def test_collapse_sign_is_a_sign():
    for t in T.enumerate_bw_trees(3):
        for lab, k in t.arities().items():
            for i in range(k + 1 if k else 0):
                assert X.collapse_sign(t, lab, i) in (-1, 1)
