import numpy as np
import pytest
from scipy.linalg import svdvals

from errors import NonFiniteEntry, PowerIterationStall
from power_iteration import largest_singular_value


def test_diagonal():
    assert largest_singular_value(np.diag([3.0, 1.0, 2.0])) == pytest.approx(3.0, rel=1e-12)


def test_two_by_two_closed_form():
    assert largest_singular_value(np.array([[0.0, 0.0], [1.0, 0.0]])) == 1.0


def test_rectangular_uses_smaller_gram():
    m = np.array([[1.0, 2.0, 3.0]])
    assert largest_singular_value(m) == pytest.approx(np.sqrt(14.0), rel=1e-15)
    assert largest_singular_value(m.T) == pytest.approx(np.sqrt(14.0), rel=1e-15)


@pytest.mark.parametrize("shape", [(3, 3), (6, 5), (8, 8), (4, 7)])
def test_against_dense_svd(shape):
    rng = np.random.default_rng(sum(shape))
    m = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    assert largest_singular_value(m) == pytest.approx(svdvals(m)[0], rel=1e-9)


def test_zero_and_empty():
    assert largest_singular_value(np.zeros((4, 4))) == 0.0
    assert largest_singular_value(np.zeros((0, 3))) == 0.0


def test_deterministic():
    rng = np.random.default_rng(5)
    m = rng.standard_normal((6, 6))
    assert largest_singular_value(m) == largest_singular_value(m.copy())


def test_non_finite():
    m = np.eye(3)
    m[1, 1] = np.nan
    with pytest.raises(NonFiniteEntry):
        largest_singular_value(m)


def test_not_a_matrix():
    with pytest.raises(ValueError):
        largest_singular_value(np.ones(3))


def test_stall():
    rng = np.random.default_rng(1)
    with pytest.raises(PowerIterationStall):
        largest_singular_value(rng.standard_normal((5, 5)), rel_tol=1e-15, max_iterations=1)


@pytest.mark.parametrize("gap", [1e-4, 1e-6, 1e-8, 0.0])
def test_nearly_degenerate_top_pair(gap):
    value = largest_singular_value(np.diag([1.0, 1.0 + gap, 0.5]))
    assert 1.0 - 1e-12 <= value <= (1.0 + gap) * (1.0 + 1e-12)


def test_close_pair_against_dense_svd():
    rng = np.random.default_rng(3)
    q, _ = np.linalg.qr(rng.standard_normal((6, 6)))
    m = q @ np.diag([5.0, 5.0 - 1e-9, 2.0, 1.0, 0.5, 0.1]) @ q.T
    assert largest_singular_value(m) == pytest.approx(svdvals(m)[0], rel=1e-9)
