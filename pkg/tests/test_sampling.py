from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import stats

from copula_forge import analytic as an
from copula_forge.core import PermutationCopula, permutation_to_copula, product_copula, validate
from copula_forge.errors import CapacityError, DomainError
from copula_forge.oracle import stats_from_values
from copula_forge.rng import SeededRng, as_rng, dirichlet_rows, standard_gamma
from copula_forge.sampling import (
    DirichletWeights,
    empirical_copula,
    field_samples,
    sample_dirichlet,
    sample_pairs,
    sample_permutation,
    sample_uniform_simplex,
    sample_X,
    sample_Y_grid,
    sample_Y_point,
    sample_Y_point_values,
)


def test_rng_determinism_and_streams():
    a = SeededRng(42).generator.random(5)
    b = SeededRng(42).generator.random(5)
    c = SeededRng(42, 1).generator.random(5)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
    assert np.array_equal(SeededRng(42).split(1).generator.random(5), c)


def test_rng_rejects_bad_seeds():
    with pytest.raises(DomainError):
        SeededRng(-1)
    with pytest.raises(DomainError):
        SeededRng(2**64)
    with pytest.raises(DomainError):
        as_rng("seed")


def test_small_shape_gamma_mean():
    g = standard_gamma(SeededRng(0).generator, 0.3, 200_000)
    assert abs(g.mean() - 0.3) < 5 * np.sqrt(0.3 / 200_000)


def test_dirichlet_rows_on_simplex():
    rows = dirichlet_rows(SeededRng(1).generator, [0.5, 2, 7], 1000)
    assert np.allclose(rows.sum(axis=1), 1) and (rows >= 0).all()
    with pytest.raises(DomainError):
        dirichlet_rows(SeededRng(1).generator, [1, 0], 3)


def test_weights_validation():
    with pytest.raises(DomainError):
        DirichletWeights(np.array([0.5, 0.6]))
    w = sample_uniform_simplex(SeededRng(3), 10)
    assert len(w) == 10
    assert len(sample_dirichlet(SeededRng(3), [1, 2])) == 2


@given(st.integers(0, 2**64 - 1), st.integers(2, 8))
def test_sampled_grids_validate(seed, k):
    rng = SeededRng(seed)
    assert validate(sample_X(rng, k)).ok
    assert validate(sample_Y_grid(rng, min(k, 5))).ok


def test_permutation_sampler_deterministic():
    assert sample_permutation(SeededRng(9), 6) == sample_permutation(SeededRng(9), 6)


def test_y_grid_capacity():
    with pytest.raises(CapacityError):
        sample_Y_grid(SeededRng(0), 9)


def test_y_point_any_k():
    x = sample_Y_point(SeededRng(0), 12, (6, 6))
    assert 0 <= x <= 0.5
    assert sample_Y_point(SeededRng(0), 12, (0, 6)) == 0.0
    assert np.all(sample_Y_point_values(SeededRng(0), 5, (5, 2), 4) == 0.4)


def test_y_point_moments_large_k():
    vals = sample_Y_point_values(SeededRng(4), 10, (3, 7), 200_000)
    st_ = stats_from_values(vals)
    assert st_.mean_ok(float(an.mean_Y(10, F(3, 10), F(7, 10))))
    assert st_.variance_ok(float(an.var_Y(10, F(3, 10), F(7, 10))))


def test_pairs_uniform_marginals():
    c = permutation_to_copula(PermutationCopula((3, 1, 4, 2)))
    pairs = sample_pairs(SeededRng(2), c, 50_000)
    assert pairs.shape == (50_000, 2)
    for col in range(2):
        assert stats.kstest(pairs[:, col], "uniform").pvalue > 0.001
    # the identity-free permutation never puts mass in cell (0, 0)
    assert not np.any((pairs[:, 0] < 0.25) & (pairs[:, 1] < 0.25))


def test_pairs_reject_invalid_copula():
    with pytest.raises(DomainError):
        sample_pairs(SeededRng(0), product_copula(2).__class__(np.ones((3, 3))), 5)


def test_empirical_copula_diagonal_and_order():
    pts = np.array([[0.1, 0.2], [0.5, 0.6], [0.9, 0.95]])
    c = empirical_copula(pts, 3)
    assert c == permutation_to_copula(PermutationCopula((1, 2, 3)))
    assert empirical_copula(pts[::-1], 3) == c


@given(
    st.lists(st.tuples(st.floats(0, 1), st.floats(0, 1)), min_size=1, max_size=40),
    st.integers(2, 9),
)
def test_empirical_copula_always_valid(points, k):
    pts = np.array(points)
    c = empirical_copula(pts, k)
    assert validate(c).ok
    rng = np.random.default_rng(len(points))
    assert empirical_copula(pts[rng.permutation(len(pts))], k) == c


def test_empirical_copula_errors():
    with pytest.raises(DomainError):
        empirical_copula(np.empty((0, 2)), 3)
    with pytest.raises(DomainError):
        empirical_copula(np.array([[1.5, 0.2]]), 3)


def test_field_samples_shapes_and_kinds():
    pts = [(1, 1), (2, 2)]
    for kind in ("X", "Y", "Ypoint"):
        assert field_samples(kind, 4, pts, 10, SeededRng(0)).shape == (10, 2)
    hp = [(F(1, 7), F(2, 7))]
    for kind in ("Xhat", "Yhat"):
        assert field_samples(kind, 4, hp, 10, SeededRng(0)).shape == (10, 1)
    with pytest.raises(DomainError):
        field_samples("Z", 4, pts, 10, SeededRng(0))
    with pytest.raises(CapacityError):
        field_samples("Yhat", 9, hp, 10, SeededRng(0))


def test_field_samples_deterministic():
    a = field_samples("Yhat", 5, [(F(1, 3), F(1, 2))], 1000, SeededRng(8))
    b = field_samples("Yhat", 5, [(F(1, 3), F(1, 2))], 1000, SeededRng(8))
    assert np.array_equal(a, b)
