from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from copula_forge.core import PermutationCopula, permutation_to_copula, product_copula
from copula_forge.errors import DomainError
from copula_forge.extension import (
    checkerboard_density,
    checkerboard_eval,
    checkerboard_eval_array,
    local_coords,
    surface_lattice,
)

perm_copulas = st.integers(2, 7).flatmap(
    lambda k: st.permutations(list(range(1, k + 1))).map(lambda p: permutation_to_copula(PermutationCopula(tuple(p))))
)
unit = st.fractions(min_value=0, max_value=1, max_denominator=50)


def test_local_coords():
    assert local_coords(4, F(3, 8), F(1)) .__dict__ == {"i": 1, "j": 4, "t": F(1, 2), "s": 0}
    with pytest.raises(DomainError):
        local_coords(4, F(-1, 8), 0)


def test_product_copula_is_reproduced():
    c = product_copula(3)
    assert checkerboard_eval(c, F(1, 5), F(5, 7)) == F(1, 7)
    assert checkerboard_eval(c, 1, F(2, 9)) == F(2, 9)


@given(perm_copulas, unit, unit)
def test_agrees_on_mesh_and_boundaries(c, u, v):
    k = c.k
    i, j = int(u * k), int(v * k)
    assert checkerboard_eval(c, F(i, k), F(j, k)) == c.value(i, j)
    assert checkerboard_eval(c, u, 0) == 0 and checkerboard_eval(c, 0, v) == 0
    assert checkerboard_eval(c, u, 1) == u and checkerboard_eval(c, 1, v) == v


@given(perm_copulas, unit, unit)
def test_frechet_bounds_and_float_path(c, u, v):
    x = checkerboard_eval(c, u, v)
    assert max(0, u + v - 1) <= x <= min(u, v)
    assert abs(checkerboard_eval(c, float(u), float(v)) - float(x)) < 1e-14
    arr = checkerboard_eval_array(c, np.array([float(u)]), np.array([float(v)]))
    assert abs(arr[0] - float(x)) < 1e-14


def test_density_half_open_cells():
    c = permutation_to_copula(PermutationCopula((2, 1)))
    assert checkerboard_density(c, F(1, 4), F(3, 4)) == 2
    assert checkerboard_density(c, F(1, 4), F(1, 4)) == 0
    # an interior edge belongs to the higher cell; the top edge to the last cell
    assert checkerboard_density(c, F(1, 2), F(1, 4)) == 2
    assert checkerboard_density(c, 1, 1) == 0
    assert checkerboard_density(c, 1, F(1, 4)) == 2


def test_surface_lattice_corners():
    c = product_copula(4)
    u, v, val = surface_lattice(c, 2)
    assert list(zip(u, v, val)) == [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 1)]
    with pytest.raises(DomainError):
        surface_lattice(c, 1)
    with pytest.raises(DomainError):
        checkerboard_eval_array(c, [1.5], [0.5])
