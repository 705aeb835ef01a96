from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from copula_forge import analytic as an
from copula_forge.core import DiscreteCopula, PermutationCopula, permutation_to_copula
from copula_forge.errors import DomainError, ShapeError
from copula_forge.io import (
    copula_from_csv,
    copula_from_json,
    copula_to_csv,
    copula_to_json,
    dumps,
    law_from_csv,
    law_from_json,
    law_to_csv,
    law_to_json,
    pairs_from_csv,
    pairs_to_csv,
    pairs_to_json,
)
from copula_forge.rng import SeededRng
from copula_forge.sampling import sample_pairs, sample_Y_grid

perm_copulas = st.integers(2, 7).flatmap(
    lambda k: st.permutations(list(range(1, k + 1))).map(lambda p: permutation_to_copula(PermutationCopula(tuple(p))))
)


@given(perm_copulas)
def test_exact_grid_json_roundtrip(c):
    doc = copula_to_json(c)
    assert all("/" in x for row in doc["values"] for x in row)
    assert copula_from_json(dumps(doc)) == c


def test_float_grid_roundtrips():
    c = sample_Y_grid(SeededRng(0), 4)
    assert np.array_equal(copula_from_json(copula_to_json(c)).to_float(), c.to_float())
    assert np.array_equal(copula_from_csv(copula_to_csv(c)).to_float(), c.to_float())


def test_grid_errors():
    with pytest.raises(DomainError):
        copula_from_json({"values": []})
    with pytest.raises(ShapeError):
        copula_from_json({"k": 3, "values": [["0/1"] * 3] * 3})
    with pytest.raises(DomainError):
        copula_from_csv("0,0\n0,1\n")


@given(st.integers(2, 12).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, k), st.integers(0, k))))
def test_law_roundtrips(case):
    k, i, j = case
    law = an.pmf_X(k, (i, j))
    assert law_from_json(dumps(law_to_json(law))) == law
    assert law_from_csv(law_to_csv(law)) == law


def test_law_csv_layout():
    text = law_to_csv(an.pmf_X(4, (2, 2)))
    assert text.splitlines() == [
        "value,prob,value_exact,prob_exact",
        "0,0.16666666666666666,0/1,1/6",
        "0.25,0.66666666666666663,1/4,2/3",
        "0.5,0.16666666666666666,1/2,1/6",
    ]
    with pytest.raises(DomainError):
        law_from_csv("a,b\n")


def test_pairs_roundtrip():
    c = permutation_to_copula(PermutationCopula((2, 1, 3)))
    pairs = sample_pairs(SeededRng(5), c, 200)
    assert np.array_equal(pairs_from_csv(pairs_to_csv(pairs)), pairs)
    assert pairs_to_json(pairs)[0] == [pairs[0, 0], pairs[0, 1]]
    with pytest.raises(DomainError):
        pairs_from_csv("x,y\n")


def test_decimal_json_grid_is_float():
    c = copula_from_json({"k": 2, "values": [["0", "0", "0"], ["0", "0.25", "0.5"], ["0", "0.5", "1"]]})
    assert not c.is_exact
    c2 = copula_from_json({"k": 2, "values": [["0", "0", "0"], ["0", "1/4", "1/2"], ["0", "1/2", "1"]]})
    assert c2.is_exact and c2.value(1, 1) == F(1, 4)
    assert isinstance(c2, DiscreteCopula)
