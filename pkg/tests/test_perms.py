import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from copula_forge.errors import CapacityError, DomainError
from copula_forge.perms import (
    all_permutations,
    check_capacity,
    counts_at,
    grid_counts,
    next_permutation,
    permutation_block,
    rank,
    rank_ranges,
    unrank,
)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_lexicographic_order_matches_itertools(k):
    assert [tuple(r) for r in all_permutations(k)] == list(itertools.permutations(range(k)))


def test_successor_stops_at_last():
    a = [2, 1, 0]
    assert next_permutation(a) is False


@given(st.integers(1, 8).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, math.factorial(k) - 1))))
def test_rank_unrank_inverse(case):
    k, r = case
    assert rank(unrank(k, r)) == r


def test_unrank_range():
    with pytest.raises(DomainError):
        unrank(3, 6)


@given(st.integers(1, 5000), st.integers(1, 16))
def test_rank_ranges_partition(total, parts):
    rs = rank_ranges(total, parts)
    assert rs[0][0] == 0 and rs[-1][1] == total
    assert all(a[1] == b[0] for a, b in zip(rs, rs[1:]))
    assert all(stop > start for start, stop in rs)


def test_blocks_concatenate_to_full_list():
    k = 5
    blocks = [permutation_block(k, a, b) for a, b in rank_ranges(120, 7)]
    assert np.array_equal(np.concatenate(blocks), all_permutations(k))


def test_capacity():
    assert check_capacity(8) == 8
    with pytest.raises(CapacityError):
        check_capacity(9)
    assert check_capacity(9, force=True) == 9
    with pytest.raises(CapacityError):
        check_capacity(10, force=True)


def test_grid_counts_agree_with_counts_at():
    perms = all_permutations(4)
    g = grid_counts(perms)
    for i in range(5):
        for j in range(5):
            assert np.array_equal(g[:, i, j], counts_at(perms, i, j))


def test_all_permutations_read_only():
    with pytest.raises(ValueError):
        all_permutations(3)[0, 0] = 1
