"""Lexicographic permutation enumeration with rank-range partitioning."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import List, Sequence, Tuple

import numpy as np

from .errors import CapacityError, DomainError

MAX_ENUM_K = 8
FORCE_ENUM_K = 9


def check_capacity(k: int, force: bool = False) -> int:
    """Enumeration is capped at k=8; k=9 needs ``force``; anything larger is refused."""
    if k < 2:
        raise DomainError(f"k must be >= 2, got {k}")
    limit = FORCE_ENUM_K if force else MAX_ENUM_K
    if k > limit:
        hint = "" if force or k > FORCE_ENUM_K else " (pass force=True / --force to allow k=9)"
        raise CapacityError(f"exhaustive enumeration supports k <= {limit}, got k={k}{hint}")
    return k


def next_permutation(a: List[int]) -> bool:
    """Advance ``a`` in place to its lexicographic successor; False if ``a`` was last."""
    n = len(a)
    p = n - 2
    while p >= 0 and a[p] >= a[p + 1]:
        p -= 1
    if p < 0:
        return False
    q = n - 1
    while a[q] <= a[p]:
        q -= 1
    a[p], a[q] = a[q], a[p]
    a[p + 1 :] = reversed(a[p + 1 :])
    return True


def unrank(k: int, r: int) -> List[int]:
    """The permutation of ``0..k-1`` with lexicographic rank ``r``."""
    if not 0 <= r < math.factorial(k):
        raise DomainError(f"rank {r} out of range for k={k}")
    pool = list(range(k))
    out = []
    for pos in range(k, 0, -1):
        f = math.factorial(pos - 1)
        d, r = divmod(r, f)
        out.append(pool.pop(d))
    return out


def rank(perm: Sequence[int]) -> int:
    pool = sorted(perm)
    r = 0
    for pos, x in enumerate(perm):
        d = pool.index(x)
        r += d * math.factorial(len(perm) - pos - 1)
        pool.pop(d)
    return r


def rank_ranges(total: int, parts: int) -> List[Tuple[int, int]]:
    parts = max(1, min(parts, total))
    step, extra = divmod(total, parts)
    out, start = [], 0
    for p in range(parts):
        stop = start + step + (1 if p < extra else 0)
        out.append((start, stop))
        start = stop
    return out


def permutation_block(k: int, start: int, stop: int) -> np.ndarray:
    """Permutations of ranks ``start..stop-1`` (0-based values) as an int8 array."""
    n = stop - start
    out = np.empty((max(n, 0), k), dtype=np.int8)
    if n <= 0:
        return out
    a = unrank(k, start)
    out[0] = a
    for row in range(1, n):
        next_permutation(a)
        out[row] = a
    return out


@lru_cache(maxsize=16)
def all_permutations(k: int) -> np.ndarray:
    """Every permutation of ``0..k-1`` in lexicographic order (cached, read-only)."""
    check_capacity(k, force=True)
    out = permutation_block(k, 0, math.factorial(k))
    out.setflags(write=False)
    return out


def grid_counts(perms: np.ndarray) -> np.ndarray:
    """``counts[n, i, j] = #{m < i : perms[n, m] < j}`` i.e. ``k * C_pi(i/k, j/k)``."""
    n, k = perms.shape
    onehot = perms[:, :, None] == np.arange(k, dtype=perms.dtype)[None, None, :]
    out = np.zeros((n, k + 1, k + 1), dtype=np.int16)
    out[:, 1:, 1:] = onehot.cumsum(axis=1, dtype=np.int16).cumsum(axis=2, dtype=np.int16)
    return out


def counts_at(perms: np.ndarray, i: int, j: int) -> np.ndarray:
    """``#{m < i : perms[:, m] < j}`` for a batch of permutations."""
    if i == 0 or j == 0:
        return np.zeros(perms.shape[0], dtype=np.int64)
    return np.count_nonzero(perms[:, :i] < j, axis=1)
