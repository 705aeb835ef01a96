"""Ground truth by exhaustive enumeration of S_k and Monte-Carlo statistics.

Nothing here uses the closed-form counting formulas; every law is a tally of
``C_pi`` values over all permutations, so it can be compared with the analytic
module by exact rational equality.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from .analytic import ConditionalTable, FieldLaw, dirichlet_linear_variance
from .core import Rect, check_point
from .errors import DomainError
from .extension import _corner_weights, local_coords
from .perms import (
    all_permutations,
    check_capacity,
    counts_at,
    grid_counts,
    permutation_block,
    rank_ranges,
)
from .rng import as_rng
from .sampling import field_samples

MAX_JOINT_POINTS = 6
THREADS_ENV = "COPULA_FORGE_THREADS"


def default_threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class JointLaw:
    """Exact joint law of field values at several points."""

    support: Tuple[Tuple[Tuple[Fraction, ...], Fraction], ...]

    def __post_init__(self):
        arities = {len(v) for v, _ in self.support}
        if len(arities) > 1:
            raise DomainError("value tuples must have uniform arity")
        if sum(p for _, p in self.support) != 1:
            raise DomainError("joint probabilities must sum to 1")

    @classmethod
    def from_tally(cls, tally: Dict[Tuple[Fraction, ...], int], total: int) -> "JointLaw":
        return cls(tuple(sorted((key, Fraction(c, total)) for key, c in tally.items() if c)))

    @property
    def arity(self) -> int:
        return len(self.support[0][0])

    def expectation(self, fn: Callable[[Tuple[Fraction, ...]], Fraction]) -> Fraction:
        return sum((fn(v) * p for v, p in self.support), Fraction(0))

    def probability(self, predicate: Callable[[Tuple[Fraction, ...]], bool]) -> Fraction:
        return sum((p for v, p in self.support if predicate(v)), Fraction(0))

    def marginal(self, idx: int) -> FieldLaw:
        return FieldLaw.from_pairs((v[idx], p) for v, p in self.support)

    def mean(self, idx: int) -> Fraction:
        return self.expectation(lambda v: v[idx])

    def covariance(self, a: int, b: int) -> Fraction:
        return self.expectation(lambda v: v[a] * v[b]) - self.mean(a) * self.mean(b)

    def variance(self, idx: int) -> Fraction:
        return self.covariance(idx, idx)


def _tally_rows(rows: np.ndarray) -> Dict[Tuple[int, ...], int]:
    if rows.shape[0] == 0:
        return {}
    uniq, counts = np.unique(rows, axis=0, return_counts=True)
    return {tuple(int(x) for x in u): int(c) for u, c in zip(uniq, counts)}


def _merge(parts: Sequence[Dict]) -> Dict:
    out: Dict = {}
    for part in parts:
        for key, c in part.items():
            out[key] = out.get(key, 0) + c
    return out


def _enumerate(k: int, fn: Callable[[np.ndarray], Dict], threads: int, force: bool) -> Dict:
    """Apply ``fn`` to rank-range blocks of S_k and merge the integer tallies."""
    check_capacity(k, force)
    total = math.factorial(k)
    threads = max(1, int(threads))
    if threads == 1:
        return fn(all_permutations(k))
    ranges = rank_ranges(total, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda r: fn(permutation_block(k, *r)), ranges))
    return _merge(parts)


def enumerate_pmf(k: int, point, *, threads: int = 1, force: bool = False) -> FieldLaw:
    """Law of ``C_pi(i/k, j/k)`` for uniform ``pi``, by tallying all of S_k."""
    check_capacity(k, force)
    i, j = check_point(k, *point)
    tally = _enumerate(k, lambda perms: _tally_rows(counts_at(perms, i, j)[:, None]), threads, force)
    total = math.factorial(k)
    return FieldLaw.from_pairs((Fraction(key[0], k), Fraction(c, total)) for key, c in tally.items())


def enumerate_counts(k: int, point, *, threads: int = 1, force: bool = False) -> List[int]:
    """``|{pi : k C_pi(i/k, j/k) = l}|`` for ``l`` over the observed support, ascending."""
    i, j = check_point(k, *point)
    tally = _enumerate(k, lambda perms: _tally_rows(counts_at(perms, i, j)[:, None]), threads, force)
    return [tally[key] for key in sorted(tally)]


def _point_spec(k: int, p, evaluator: str):
    """Corner indices and exact weights for one evaluation point."""
    if evaluator == "grid":
        i, j = check_point(k, *p)
        return ((i, j),), (Fraction(1),)
    if evaluator != "checkerboard":
        raise DomainError(f"evaluator must be 'grid' or 'checkerboard', got {evaluator!r}")
    u, v = Fraction(p[0]), Fraction(p[1])
    i, j, t, s = _corner_weights(k, local_coords(k, u, v))
    corners = ((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1))
    weights = ((1 - t) * (1 - s), t * (1 - s), (1 - t) * s, t * s)
    return corners, weights


def enumerate_joint(
    k: int,
    points: Sequence,
    evaluator: str = "grid",
    *,
    threads: int = 1,
    force: bool = False,
) -> JointLaw:
    """Exact joint law of ``C_pi`` (or its checkerboard extension) at up to six points.

    ``grid`` points are ``(i, j)`` mesh indices; ``checkerboard`` points are
    rational ``(u, v)`` coordinates anywhere in the unit square.
    """
    check_capacity(k, force)
    if not 1 <= len(points) <= MAX_JOINT_POINTS:
        raise DomainError(f"enumerate_joint takes 1..{MAX_JOINT_POINTS} points")
    specs = [_point_spec(k, p, evaluator) for p in points]
    flat_corners = [c for corners, _ in specs for c in corners]

    def tally(perms):
        cols = [counts_at(perms, a, b) for a, b in flat_corners]
        return _tally_rows(np.stack(cols, axis=1))

    raw = _enumerate(k, tally, threads, force)
    merged: Dict[Tuple[Fraction, ...], int] = {}
    for key, c in raw.items():
        values, pos = [], 0
        for corners, weights in specs:
            val = sum((w * key[pos + n] for n, w in enumerate(weights)), Fraction(0)) / k
            values.append(val)
            pos += len(corners)
        vt = tuple(values)
        merged[vt] = merged.get(vt, 0) + c
    return JointLaw.from_tally(merged, math.factorial(k))


def enumerate_covariance(k: int, p, q, *, threads: int = 1) -> Fraction:
    law = enumerate_joint(k, [p, q], threads=threads)
    return law.covariance(0, 1)


def enumerate_conditional_table(k: int, i: int, j: int, l: int) -> ConditionalTable:
    """Conditional frequencies of the five neighbour patterns given ``k X(i,j) = l``."""
    law = enumerate_joint(k, [(i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1)])
    base = law.probability(lambda v: v[0] * k == l)
    if base == 0:
        raise DomainError(f"l={l} has probability zero at ({i}, {j})")
    probs = []
    for d in ConditionalTable.PATTERNS:
        target = (l, l + d[0], l + d[1], l + d[2])
        probs.append(law.probability(lambda v, t=target: tuple(x * k for x in v) == t) / base)
    return ConditionalTable(*probs)


def enumerate_hat_law(k: int, u, v) -> FieldLaw:
    return enumerate_joint(k, [(u, v)], "checkerboard").marginal(0)


def enumerate_volume_law(k: int, rect: Rect, *, threads: int = 1, force: bool = False) -> FieldLaw:
    """Law of ``V_{C_pi}(rect)`` over uniform ``pi`` for a mesh-aligned rectangle."""
    check_capacity(k, force)
    if not isinstance(rect, Rect):
        rect = Rect(*rect)
    a, b, a2, b2 = rect.mesh_indices(k)

    def tally(perms):
        vol = counts_at(perms, a2, b2) - counts_at(perms, a2, b) - counts_at(perms, a, b2) + counts_at(perms, a, b)
        return _tally_rows(vol[:, None])

    raw = _enumerate(k, tally, threads, force)
    total = math.factorial(k)
    return FieldLaw.from_pairs((Fraction(key[0], k), Fraction(c, total)) for key, c in raw.items())


@lru_cache(maxsize=8)
def grid_tallies(k: int) -> np.ndarray:
    """``tallies[i, j, l] = #{pi : k C_pi(i/k, j/k) = l}`` for every mesh point."""
    check_capacity(k)
    counts = grid_counts(all_permutations(k))
    out = np.zeros((k + 1, k + 1, k + 1), dtype=np.int64)
    for i in range(k + 1):
        for j in range(k + 1):
            out[i, j] = np.bincount(counts[:, i, j], minlength=k + 1)
    out.setflags(write=False)
    return out


def dirichlet_variance_oracle(k: int, point) -> Fraction:
    """Variance of ``Y_k`` at a mesh point from the Dirichlet moments of the
    aggregated weights, with parameters tallied by enumeration."""
    i, j = check_point(k, *point)
    params = [int(c) for c in grid_tallies(k)[i, j]]
    levels = [Fraction(l, k) for l, c in enumerate(params) if c]
    params = [c for c in params if c]
    return dirichlet_linear_variance(params, levels)


@dataclass(frozen=True)
class SamplerSpec:
    """Which field to sample: kind in ``X, Y, Ypoint, Xhat, Yhat`` and mesh size."""

    kind: str
    k: int


@dataclass(frozen=True)
class MCStats:
    mean: float
    variance: float
    se_mean: float
    se_variance: float
    n: int

    def mean_ok(self, expected: float, z: float = 3.0) -> bool:
        return abs(self.mean - expected) <= z * self.se_mean

    def variance_ok(self, expected: float, z: float = 3.0) -> bool:
        return abs(self.variance - expected) <= z * self.se_variance


def stats_from_values(values: np.ndarray) -> MCStats:
    """Mean, unbiased variance and their standard errors.

    The variance SE estimates ``Var(s^2) = (mu4 - sigma^4)/n + 2 sigma^4/(n(n-1))``.
    The first term is taken as the spread of the squared deviations rather than
    ``m4 - s^4``, which cancels to nearly zero for symmetric two-point laws.
    """
    x = np.asarray(values, dtype=np.float64)
    n = x.size
    if n < 2:
        raise DomainError("need at least two samples")
    mean = float(x.mean())
    sq = (x - mean) ** 2
    m2 = float(sq.mean())
    spread = float(np.mean((sq - m2) ** 2))
    var = m2 * n / (n - 1)
    var_of_var = spread / n + 2.0 * var * var / (n * (n - 1))
    return MCStats(mean, var, math.sqrt(var / n), math.sqrt(var_of_var), n)


def mc_stats(sampler: SamplerSpec, point, n: int, rng) -> MCStats:
    """Monte-Carlo moments of a sampled field at one point."""
    if n < 2:
        raise DomainError("mc_stats needs n >= 2")
    if not isinstance(sampler, SamplerSpec):
        sampler = SamplerSpec(*sampler)
    values = field_samples(sampler.kind, sampler.k, [point], n, as_rng(rng))[:, 0]
    return stats_from_values(values)
