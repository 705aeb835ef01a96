"""Seeded samplers for permutations, random copula fields and data pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .analytic import aggregated_dirichlet
from .core import (
    DiscreteCopula,
    GridPoint,
    PermutationCopula,
    check_k,
    check_point,
    permutation_to_copula,
    require_valid,
)
from .errors import CapacityError, DomainError
from .extension import _corner_weights, local_coords
from .perms import MAX_ENUM_K, all_permutations, counts_at, grid_counts, rank_ranges
from .rng import (
    CHUNK,
    SeededRng,
    as_rng,
    dirichlet_rows,
    permutation_rows,
    uniform_simplex_rows,
)

__all__ = [
    "SeededRng",
    "DirichletWeights",
    "sample_permutation",
    "sample_X",
    "sample_uniform_simplex",
    "sample_dirichlet",
    "sample_Y_grid",
    "sample_Y_point",
    "sample_Y_point_values",
    "sample_pairs",
    "empirical_copula",
    "field_samples",
]

SIMPLEX_TOL = 1e-12
MAX_Y_GRID_K = MAX_ENUM_K
_Y_BLOCK = 5040
_Y_CELLS = 4_000_000


@dataclass(frozen=True)
class DirichletWeights:
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise DomainError("weights must be a nonempty vector")
        if np.any(w < 0) or abs(w.sum() - 1.0) > SIMPLEX_TOL:
            raise DomainError("weights must lie on the simplex")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.weights.size


def sample_permutation(rng, k: int) -> PermutationCopula:
    k = check_k(k)
    rng = as_rng(rng)
    return PermutationCopula.from_zero_based(rng.generator.permutation(k))


def sample_X(rng, k: int) -> DiscreteCopula:
    """Copula of a uniformly random permutation."""
    return permutation_to_copula(sample_permutation(rng, k))


def sample_uniform_simplex(rng, m: int) -> DirichletWeights:
    rng = as_rng(rng)
    return DirichletWeights(uniform_simplex_rows(rng.generator, m, 1)[0])


def sample_dirichlet(rng, params: Sequence) -> DirichletWeights:
    rng = as_rng(rng)
    return DirichletWeights(dirichlet_rows(rng.generator, [float(a) for a in params], 1)[0])


def sample_Y_grid(rng, k: int) -> DiscreteCopula:
    """One realization of ``sum_pi alpha_pi C_pi`` with ``alpha`` uniform on the simplex.

    Permutations are streamed in lexicographic blocks; only the running
    float grid is kept. Capped at k=8, use :func:`sample_Y_point` beyond.
    """
    k = check_k(k)
    if k > MAX_Y_GRID_K:
        raise CapacityError(
            f"full-grid Y sampling supports k <= {MAX_Y_GRID_K}; use sample_Y_point for k={k}"
        )
    rng = as_rng(rng)
    total = math.factorial(k)
    alpha = uniform_simplex_rows(rng.generator, total, 1)[0]
    perms = all_permutations(k)
    grid = np.zeros((k + 1, k + 1))
    for start, stop in rank_ranges(total, -(-total // _Y_BLOCK)):
        counts = grid_counts(perms[start:stop])
        grid += np.tensordot(alpha[start:stop], counts, axes=1)
    grid /= k
    # the weights sum to 1 only up to rounding; the top edges are fixed by the margins
    grid[k, :] = grid[:, k] = np.arange(k + 1) / k
    return DiscreteCopula(grid)


def sample_Y_point_values(rng, k: int, point, n: int) -> np.ndarray:
    """``n`` draws of ``Y_k(i/k, j/k)`` via the aggregated Dirichlet weights."""
    agg = aggregated_dirichlet(k, point)
    rng = as_rng(rng)
    if agg.m == 0:
        return np.full(n, float(agg.offset))
    levels = np.arange(agg.m + 1, dtype=np.float64) / k
    params = [float(a) for a in agg.params]
    out = np.empty(n)
    for start in range(0, n, CHUNK):
        stop = min(n, start + CHUNK)
        out[start:stop] = dirichlet_rows(rng.generator, params, stop - start) @ levels
    return out + float(agg.offset)


def sample_Y_point(rng, k: int, point) -> float:
    """One draw of ``Y_k`` at a grid point; works for any k (no factorial-size state).

    Count parameters above 2**53 lose precision when converted to Gamma shapes;
    the effect is far below Monte-Carlo resolution.
    """
    return float(sample_Y_point_values(rng, k, point, 1)[0])


def sample_pairs(rng, c: DiscreteCopula, n: int) -> np.ndarray:
    """``n`` i.i.d. pairs from the checkerboard density of ``c``: shape ``(n, 2)``."""
    require_valid(c)
    if n < 0:
        raise DomainError("n must be nonnegative")
    rng = as_rng(rng)
    gen = rng.generator
    k = c.k
    if c.is_exact:
        vol = c.cell_volumes()
        probs = np.array([float(Fraction(int(x), c.denominator)) for x in vol.flat])
    else:
        probs = np.clip(c.cell_volumes().ravel(), 0.0, None)
    probs = probs / probs.sum()
    cells = gen.choice(k * k, size=n, p=probs)
    jitter = gen.random(size=(n, 2))
    out = np.empty((n, 2))
    out[:, 0] = (cells // k + jitter[:, 0]) / k
    out[:, 1] = (cells % k + jitter[:, 1]) / k
    return out


def _rank_positions(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """1-based ranks of ``x``; ties broken by ``y`` so input order never matters."""
    order = np.lexsort((y, x))
    ranks = np.empty(x.size, dtype=np.int64)
    ranks[order] = np.arange(1, x.size + 1)
    return ranks


def _cell_overlaps(ranks: np.ndarray, n: int, k: int):
    """Yield ``(cell, overlap)`` arrays in units of ``1/(n k)``.

    Observation with rank r spans ``[(r-1)k, rk]``, cell a spans ``[a n, (a+1) n]``.
    """
    lo = (ranks - 1) * k
    hi = ranks * k
    first = lo // n
    for d in range(k // n + 2):
        cell = first + d
        ov = np.minimum(hi, (cell + 1) * n) - np.maximum(lo, cell * n)
        ok = (cell < k) & (ov > 0)
        yield np.where(ok, cell, 0), np.where(ok, ov, 0)


def empirical_copula(pairs, k: int) -> DiscreteCopula:
    """Rank-based empirical checkerboard copula on the k-mesh (exact rationals).

    Each observation owns the rank cell ``[(r-1)/n, r/n]`` in both axes and its
    mass ``1/n`` is spread over the mesh cells by overlap length, so every mesh
    row and column receives exactly ``1/k``.
    """
    k = check_k(k)
    pts = np.asarray(pairs, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] < 1:
        raise DomainError("need at least one (u, v) pair")
    if np.any((pts < 0) | (pts > 1)):
        raise DomainError("pairs must lie in the unit square")
    n = pts.shape[0]
    ru = _rank_positions(pts[:, 0], pts[:, 1])
    rv = _rank_positions(pts[:, 1], pts[:, 0])
    mass = np.zeros((k, k), dtype=np.int64)
    u_parts = list(_cell_overlaps(ru, n, k))
    v_parts = list(_cell_overlaps(rv, n, k))
    for cu, ou in u_parts:
        for cv, ov in v_parts:
            w = ou * ov
            sel = w > 0
            np.add.at(mass, (cu[sel], cv[sel]), w[sel])
    grid = np.zeros((k + 1, k + 1), dtype=np.int64)
    grid[1:, 1:] = mass.cumsum(axis=0).cumsum(axis=1)
    return DiscreteCopula(numerators=grid, denominator=n * k * k)


def _hat_corners(k: int, point):
    lc = local_coords(k, *point)
    i, j, t, s = _corner_weights(k, lc)
    t, s = float(t), float(s)
    corners = ((i, j), (i + 1, j), (i, j + 1), (i + 1, j + 1))
    weights = ((1 - t) * (1 - s), t * (1 - s), (1 - t) * s, t * s)
    return corners, weights


def _perm_values(kind: str, k: int, perms: np.ndarray, points) -> np.ndarray:
    """Field values of each permutation copula at the points: shape ``(len(perms), P)``."""
    cols = []
    for p in points:
        if kind in ("X", "Y"):
            i, j = check_point(k, *p)
            cols.append(counts_at(perms, i, j) / k)
        else:
            corners, weights = _hat_corners(k, p)
            acc = np.zeros(perms.shape[0])
            for (a, b), w in zip(corners, weights):
                if w:
                    acc += w * counts_at(perms, a, b) / k
            cols.append(acc)
    return np.stack(cols, axis=1)


FIELD_KINDS = ("X", "Y", "Ypoint", "Xhat", "Yhat")


def field_samples(kind: str, k: int, points, n: int, rng) -> np.ndarray:
    """``n`` joint realizations of a random field at ``points``: shape ``(n, P)``.

    ``X``/``Xhat`` draw uniform permutations; ``Y``/``Yhat`` draw full simplex
    weights over all k! permutation copulas (k <= 8); ``Ypoint`` samples each
    grid point independently through the aggregated Dirichlet law. Grid kinds
    take ``(i, j)`` index points, hat kinds take ``(u, v)`` coordinates.
    """
    if kind not in FIELD_KINDS:
        raise DomainError(f"unknown field kind {kind!r}; expected one of {FIELD_KINDS}")
    k = check_k(k)
    rng = as_rng(rng)
    gen = rng.generator
    points = [tuple(p) for p in points]
    out = np.empty((n, len(points)))
    if kind == "Ypoint":
        for col, p in enumerate(points):
            out[:, col] = sample_Y_point_values(rng, k, GridPoint(*p), n)
        return out
    if kind in ("Y", "Yhat"):
        if k > MAX_Y_GRID_K:
            raise CapacityError(f"full-simplex Y sampling supports k <= {MAX_Y_GRID_K}")
        table = _perm_values(kind, k, all_permutations(k), points)
        total = table.shape[0]
        # bound the (rows x k!) weight block; depends on k only, so still deterministic
        rows = max(1, min(CHUNK, _Y_CELLS // total))
        for start in range(0, n, rows):
            stop = min(n, start + rows)
            alpha = uniform_simplex_rows(gen, total, stop - start)
            out[start:stop] = alpha @ table
        return out
    for start in range(0, n, CHUNK):
        stop = min(n, start + CHUNK)
        perms = permutation_rows(gen, k, stop - start)
        out[start:stop] = _perm_values(kind, k, perms, points)
    return out
