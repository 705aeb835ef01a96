"""Closed-form laws, moments and covariances of the random copula fields.

``X`` is the field of a uniformly chosen permutation copula, ``Y`` the field of
a uniform-on-the-simplex mixture of all permutation copulas, and ``Xhat`` /
``Yhat`` their checkerboard extensions. Everything except :func:`cdf_Y` is
exact rational arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from .core import check_k, check_point
from .errors import DomainError
from .extension import _corner_weights, local_coords
from .rng import CHUNK, as_rng, dirichlet_rows

Number = Union[int, Fraction, float]

DIRECTIONS = ("right", "up", "diag", "antidiag")
FLOAT_MERGE_TOL = 1e-12


@dataclass(frozen=True)
class FieldLaw:
    """Finite law: strictly increasing rational atoms with positive probabilities."""

    atoms: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        values = [a for a, _ in self.atoms]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise DomainError("atom values must be strictly increasing")
        if any(p <= 0 for _, p in self.atoms):
            raise DomainError("atom probabilities must be positive")
        if sum(p for _, p in self.atoms) != 1:
            raise DomainError("atom probabilities must sum to 1")

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[Number, Number]]) -> "FieldLaw":
        """Merge equal values, drop zero masses, sort."""
        acc: Dict[Fraction, Fraction] = {}
        for value, prob in pairs:
            value, prob = Fraction(value), Fraction(prob)
            acc[value] = acc.get(value, Fraction(0)) + prob
        return cls(tuple(sorted((v, p) for v, p in acc.items() if p != 0)))

    @classmethod
    def point_mass(cls, value) -> "FieldLaw":
        return cls(((Fraction(value), Fraction(1)),))

    def as_dict(self) -> Dict[Fraction, Fraction]:
        return dict(self.atoms)

    @property
    def values(self) -> List[Fraction]:
        return [v for v, _ in self.atoms]

    @property
    def probs(self) -> List[Fraction]:
        return [p for _, p in self.atoms]

    def prob(self, value) -> Fraction:
        return self.as_dict().get(Fraction(value), Fraction(0))

    def mean(self) -> Fraction:
        return sum((v * p for v, p in self.atoms), Fraction(0))

    def second_moment(self) -> Fraction:
        return sum((v * v * p for v, p in self.atoms), Fraction(0))

    def variance(self) -> Fraction:
        m = self.mean()
        return self.second_moment() - m * m

    def cdf(self, w) -> Fraction:
        return sum((p for v, p in self.atoms if v <= w), Fraction(0))


@dataclass(frozen=True)
class AggregatedDirichlet:
    """Law of the aggregated mixture weights at a grid point.

    ``params[h] = |L_{i j (lo + h)}|`` with ``lo = max(0, i + j - k)``;
    ``offset = lo / k`` is the lower Frechet-Hoeffding bound at the point.
    """

    k: int
    i: int
    j: int
    params: Tuple[int, ...]
    offset: Fraction

    @property
    def m(self) -> int:
        return len(self.params) - 1

    @property
    def lo(self) -> int:
        return max(0, self.i + self.j - self.k)


@dataclass(frozen=True)
class ConditionalTable:
    """Conditional probabilities of the five neighbour patterns given ``X(i,j) = l/k``.

    1: (l+1, l+1, l+2), 2: (l+1, l, l+1), 3: (l, l+1, l+1), 4: (l, l, l),
    5: (l, l, l+1) for the values ``k*X`` at ``(i+1,j), (i,j+1), (i+1,j+1)``.
    """

    p1: Fraction
    p2: Fraction
    p3: Fraction
    p4: Fraction
    p5: Fraction

    def as_tuple(self) -> Tuple[Fraction, ...]:
        return (self.p1, self.p2, self.p3, self.p4, self.p5)

    # increments of k*X at (i+1, j), (i, j+1), (i+1, j+1) for each pattern
    PATTERNS = ((1, 1, 2), (1, 0, 1), (0, 1, 1), (0, 0, 0), (0, 0, 1))


@dataclass(frozen=True)
class DirichletMoments:
    means: Tuple
    variances: Tuple
    covariances: Tuple[Tuple, ...]


@dataclass(frozen=True)
class CdfEstimate:
    estimate: float
    se: float
    exact: bool
    n_samples: int


def support(k: int, i: int, j: int) -> range:
    """Values ``l`` with ``P[X(i/k, j/k) = l/k] > 0``."""
    return range(max(0, i + j - k), min(i, j) + 1)


def count_L(k: int, i: int, j: int, l: int) -> int:
    """Number of permutations ``pi`` with ``#{m <= i : pi(m) <= j} = l``.

    Zero outside ``max(0, i+j-k) <= l <= min(i, j)`` (reciprocal factorials
    of negative integers vanish).
    """
    k = check_k(k)
    check_point(k, i, j)
    if not max(0, i + j - k) <= l <= min(i, j):
        return 0
    f = math.factorial
    return (f(i) * f(j) * f(k - i) * f(k - j)) // (
        f(i - l) * f(j - l) * f(k + l - i - j) * f(l)
    )


def pmf_X(k: int, point) -> FieldLaw:
    """Exact law of ``X_k(i/k, j/k)``: atoms ``l/k`` with mass ``count_L/k!``."""
    k = check_k(k)
    i, j = check_point(k, *point)
    kf = math.factorial(k)
    return FieldLaw(tuple((Fraction(l, k), Fraction(count_L(k, i, j, l), kf)) for l in support(k, i, j)))


def hypergeometric_pmf(k: int, i: int, j: int) -> FieldLaw:
    """``P[l] = C(i, l) C(k-i, j-l) / C(k, j)``; the same law as :func:`pmf_X`."""
    k = check_k(k)
    check_point(k, i, j)
    total = math.comb(k, j)
    return FieldLaw.from_pairs(
        (Fraction(l, k), Fraction(math.comb(i, l) * math.comb(k - i, j - l), total))
        for l in support(k, i, j)
    )


def _mesh_indices(k: int, u, v) -> Tuple[int, int]:
    u, v = Fraction(u), Fraction(v)
    i, j = u * k, v * k
    if i.denominator != 1 or j.denominator != 1 or not (0 <= i <= k and 0 <= j <= k):
        raise DomainError(f"({u}, {v}) is not a mesh point for k={k}")
    return int(i), int(j)


def mean_X(k: int, u, v) -> Fraction:
    k = check_k(k)
    _mesh_indices(k, u, v)
    return Fraction(u) * Fraction(v)


def var_X(k: int, u, v) -> Fraction:
    k = check_k(k)
    _mesh_indices(k, u, v)
    u, v = Fraction(u), Fraction(v)
    return u * v * (1 - u) * (1 - v) / (k - 1)


def _check_adjacent(k: int, i: int, j: int, direction: str) -> None:
    if direction not in DIRECTIONS:
        raise DomainError(f"direction must be one of {DIRECTIONS}, got {direction!r}")
    if not (0 <= i <= k - 1 and 0 <= j <= k - 1):
        raise DomainError(f"neighbour of ({i}, {j}) in direction {direction!r} leaves the mesh")


def cov_X_adjacent(k: int, i: int, j: int, direction: str) -> Fraction:
    """Covariance of ``X`` at neighbouring grid points.

    ``right``: (i,j)-(i+1,j); ``up``: (i,j)-(i,j+1); ``diag``: (i,j)-(i+1,j+1);
    ``antidiag``: (i+1,j)-(i,j+1).
    """
    k = check_k(k)
    _check_adjacent(k, i, j, direction)
    den = k**4 * (k - 1)
    if direction == "right":
        return Fraction(i * j * (k - i - 1) * (k - j), den)
    if direction == "up":
        return Fraction(i * j * (k - i) * (k - j - 1), den)
    return Fraction(i * j * (k - i - 1) * (k - j - 1), den)


def conditional_table(k: int, i: int, j: int, l: int) -> ConditionalTable:
    k = check_k(k)
    if not (0 <= i <= k - 1 and 0 <= j <= k - 1):
        raise DomainError(f"conditional table needs 0 <= i, j <= k-1, got ({i}, {j})")
    if l not in support(k, i, j):
        raise DomainError(f"l={l} outside the support of X at ({i}, {j})")
    den = (k - i) * (k - j)
    rest = k + l - i - j
    return ConditionalTable(
        Fraction((i - l) * (j - l), den),
        Fraction((j - l) * rest, den),
        Fraction((i - l) * rest, den),
        Fraction(rest * (rest - 1), den),
        Fraction(rest, den),
    )


def _as_exact(x) -> Tuple[Fraction, bool]:
    if isinstance(x, Rational):
        return Fraction(x), True
    if isinstance(x, float):
        return Fraction(x), False
    raise DomainError(f"expected a number, got {x!r}")


def _merge_close(law: FieldLaw, tol: float) -> FieldLaw:
    merged: List[List[Fraction]] = []
    for v, p in law.atoms:
        if merged and float(v - merged[-1][0]) <= tol:
            merged[-1][1] += p
        else:
            merged.append([v, p])
    return FieldLaw(tuple((v, p) for v, p in merged))


def pmf_Xhat(k: int, u, v) -> FieldLaw:
    """Exact law of the checkerboard field ``Xhat_k(u, v)`` at any point of the square.

    Conditioning on ``X(i/k, j/k) = l/k`` gives the five atoms
    ``(l+t+s)/k, (l+t)/k, (l+s)/k, l/k, (l+ts)/k``; coinciding atoms (``t = s``,
    ``t + s = 1``, ``t = 0`` ...) are merged. Float inputs are converted exactly
    and atoms closer than 1e-12 are merged afterwards.
    """
    k = check_k(k)
    u, exact_u = _as_exact(u)
    v, exact_v = _as_exact(v)
    lc = local_coords(k, u, v)
    i, j, t, s = _corner_weights(k, lc)
    base = pmf_X(k, (i, j))
    pairs = []
    for x, px in base.atoms:
        l = int(x * k)
        table = conditional_table(k, i, j, l)
        atoms = ((l + t + s), (l + t), (l + s), l, (l + t * s))
        for a, p in zip(atoms, table.as_tuple()):
            pairs.append((Fraction(a) / k, p * px))
    law = FieldLaw.from_pairs(pairs)
    if not (exact_u and exact_v):
        law = _merge_close(law, FLOAT_MERGE_TOL)
    return law


def _offsets(k: int, u, v):
    lc = local_coords(k, u, v)
    return lc.t, lc.s


def mean_Xhat(k: int, u, v):
    k = check_k(k)
    local_coords(k, u, v)
    return u * v


def var_Xhat(k: int, u, v):
    """``(u(1-u) - t(1-t)/k) (v(1-v) - s(1-s)/k) / (k-1)``."""
    k = check_k(k)
    t, s = _offsets(k, u, v)
    return (u * (1 - u) - t * (1 - t) / k) * (v * (1 - v) - s * (1 - s) / k) / (k - 1)


def _factorial_plus_one(k: int) -> int:
    return math.factorial(k) + 1


def mean_Y(k: int, u, v) -> Fraction:
    return mean_X(k, u, v)


def var_Y(k: int, u, v) -> Fraction:
    return var_X(k, u, v) / _factorial_plus_one(k)


def cov_Y_adjacent(k: int, i: int, j: int, direction: str) -> Fraction:
    return cov_X_adjacent(k, i, j, direction) / _factorial_plus_one(k)


def mean_Yhat(k: int, u, v):
    return mean_Xhat(k, u, v)


def var_Yhat(k: int, u, v):
    return var_Xhat(k, u, v) / _factorial_plus_one(check_k(k))


def aggregated_dirichlet(k: int, point) -> AggregatedDirichlet:
    k = check_k(k)
    i, j = check_point(k, *point)
    params = tuple(count_L(k, i, j, l) for l in support(k, i, j))
    return AggregatedDirichlet(k, i, j, params, Fraction(max(0, i + j - k), k))


def dirichlet_moments(params: Sequence[Number]) -> DirichletMoments:
    """Means, variances and covariances of Dir(params); exact for rational params."""
    if not params:
        raise DomainError("need at least one Dirichlet parameter")
    if any(isinstance(a, float) for a in params):
        a = [float(x) for x in params]
    else:
        a = [Fraction(x) for x in params]
    if any(not x > 0 for x in a):
        raise DomainError("Dirichlet parameters must all be positive")
    a0 = sum(a)
    scale = a0 * a0 * (a0 + 1)
    means = tuple(x / a0 for x in a)
    variances = tuple(x * (a0 - x) / scale for x in a)
    cov = tuple(
        tuple(variances[p] if p == q else -a[p] * a[q] / scale for q in range(len(a)))
        for p in range(len(a))
    )
    return DirichletMoments(means, variances, cov)


def dirichlet_linear_variance(params: Sequence[Number], coefficients: Sequence[Number]):
    """Variance of ``sum_h c_h * gamma_h`` for ``gamma ~ Dir(params)``."""
    if len(params) != len(coefficients):
        raise DomainError("params and coefficients must have equal length")
    cov = dirichlet_moments(params).covariances
    c = [Fraction(x) if not isinstance(x, float) else x for x in coefficients]
    return sum(c[p] * cov[p][q] * c[q] for p in range(len(c)) for q in range(len(c)))


def cdf_Y(
    k: int,
    point,
    w: Number,
    n_samples: int = 1_000_000,
    rng=None,
) -> CdfEstimate:
    """Monte-Carlo estimate of ``P[Y_k(i/k, j/k) <= w]`` with its binomial standard error.

    The aggregated weights ``gamma ~ Dir(|L_{ij l}|)`` are sampled directly.
    Below the lower bound the answer is exactly 0, at or above ``min(u, v)``
    exactly 1; no sampling happens in those cases.
    """
    agg = aggregated_dirichlet(k, point)
    if n_samples < 1:
        raise DomainError("n_samples must be >= 1")
    upper = Fraction(min(agg.i, agg.j), k)
    wq = Fraction(w) if isinstance(w, Rational) else w
    if wq < agg.offset:
        return CdfEstimate(0.0, 0.0, True, 0)
    if wq >= upper:
        return CdfEstimate(1.0, 0.0, True, 0)
    rng = as_rng(rng)
    threshold = float(k * (Fraction(wq) - agg.offset)) if isinstance(wq, Fraction) else k * (wq - float(agg.offset))
    weights = np.arange(agg.m + 1, dtype=np.float64)
    hits = 0
    done = 0
    while done < n_samples:
        n = min(CHUNK, n_samples - done)
        gamma = dirichlet_rows(rng.generator, [float(a) for a in agg.params], n)
        hits += int(np.count_nonzero(gamma @ weights <= threshold))
        done += n
    p = hits / n_samples
    return CdfEstimate(p, math.sqrt(p * (1.0 - p) / n_samples), False, n_samples)


def variance_surface(k: int, n: int, *, y: bool = False) -> np.ndarray:
    """Analytic variance of ``Xhat`` (or ``Yhat``) on the ``n x n`` lattice ``{a/(n-1)}``."""
    k = check_k(k)
    if n < 2:
        raise DomainError("lattice needs n >= 2")
    out = np.empty((n, n))
    scale = _factorial_plus_one(k) if y else 1
    for a in range(n):
        for b in range(n):
            out[a, b] = float(var_Xhat(k, Fraction(a, n - 1), Fraction(b, n - 1)) / scale)
    return out

