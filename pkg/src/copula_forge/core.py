"""Mesh geometry, discrete copulas, permutation copulas and bistochastic matrices.

Exact grids are stored as an integer numerator array over one common
denominator, so every value is a rational and all axiom checks are integer
comparisons. Float grids (used for Dirichlet mixtures) carry ``denominator=None``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from .errors import (
    ConstraintError,
    DomainError,
    NotBistochasticError,
    ShapeError,
)

FLOAT_TOL = 1e-9
_INT64_SAFE = 2**60


@dataclass(frozen=True)
class Mesh:
    """Equidistant mesh ``{0, 1/k, ..., 1}^2``."""

    k: int

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 2:
            raise DomainError(f"mesh resolution must be an integer >= 2, got {self.k!r}")

    @property
    def delta(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(i, self.k) for i in range(self.k + 1))

    def points(self) -> Iterable["GridPoint"]:
        for i in range(self.k + 1):
            for j in range(self.k + 1):
                yield GridPoint(i, j)

    def index_of(self, x) -> int:
        """Mesh index of the rational ``x``; raises if ``x`` is off the mesh."""
        x = Fraction(x)
        scaled = x * self.k
        if scaled.denominator != 1 or not 0 <= scaled <= self.k:
            raise DomainError(f"{x} is not a point of the mesh with k={self.k}")
        return int(scaled)


class GridPoint(NamedTuple):
    i: int
    j: int


def check_k(k) -> int:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k!r}")
    return int(k)


def check_point(k: int, i: int, j: int) -> GridPoint:
    if not (0 <= i <= k and 0 <= j <= k):
        raise DomainError(f"grid point ({i}, {j}) outside [0, {k}]^2")
    return GridPoint(int(i), int(j))


def _to_exact(values) -> Tuple[np.ndarray, int]:
    """Common-denominator form of a nested sequence of rationals."""
    fracs = [[Fraction(x) for x in row] for row in values]
    den = 1
    for row in fracs:
        for x in row:
            den = lcm(den, x.denominator)
    num = np.array(
        [[x.numerator * (den // x.denominator) for x in row] for row in fracs],
        dtype=object,
    )
    return _shrink(num), den


def _shrink(num: np.ndarray) -> np.ndarray:
    """Use int64 storage whenever the magnitudes allow it."""
    if num.dtype == np.int64:
        return num
    if num.size == 0:
        return num.astype(np.int64)
    big = max(abs(int(x)) for x in num.flat)
    if big < _INT64_SAFE:
        return num.astype(np.int64)
    return num


def _reduce(num: np.ndarray, den: int) -> Tuple[np.ndarray, int]:
    if num.dtype == np.int64:
        g = gcd(int(np.gcd.reduce(num.ravel())) if num.size else 0, den)
        return (num // g, den // g) if g > 1 else (num, den)
    g = den
    for x in num.flat:
        g = gcd(g, int(x))
        if g == 1:
            return num, den
    flat = [int(x) // g for x in num.flat]
    return _shrink(np.array(flat, dtype=object).reshape(num.shape)), den // g


class _RationalArray:
    """2-D array of exact rationals (numerators + common denominator) or floats."""

    __slots__ = ("_num", "_den")

    def __init__(self, values=None, *, numerators=None, denominator=None):
        if numerators is not None:
            num = np.asarray(numerators)
            if denominator is None:
                num = num.astype(np.float64)
            else:
                if int(denominator) <= 0:
                    raise DomainError("denominator must be positive")
                if num.dtype.kind not in "iuO":
                    raise DomainError("numerators must be integers")
                num = _shrink(num.astype(object) if num.dtype == object else num.astype(np.int64))
                num, denominator = _reduce(num, int(denominator))
        else:
            arr = np.asarray(values, dtype=object) if not isinstance(values, np.ndarray) else values
            if arr.ndim != 2:
                raise ShapeError(f"expected a 2-D array, got shape {arr.shape}")
            if arr.dtype.kind == "f" or any(isinstance(x, (float, np.floating)) for x in arr.flat):
                num, denominator = arr.astype(np.float64), None
            else:
                num, denominator = _to_exact(arr.tolist())
                num, denominator = _reduce(num, denominator)
        if num.ndim != 2:
            raise ShapeError(f"expected a 2-D array, got shape {num.shape}")
        num = num.copy()
        num.setflags(write=False)
        self._num = num
        self._den = None if denominator is None else int(denominator)

    @property
    def is_exact(self) -> bool:
        return self._den is not None

    @property
    def numerators(self) -> np.ndarray:
        return self._num

    @property
    def denominator(self) -> Optional[int]:
        return self._den

    @property
    def shape(self):
        return self._num.shape

    def value(self, i: int, j: int):
        x = self._num[i, j]
        if self._den is None:
            return float(x)
        return Fraction(int(x), self._den)

    def __getitem__(self, ij):
        i, j = ij
        return self.value(i, j)

    def to_fractions(self) -> List[List[Fraction]]:
        if self._den is None:
            return [[Fraction(float(x)) for x in row] for row in self._num]
        return [[Fraction(int(x), self._den) for x in row] for row in self._num]

    def to_float(self) -> np.ndarray:
        if self._den is None:
            return np.array(self._num, dtype=np.float64)
        if self._num.dtype == np.int64:
            return self._num / self._den
        return np.array([[float(Fraction(int(x), self._den)) for x in row] for row in self._num])

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.shape != other.shape:
            return False
        if self.is_exact and other.is_exact:
            a = self._num.astype(object) * other._den
            b = other._num.astype(object) * self._den
            return bool(np.all(a == b))
        if not self.is_exact and not other.is_exact:
            return bool(np.array_equal(self._num, other._num))
        return False

    def __hash__(self):
        return hash((self.shape, self._den, tuple(self._num.flat)))

    def __repr__(self):
        kind = "exact" if self.is_exact else "float"
        return f"{type(self).__name__}(shape={self.shape}, {kind})"


class DiscreteCopula(_RationalArray):
    """Values ``C(i/k, j/k)`` on the ``(k+1) x (k+1)`` mesh, row index ``i``.

    Construction checks the shape only; use :func:`validate` for the axioms.
    """

    __slots__ = ()

    def __init__(self, values=None, *, numerators=None, denominator=None):
        super().__init__(values, numerators=numerators, denominator=denominator)
        n, m = self.shape
        if n != m:
            raise ShapeError(f"copula grid must be square, got {self.shape}")
        if n < 3:
            raise ShapeError(f"copula grid needs k >= 2, got shape {self.shape}")

    @property
    def k(self) -> int:
        return self.shape[0] - 1

    @property
    def mesh(self) -> Mesh:
        return Mesh(self.k)

    def cell_volumes(self) -> np.ndarray:
        """Numerators (or floats) of the C-volumes of the k*k unit cells."""
        c = self._num
        return c[1:, 1:] - c[:-1, 1:] - c[1:, :-1] + c[:-1, :-1]


class BistochasticMatrix(_RationalArray):
    """k x k nonnegative matrix with unit row and column sums."""

    __slots__ = ()

    def __init__(self, values=None, *, numerators=None, denominator=None):
        super().__init__(values, numerators=numerators, denominator=denominator)
        n, m = self.shape
        if n != m or n < 1:
            raise ShapeError(f"bistochastic matrix must be square, got {self.shape}")

    @property
    def k(self) -> int:
        return self.shape[0]


@dataclass(frozen=True)
class PermutationCopula:
    """Permutation ``pi`` of ``{1..k}`` stored as the tuple ``(pi(1), ..., pi(k))``."""

    perm: Tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise DomainError(f"{perm} is not a permutation of 1..{len(perm)}")

    @classmethod
    def from_zero_based(cls, perm: Sequence[int]) -> "PermutationCopula":
        return cls(tuple(int(p) + 1 for p in perm))

    @property
    def k(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        k = self.k
        p = np.zeros((k, k), dtype=np.int64)
        p[np.arange(k), np.asarray(self.perm) - 1] = 1
        return p


@dataclass(frozen=True)
class Rect:
    """Rectangle ``[x, x+u] x [y, y+v]`` with rational corners."""

    x: Fraction
    y: Fraction
    u: Fraction
    v: Fraction

    def __post_init__(self):
        for name in ("x", "y", "u", "v"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.u < 0 or self.v < 0:
            raise DomainError("rectangle side lengths must be nonnegative")

    def mesh_indices(self, k: int) -> Tuple[int, int, int, int]:
        """Return ``(a, b, a2, b2)`` with ``x=a/k, y=b/k, x+u=a2/k, y+v=b2/k``."""
        mesh = Mesh(k)
        return (
            mesh.index_of(self.x),
            mesh.index_of(self.y),
            mesh.index_of(self.x + self.u),
            mesh.index_of(self.y + self.v),
        )


@dataclass(frozen=True)
class Violation:
    kind: str
    cell: Tuple[int, int]
    detail: str = ""

    def __str__(self):
        return f"{self.kind} at ({self.cell[0]},{self.cell[1]})"


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def messages(self) -> List[str]:
        return [str(v) for v in self.violations]


def validate(copula, tol: float = FLOAT_TOL) -> ValidationReport:
    """Check groundedness, uniform marginals and 2-increasingness.

    Exact grids are checked with integer arithmetic; float grids within ``tol``.
    A non-square or too small array raises :class:`ShapeError`.
    """
    if not isinstance(copula, DiscreteCopula):
        copula = DiscreteCopula(copula)
    k = copula.k
    c = copula.numerators
    den = copula.denominator
    found: List[Violation] = []

    if den is None:
        zero = lambda x: abs(x) <= tol  # noqa: E731
        equals = lambda x, target: abs(x - target) <= tol  # noqa: E731
        nonneg = lambda x: x >= -tol  # noqa: E731
        marg = lambda idx: idx / k  # noqa: E731
    else:
        zero = lambda x: x == 0  # noqa: E731
        equals = lambda x, target: x * k == target  # noqa: E731
        nonneg = lambda x: x >= 0  # noqa: E731
        marg = lambda idx: idx * den  # noqa: E731

    for i in range(k + 1):
        if not zero(c[i, 0]):
            found.append(Violation("grounded", (i, 0), f"C({i}/{k}, 0) != 0"))
        if i > 0 and not zero(c[0, i]):
            found.append(Violation("grounded", (0, i), f"C(0, {i}/{k}) != 0"))
    for i in range(1, k + 1):
        if not equals(c[i, k], marg(i)):
            found.append(Violation("uniform marginals", (i, k), f"C({i}/{k}, 1) != {i}/{k}"))
        if i < k and not equals(c[k, i], marg(i)):
            found.append(Violation("uniform marginals", (k, i), f"C(1, {i}/{k}) != {i}/{k}"))
    vol = copula.cell_volumes()
    bad = np.argwhere(~np.vectorize(nonneg, otypes=[bool])(vol)) if vol.dtype == object else np.argwhere(
        ~nonneg(vol)
    )
    for a, b in bad:
        found.append(Violation("2-increasing", (int(a) + 1, int(b) + 1), "negative cell volume"))
    return ValidationReport(tuple(found))


def require_valid(copula: DiscreteCopula) -> DiscreteCopula:
    report = validate(copula)
    if not report.ok:
        raise DomainError("invalid discrete copula: " + "; ".join(report.messages()[:5]))
    return copula


def permutation_to_copula(p: PermutationCopula) -> DiscreteCopula:
    """``C_pi(i/k, j/k) = #{m <= i : pi(m) <= j} / k``."""
    if not isinstance(p, PermutationCopula):
        p = PermutationCopula(tuple(p))
    k = p.k
    counts = np.zeros((k + 1, k + 1), dtype=np.int64)
    counts[1:, 1:] = p.matrix().cumsum(axis=0).cumsum(axis=1)
    return DiscreteCopula(numerators=counts, denominator=k)


def product_copula(k: int) -> DiscreteCopula:
    k = check_k(k)
    idx = np.arange(k + 1, dtype=np.int64)
    return DiscreteCopula(numerators=np.outer(idx, idx), denominator=k * k)


def convex_combination(weights: Sequence, copulas: Sequence[DiscreteCopula]) -> DiscreteCopula:
    """``sum_n w_n C_n``; exact when all weights and grids are exact."""
    if len(weights) != len(copulas) or not copulas:
        raise DomainError("need as many weights as copulas (at least one)")
    k = copulas[0].k
    if any(c.k != k for c in copulas):
        raise ShapeError("all copulas must share the same mesh")
    exact = all(c.is_exact for c in copulas) and not any(isinstance(w, float) for w in weights)
    if not exact:
        acc = np.zeros((k + 1, k + 1))
        for w, c in zip(weights, copulas):
            acc += float(w) * c.to_float()
        return DiscreteCopula(acc)
    fw = [Fraction(w) for w in weights]
    den = 1
    for w, c in zip(fw, copulas):
        den = lcm(den, w.denominator * c.denominator)
    acc = np.zeros((k + 1, k + 1), dtype=object)
    for w, c in zip(fw, copulas):
        scale = w.numerator * (den // (w.denominator * c.denominator))
        acc = acc + c.numerators.astype(object) * scale
    return DiscreteCopula(numerators=acc, denominator=den)


def copula_to_bistochastic(c: DiscreteCopula) -> BistochasticMatrix:
    """Mass matrix ``b[i][j] = k * V_C(cell (i, j))`` (0-based cells)."""
    require_valid(c)
    vol = c.cell_volumes()
    if c.is_exact:
        return BistochasticMatrix(numerators=vol * c.k, denominator=c.denominator)
    return BistochasticMatrix(numerators=vol * c.k)


def _check_bistochastic(b: BistochasticMatrix, tol: float) -> None:
    num, den = b.numerators, b.denominator
    rows = num.sum(axis=1)
    cols = num.sum(axis=0)
    if den is None:
        neg = np.argwhere(num < -tol)
        row_bad = [r for r, s in enumerate(rows) if abs(s - 1.0) > tol]
        col_bad = [q for q, s in enumerate(cols) if abs(s - 1.0) > tol]
    else:
        neg = np.argwhere(num.astype(object) < 0) if num.dtype == object else np.argwhere(num < 0)
        row_bad = [r for r, s in enumerate(rows) if s != den]
        col_bad = [q for q, s in enumerate(cols) if s != den]
    if len(neg):
        a, q = neg[0]
        raise ConstraintError(f"negative entry at row {int(a)}, column {int(q)}")
    if row_bad:
        raise ConstraintError(f"row {row_bad[0]} does not sum to 1")
    if col_bad:
        raise ConstraintError(f"column {col_bad[0]} does not sum to 1")


def bistochastic_to_copula(b: BistochasticMatrix, tol: float = FLOAT_TOL) -> DiscreteCopula:
    """Inverse of :func:`copula_to_bistochastic`."""
    if not isinstance(b, BistochasticMatrix):
        b = BistochasticMatrix(b)
    _check_bistochastic(b, tol)
    k = b.k
    num = b.numerators
    out = np.zeros((k + 1, k + 1), dtype=num.dtype)
    out[1:, 1:] = num.cumsum(axis=0).cumsum(axis=1)
    if b.is_exact:
        return DiscreteCopula(numerators=out, denominator=b.denominator * k)
    return DiscreteCopula(numerators=out / k)


def c_volume(c: DiscreteCopula, r: Rect):
    """C-volume of a mesh-aligned rectangle."""
    a, b, a2, b2 = r.mesh_indices(c.k)
    return c.value(a2, b2) - c.value(a2, b) - c.value(a, b2) + c.value(a, b)


def _has_perfect_matching(support: np.ndarray) -> bool:
    n = support.shape[0]
    if n == 0:
        return True
    match = maximum_bipartite_matching(csr_matrix(support.astype(np.int8)), perm_type="column")
    return bool(np.all(match >= 0))


def lex_min_matching(support: np.ndarray) -> Optional[List[int]]:
    """Lexicographically smallest perfect matching (row -> column) on a 0/1 support."""
    support = np.asarray(support, dtype=bool)
    n = support.shape[0]
    if not _has_perfect_matching(support):
        return None
    free_cols = list(range(n))
    assignment: List[int] = []
    for r in range(n):
        for c in free_cols:
            if not support[r, c]:
                continue
            rest_cols = [q for q in free_cols if q != c]
            if _has_perfect_matching(support[np.ix_(range(r + 1, n), rest_cols)]):
                assignment.append(c)
                free_cols = rest_cols
                break
        else:  # pragma: no cover - feasibility was checked above
            return None
    return assignment


def birkhoff_decompose(b, tol: float = 1e-12) -> List[Tuple[object, PermutationCopula]]:
    """Birkhoff-von Neumann decomposition by repeated peeling.

    Each step takes the lexicographically smallest perfect matching on the
    positive support and subtracts its minimal entry. Exact matrices yield
    :class:`Fraction` weights and need no tolerance; float matrices have
    entries below ``tol`` zeroed after every peel.
    """
    if not isinstance(b, BistochasticMatrix):
        b = BistochasticMatrix(b)
    _check_bistochastic(b, max(tol, FLOAT_TOL) if not b.is_exact else tol)
    k = b.k
    if b.is_exact:
        resid = np.array([[Fraction(int(x), b.denominator) for x in row] for row in b.numerators], dtype=object)
        positive = lambda m: np.vectorize(lambda x: x > 0, otypes=[bool])(m)  # noqa: E731
    else:
        resid = b.to_float()
        resid[resid < tol] = 0.0
        positive = lambda m: m > 0  # noqa: E731

    terms: List[Tuple[object, PermutationCopula]] = []
    rows = np.arange(k)
    while True:
        support = positive(resid)
        if not support.any():
            break
        match = lex_min_matching(support)
        if match is None:
            raise NotBistochasticError(
                "no perfect matching on the positive support; input is not bistochastic",
                residual=resid.copy(),
            )
        cols = np.asarray(match)
        w = min(resid[rows, cols])
        resid[rows, cols] = resid[rows, cols] - w
        if not b.is_exact:
            resid[resid < tol] = 0.0
            w = float(w)
        terms.append((w, PermutationCopula.from_zero_based(match)))
    return terms


def reconstruct(terms: Sequence[Tuple[object, PermutationCopula]]) -> np.ndarray:
    """``sum w P_pi`` as a float matrix (or Fraction matrix for exact weights)."""
    k = terms[0][1].k
    exact = all(isinstance(w, (int, Fraction)) for w, _ in terms)
    out = np.zeros((k, k), dtype=object if exact else np.float64)
    if exact:
        out[:] = Fraction(0)
    for w, p in terms:
        out = out + p.matrix() * w
    return out
