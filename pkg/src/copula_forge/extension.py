"""Checkerboard (piecewise bilinear) extension of discrete copulas."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

import numpy as np

from .core import DiscreteCopula, check_k, require_valid
from .errors import DomainError

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class LocalCoords:
    """``u = (i + t)/k``, ``v = (j + s)/k`` with ``t, s`` in ``[0, 1)``."""

    i: int
    j: int
    t: Number
    s: Number


def _split(k: int, u: Number):
    if isinstance(u, Rational):
        u = Fraction(u)
        if not 0 <= u <= 1:
            raise DomainError(f"{u} lies outside [0, 1]")
        i = math.floor(u * k)
        return i, u * k - i
    u = float(u)
    if not 0.0 <= u <= 1.0:
        raise DomainError(f"{u} lies outside [0, 1]")
    i = min(int(math.floor(u * k)), k)
    return i, (u * k - i) if i < k else 0.0


def local_coords(k: int, u: Number, v: Number) -> LocalCoords:
    """Cell indices and fractional offsets of ``(u, v)``; exact for rationals.

    ``u = 1`` maps to ``i = k, t = 0``.
    """
    k = check_k(k)
    i, t = _split(k, u)
    j, s = _split(k, v)
    return LocalCoords(i, j, t, s)


def _corner_weights(k, lc: LocalCoords):
    """Lower cell corner ``(i, j)`` and blend weights, shifting off the top edge."""
    i, t, j, s = lc.i, lc.t, lc.j, lc.s
    if i == k:
        i, t = k - 1, Fraction(1) if isinstance(t, Fraction) else 1.0
    if j == k:
        j, s = k - 1, Fraction(1) if isinstance(s, Fraction) else 1.0
    return i, j, t, s


def checkerboard_eval(c: DiscreteCopula, u: Number, v: Number):
    """Bilinear blend of the four grid values around ``(u, v)``.

    Rational ``u, v`` on an exact grid give a :class:`Fraction`; otherwise a float.
    """
    k = c.k
    lc = local_coords(k, u, v)
    i, j, t, s = _corner_weights(k, lc)
    exact = c.is_exact and isinstance(t, Fraction) and isinstance(s, Fraction)
    if exact:
        get = c.value
    else:
        grid = c.to_float()
        get = lambda a, b: float(grid[a, b])  # noqa: E731
        t, s = float(t), float(s)
    return (
        (1 - t) * (1 - s) * get(i, j)
        + t * (1 - s) * get(i + 1, j)
        + (1 - t) * s * get(i, j + 1)
        + t * s * get(i + 1, j + 1)
    )


def checkerboard_eval_array(c: DiscreteCopula, u, v) -> np.ndarray:
    """Vectorized float evaluation at arrays of points."""
    k = c.k
    grid = c.to_float()
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if np.any((u < 0) | (u > 1) | (v < 0) | (v > 1)):
        raise DomainError("evaluation points must lie in the unit square")
    i = np.minimum(np.floor(u * k).astype(np.int64), k - 1)
    j = np.minimum(np.floor(v * k).astype(np.int64), k - 1)
    t = u * k - i
    s = v * k - j
    return (
        (1 - t) * (1 - s) * grid[i, j]
        + t * (1 - s) * grid[i + 1, j]
        + (1 - t) * s * grid[i, j + 1]
        + t * s * grid[i + 1, j + 1]
    )


def checkerboard_density(c: DiscreteCopula, u: Number, v: Number):
    """``k^2 * V_C(cell)`` for the half-open cell containing ``(u, v)``.

    Cells are ``[i/k, (i+1)/k) x [j/k, (j+1)/k)``; the last row/column is
    closed at 1, so points on an interior edge belong to the higher-index cell.
    """
    require_valid(c)
    k = c.k
    lc = local_coords(k, u, v)
    i, j = min(lc.i, k - 1), min(lc.j, k - 1)
    vol = c.cell_volumes()[i, j]
    if c.is_exact:
        return Fraction(int(vol) * k * k, c.denominator)
    return float(vol) * k * k


def surface_lattice(c: DiscreteCopula, n: int):
    """``(u, v, value)`` arrays on the ``n x n`` lattice ``{0, 1/(n-1), ..., 1}^2``."""
    if n < 2:
        raise DomainError("lattice needs n >= 2")
    axis = np.linspace(0.0, 1.0, n)
    uu, vv = np.meshgrid(axis, axis, indexing="ij")
    return uu.ravel(), vv.ravel(), checkerboard_eval_array(c, uu.ravel(), vv.ravel())
