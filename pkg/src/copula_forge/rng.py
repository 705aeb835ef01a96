"""Seeded random streams and the low-level variate generators.

The generator is numpy's PCG64 (period 2**128), seeded through a
``SeedSequence`` built from ``(seed, stream)``. Independent streams for
parallel work come from distinct ``stream`` indices, never from shared state.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DomainError

_U64 = 2**64
CHUNK = 100_000


class SeededRng:
    """Deterministic stream identified by a 64-bit seed and a stream index."""

    __slots__ = ("seed", "stream", "generator")

    def __init__(self, seed: int = 0, stream: int = 0):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < _U64:
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
        if not isinstance(stream, (int, np.integer)) or stream < 0:
            raise DomainError(f"stream index must be a nonnegative integer, got {stream!r}")
        self.seed = int(seed)
        self.stream = int(stream)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def split(self, stream: int) -> "SeededRng":
        """Fresh stream for the same seed; does not consume this stream."""
        return SeededRng(self.seed, stream)

    def __repr__(self):
        return f"SeededRng(seed={self.seed}, stream={self.stream})"


def as_rng(rng) -> SeededRng:
    if rng is None:
        return SeededRng(0)
    if isinstance(rng, SeededRng):
        return rng
    if isinstance(rng, (int, np.integer)):
        return SeededRng(int(rng))
    raise DomainError(f"expected a SeededRng or an integer seed, got {rng!r}")


def standard_gamma(gen: np.random.Generator, shape: float, size) -> np.ndarray:
    """Gamma(shape, 1) variates.

    numpy's generator uses Marsaglia-Tsang squeeze rejection for shape >= 1;
    for shape < 1 the usual boost ``G(shape+1) * U**(1/shape)`` is applied.
    """
    if shape >= 1.0:
        return gen.standard_gamma(shape, size=size)
    g = gen.standard_gamma(shape + 1.0, size=size)
    u = gen.random(size=size)
    return g * u ** (1.0 / shape)


def dirichlet_rows(gen: np.random.Generator, params: Sequence[float], n: int) -> np.ndarray:
    """``n`` draws from Dir(params) as an ``(n, m)`` array (normalized Gamma variates)."""
    params = [float(a) for a in params]
    if not params or any(not a > 0 for a in params):
        raise DomainError("Dirichlet parameters must all be positive")
    cols = [standard_gamma(gen, a, n) for a in params]
    g = np.stack(cols, axis=1)
    return g / g.sum(axis=1, keepdims=True)


def uniform_simplex_rows(gen: np.random.Generator, m: int, n: int) -> np.ndarray:
    """``n`` uniform points on the (m-1)-simplex via normalized exponentials."""
    if m < 1:
        raise DomainError("simplex dimension needs m >= 1")
    e = gen.standard_exponential(size=(n, m))
    return e / e.sum(axis=1, keepdims=True)


def permutation_rows(gen: np.random.Generator, k: int, n: int) -> np.ndarray:
    """``n`` uniform permutations of ``0..k-1`` (one Fisher-Yates shuffle per row)."""
    base = np.broadcast_to(np.arange(k, dtype=np.int64), (n, k))
    return gen.permuted(base, axis=1)
