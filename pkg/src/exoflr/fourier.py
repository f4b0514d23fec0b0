"""Periodic Fourier analysis of curves sampled on an equispaced grid of [0, 1).

A curve of grid order ``p`` is stored as its ``p + 1`` samples at
``t_l = l / (p + 1)``.  Coefficients use the convention
``<f, phi_k> = int f(t) exp(-2 pi i k t) dt`` discretized with the uniform
weight ``1 / (p + 1)``, so inner products are ``<a, b> = sum_k a_k conj(b_k)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import GridTooCoarse, InvalidCurve, TruncationMismatch, TruncationTooLarge

__all__ = [
    "SampledCurve",
    "FourierCoeffs",
    "grid",
    "analyze",
    "analyze_rows",
    "synthesize",
    "inner_product",
]


def grid(p: int) -> np.ndarray:
    """Evaluation points ``l / (p + 1)`` for ``l = 0..p``."""
    return np.arange(p + 1) / (p + 1)


@dataclass(frozen=True)
class SampledCurve:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise InvalidCurve(f"a curve needs at least 2 samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InvalidCurve("curve contains non-finite samples")
        v = v.copy()
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    @property
    def p(self) -> int:
        return self.values.size - 1

    @classmethod
    def from_function(cls, f, p: int) -> "SampledCurve":
        return cls(np.array([f(t) for t in grid(p)], dtype=float))


@dataclass(frozen=True)
class FourierCoeffs:
    """Coefficients for frequencies ``-K..K`` stored in that order."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size % 2 != 1:
            raise ValueError(f"expected an odd-length 1-d array, got shape {c.shape}")
        c = c.copy()
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def K(self) -> int:
        return (self.coeffs.size - 1) // 2

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    def __getitem__(self, k: int) -> complex:
        if abs(k) > self.K:
            return 0j
        return complex(self.coeffs[k + self.K])

    def as_dict(self) -> dict[int, complex]:
        return {int(k): complex(c) for k, c in zip(self.frequencies, self.coeffs)}

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, complex], K: int | None = None) -> "FourierCoeffs":
        if K is None:
            K = max((abs(k) for k in mapping), default=0)
        c = np.zeros(2 * K + 1, dtype=complex)
        for k, v in mapping.items():
            if abs(k) > K:
                raise TruncationMismatch(f"frequency {k} exceeds K={K}")
            c[k + K] = v
        return cls(c)

    @classmethod
    def zeros(cls, K: int) -> "FourierCoeffs":
        return cls(np.zeros(2 * K + 1, dtype=complex))

    def hermitian_defect(self) -> float:
        """``max_k |c(-k) - conj(c(k))|``; zero for coefficients of a real curve."""
        return float(np.max(np.abs(self.coeffs[::-1] - np.conj(self.coeffs))))


def _check_truncation(p: int, K: int) -> None:
    if K < 0:
        raise TruncationTooLarge(f"truncation order must be non-negative, got {K}")
    if K > p // 2:
        raise TruncationTooLarge(f"K={K} exceeds the Nyquist bound floor(p/2)={p // 2}")


def analyze_rows(values: np.ndarray, K: int, method: str = "fft") -> np.ndarray:
    """Coefficients of every row of an ``(n, p + 1)`` sample matrix.

    Returns an ``(n, 2K + 1)`` complex array whose column ``j`` holds
    frequency ``j - K``.  ``method="direct"`` evaluates the defining sum
    explicitly and serves as a reference for the FFT path.
    """
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = v[None, :]
    if v.shape[1] < 2:
        raise InvalidCurve("curves need at least 2 samples")
    if not np.all(np.isfinite(v)):
        raise InvalidCurve("curve contains non-finite samples")
    m = v.shape[1]
    p = m - 1
    _check_truncation(p, K)
    ks = np.arange(-K, K + 1)
    if method == "fft":
        spec = np.fft.fft(v, axis=1) / m
        return spec[:, ks % m]
    if method == "direct":
        ell = np.arange(m)
        basis = np.exp(-2j * np.pi * np.outer(ell, ks) / m)
        return v @ basis / m
    raise ValueError(f"unknown method {method!r}")


def analyze(curve: SampledCurve, K: int, method: str = "fft") -> FourierCoeffs:
    if not isinstance(curve, SampledCurve):
        curve = SampledCurve(curve)
    return FourierCoeffs(analyze_rows(curve.values, K, method=method)[0])


def synthesize(coeffs: FourierCoeffs, p: int) -> SampledCurve:
    """Evaluate ``Re sum_k c_k exp(2 pi i k t)`` on the grid of order ``p``."""
    K = coeffs.K
    if p < 2 * K:
        raise GridTooCoarse(f"grid order p={p} cannot carry K={K} (need p >= 2K)")
    m = p + 1
    ks = coeffs.frequencies
    basis = np.exp(2j * np.pi * np.outer(np.arange(m), ks) / m)
    return SampledCurve((basis @ coeffs.coeffs).real)


def inner_product(a: FourierCoeffs, b: FourierCoeffs) -> complex:
    """Parseval form of ``int a(t) conj(b(t)) dt``."""
    if a.K != b.K:
        raise TruncationMismatch(f"truncation orders differ: {a.K} vs {b.K}")
    return complex(np.sum(a.coeffs * np.conj(b.coeffs)))


def as_curves(rows: Sequence[SampledCurve] | np.ndarray) -> np.ndarray:
    """Stack curves (or pass a 2-d array through) into an ``(n, p + 1)`` array."""
    if isinstance(rows, np.ndarray):
        return np.atleast_2d(np.asarray(rows, dtype=float))
    return np.vstack([c.values if isinstance(c, SampledCurve) else np.asarray(c, float) for c in rows])
