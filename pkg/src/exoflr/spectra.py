"""Empirical eigenvalues of the (cross-)covariance operators in the Fourier basis.

Under joint second-order stationarity of ``(X, W)`` all three operators are
diagonal in the Fourier basis, so each is summarized by one number per
frequency.  The moments below are uncentered; sample means enter the test
only through the bias correction in :mod:`exoflr.exotest`.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidCurve, InvalidRegularization, TooFewSamples, TruncationTooLarge
from .fourier import FourierCoeffs, SampledCurve, analyze_rows, as_curves

__all__ = ["Dataset", "SpectralEstimates", "gamma_k", "estimate", "selection_set"]


@dataclass(frozen=True)
class Dataset:
    """``n`` observations ``(X_i, W_i, Y_i)``; curves are rows of ``(n, p + 1)`` arrays."""

    X: np.ndarray
    W: np.ndarray
    Y: np.ndarray

    def __post_init__(self):
        X = as_curves(self.X)
        W = as_curves(self.W)
        Y = np.asarray(self.Y, dtype=float).reshape(-1)
        if X.shape != W.shape:
            raise InvalidCurve(f"X and W grids differ: {X.shape} vs {W.shape}")
        if X.shape[0] != Y.size:
            raise InvalidCurve(f"{X.shape[0]} curves but {Y.size} responses")
        if X.shape[1] < 2:
            raise InvalidCurve("curves need at least 2 samples")
        if X.shape[0] < 2:
            raise TooFewSamples(f"need n >= 2 observations, got {X.shape[0]}")
        for name, a in (("X", X), ("W", W), ("Y", Y)):
            if not np.all(np.isfinite(a)):
                raise InvalidCurve(f"{name} contains non-finite values")
        for name, a in (("X", X), ("W", W), ("Y", Y)):
            a = a.copy()
            a.flags.writeable = False
            object.__setattr__(self, name, a)

    @property
    def n(self) -> int:
        return self.Y.size

    @property
    def p(self) -> int:
        return self.X.shape[1] - 1

    @classmethod
    def from_curves(
        cls, X: Sequence[SampledCurve], W: Sequence[SampledCurve], Y: Sequence[float]
    ) -> "Dataset":
        return cls(as_curves(X), as_curves(W), np.asarray(Y, dtype=float))

    def with_response(self, Y: np.ndarray) -> "Dataset":
        return Dataset(self.X, self.W, Y)


def gamma_k(K: int) -> np.ndarray:
    """Sobolev weights ``1 + |2 pi k|`` for ``k = -K..K``."""
    return 1.0 + np.abs(2.0 * np.pi * np.arange(-K, K + 1))


@dataclass(frozen=True, eq=False)
class SpectralEstimates:
    """Per-frequency estimates for ``k = -K..K`` (array index ``k + K``).

    ``X_coef`` and ``W_coef`` keep the per-sample coefficients
    ``<X_i, phi_k>`` and ``<W_i, phi_k>`` so that estimators and the
    bootstrap never have to transform the curves again.
    """

    K: int
    alpha: float
    nu_sobolev: float
    x_hat: np.ndarray
    w_hat: np.ndarray
    c_hat: np.ndarray
    lambda_hat: np.ndarray
    mu_X: FourierCoeffs
    mu_W: FourierCoeffs
    X_coef: np.ndarray = field(repr=False)
    W_coef: np.ndarray = field(repr=False)
    selected_mask: np.ndarray = field(repr=False)
    fingerprint: str = ""

    @property
    def frequencies(self) -> np.ndarray:
        return np.arange(-self.K, self.K + 1)

    @property
    def selected(self) -> frozenset[int]:
        return frozenset(int(k) for k in self.frequencies[self.selected_mask])

    @property
    def n(self) -> int:
        return self.X_coef.shape[0]


def _fingerprint(*arrays: np.ndarray, params: tuple) -> str:
    h = hashlib.blake2b(digest_size=12)
    h.update(repr(params).encode())
    for a in arrays:
        h.update(np.ascontiguousarray(a).tobytes())
    return h.hexdigest()


def _threshold_mask(lambda_hat: np.ndarray, alpha: float, nu: float, K: int) -> np.ndarray:
    return lambda_hat >= alpha * gamma_k(K) ** nu


def estimate(
    data: Dataset,
    K: int | None = None,
    alpha: float = 1e-4,
    nu: float = 0.0,
    center: bool = False,
) -> SpectralEstimates:
    """Estimate ``x_k, w_k, c_k, lambda_k`` and the selected frequency set.

    ``K`` defaults to the Nyquist bound ``floor(p / 2)``.  With
    ``center=True`` the curves are demeaned before the second moments are
    formed; the default follows the uncentered formulas.
    """
    if data.n < 2:
        raise TooFewSamples(f"need n >= 2 observations, got {data.n}")
    if not (alpha > 0 and np.isfinite(alpha)):
        raise InvalidRegularization(f"alpha must be positive and finite, got {alpha}")
    if nu < 0:
        raise InvalidRegularization(f"Sobolev exponent must be >= 0, got {nu}")
    if K is None:
        K = data.p // 2
    if K > data.p // 2:
        raise TruncationTooLarge(f"K={K} exceeds floor(p/2)={data.p // 2}")

    Xc = analyze_rows(data.X, K)
    Wc = analyze_rows(data.W, K)
    mu_X = Xc.mean(axis=0)
    mu_W = Wc.mean(axis=0)
    Xm, Wm = (Xc - mu_X, Wc - mu_W) if center else (Xc, Wc)

    x_hat = np.mean(np.abs(Xm) ** 2, axis=0)
    w_hat = np.mean(np.abs(Wm) ** 2, axis=0)
    c_hat = np.mean(np.conj(Xm) * Wm, axis=0)
    keep = w_hat >= alpha
    lambda_hat = np.zeros_like(x_hat)
    lambda_hat[keep] = np.abs(c_hat[keep]) ** 2 / w_hat[keep]
    mask = _threshold_mask(lambda_hat, alpha, nu, K)

    for a in (Xc, Wc, x_hat, w_hat, c_hat, lambda_hat, mask):
        a.flags.writeable = False
    return SpectralEstimates(
        K=K,
        alpha=float(alpha),
        nu_sobolev=float(nu),
        x_hat=x_hat,
        w_hat=w_hat,
        c_hat=c_hat,
        lambda_hat=lambda_hat,
        mu_X=FourierCoeffs(mu_X),
        mu_W=FourierCoeffs(mu_W),
        X_coef=Xc,
        W_coef=Wc,
        selected_mask=mask,
        fingerprint=_fingerprint(Xc, Wc, params=(K, float(alpha), float(nu), center)),
    )


def selection_set(est: SpectralEstimates) -> frozenset[int]:
    """Frequencies with ``lambda_hat_k >= alpha * gamma_k ** nu``.

    ``lambda_hat`` is already zero wherever ``w_hat_k < alpha``, so this one
    comparison carries both indicators of the IV estimator.
    """
    mask = _threshold_mask(est.lambda_hat, est.alpha, est.nu_sobolev, est.K)
    return frozenset(int(k) for k in est.frequencies[mask])
