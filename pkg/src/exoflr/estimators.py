"""Spectral cut-off slope estimators, residuals and the error-variance estimate."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import (
    DegenerateCrossSpectrum,
    DegenerateSpectrum,
    InvalidWeight,
    NoSelectedFrequencies,
    TruncationMismatch,
)
from .fourier import FourierCoeffs, analyze_rows
from .spectra import Dataset, SpectralEstimates, gamma_k

__all__ = [
    "SlopeKind",
    "SlopeEstimate",
    "RegularizationWeights",
    "spectral_cutoff",
    "spectral_cutoff_iv",
    "tikhonov",
    "fit_exogenous",
    "fit_iv",
    "fit_weighted",
    "fitted_values",
    "residuals",
    "sigma_hat_sq",
]

# Imaginary residue tolerated when projecting <beta, X_i> onto the reals.
IMAG_TOL = 1e-8


class SlopeKind(str, enum.Enum):
    EXOGENOUS = "exogenous"
    IV = "iv"
    WEIGHTED = "weighted"


@dataclass(frozen=True)
class SlopeEstimate:
    coeffs: FourierCoeffs
    kind: SlopeKind
    spectra_fingerprint: str

    @property
    def K(self) -> int:
        return self.coeffs.K


@dataclass(frozen=True)
class RegularizationWeights:
    """A weight ``f(x_k, lambda_k, k)`` multiplying the raw per-frequency numerator.

    The callable receives numpy arrays over ``k = -K..K`` and must return an
    array of the same length.
    """

    weight: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    name: str = "custom"

    def __call__(self, x, lam, k) -> np.ndarray:
        return np.asarray(self.weight(x, lam, k))


def _cutoff_indicator(lam, k, alpha, nu):
    K = int(np.max(np.abs(k)))
    return lam >= alpha * gamma_k(K)[np.asarray(k) + K] ** nu


def spectral_cutoff(alpha: float, nu: float = 0.0) -> RegularizationWeights:
    """``1/x_k * I{lambda_k >= alpha gamma_k^nu}``; reproduces :func:`fit_exogenous`."""

    def f(x, lam, k):
        ind = _cutoff_indicator(lam, k, alpha, nu)
        out = np.zeros_like(x, dtype=float)
        out[ind] = 1.0 / x[ind]
        return out

    return RegularizationWeights(f, "spectral-cutoff")


def spectral_cutoff_iv(alpha: float, nu: float = 0.0) -> RegularizationWeights:
    """``1/lambda_k * I{lambda_k >= alpha gamma_k^nu}``; reproduces :func:`fit_iv`."""

    def f(x, lam, k):
        ind = _cutoff_indicator(lam, k, alpha, nu)
        out = np.zeros_like(lam, dtype=float)
        out[ind] = 1.0 / lam[ind]
        return out

    return RegularizationWeights(f, "spectral-cutoff-iv")


def tikhonov(alpha: float) -> RegularizationWeights:
    return RegularizationWeights(lambda x, lam, k: x / (x**2 + alpha), "tikhonov")


def _require_selection(est: SpectralEstimates) -> np.ndarray:
    mask = est.selected_mask
    if not mask.any():
        raise NoSelectedFrequencies(f"no frequency passes the cut-off at alpha={est.alpha}")
    return mask


def exogenous_numerator(est: SpectralEstimates, Y: np.ndarray) -> np.ndarray:
    """``(1/n) sum_i <X_i, phi_k> Y_i``; ``Y`` may be ``(n,)`` or ``(B, n)``."""
    return np.asarray(Y, dtype=float) @ est.X_coef / est.n


def iv_numerator(est: SpectralEstimates, Y: np.ndarray) -> np.ndarray:
    """``(1/n) sum_i <W_i, phi_k> Y_i``; ``Y`` may be ``(n,)`` or ``(B, n)``."""
    return np.asarray(Y, dtype=float) @ est.W_coef / est.n


def exogenous_coefficients(est: SpectralEstimates, Y: np.ndarray) -> np.ndarray:
    mask = _require_selection(est)
    if np.any(est.x_hat[mask] == 0):
        raise DegenerateSpectrum("x_hat vanishes on a selected frequency")
    num = exogenous_numerator(est, Y)
    out = np.zeros_like(num)
    out[..., mask] = num[..., mask] / est.x_hat[mask]
    return out


def iv_coefficients(est: SpectralEstimates, Y: np.ndarray) -> np.ndarray:
    mask = _require_selection(est)
    if np.any(est.c_hat[mask] == 0):
        raise DegenerateCrossSpectrum("c_hat vanishes on a selected frequency")
    num = iv_numerator(est, Y)
    out = np.zeros_like(num)
    out[..., mask] = num[..., mask] / est.c_hat[mask]
    return out


def _check_data(data: Dataset, est: SpectralEstimates) -> None:
    if data.n != est.n:
        raise TruncationMismatch(f"data has {data.n} observations, spectra were built from {est.n}")


def fit_exogenous(data: Dataset, est: SpectralEstimates) -> SlopeEstimate:
    """Cut-off estimator that is consistent only when X is exogenous."""
    _check_data(data, est)
    c = exogenous_coefficients(est, data.Y)
    return SlopeEstimate(FourierCoeffs(c), SlopeKind.EXOGENOUS, est.fingerprint)


def fit_iv(data: Dataset, est: SpectralEstimates) -> SlopeEstimate:
    """IV estimator; shares the selected set with :func:`fit_exogenous`."""
    _check_data(data, est)
    c = iv_coefficients(est, data.Y)
    return SlopeEstimate(FourierCoeffs(c), SlopeKind.IV, est.fingerprint)


def optimal_instrument_numerator(est: SpectralEstimates, Y: np.ndarray) -> np.ndarray:
    """``g_hat_k = (1/n) sum_i Y_i <W~_{n,i}, phi_k>`` with the estimated optimal instrument."""
    keep = est.w_hat >= est.alpha
    factor = np.zeros_like(est.c_hat)
    factor[keep] = np.conj(est.c_hat[keep]) / est.w_hat[keep]
    return factor * iv_numerator(est, Y)


def fit_weighted(
    data: Dataset,
    est: SpectralEstimates,
    w: RegularizationWeights,
    target: SlopeKind = SlopeKind.EXOGENOUS,
) -> SlopeEstimate:
    """General regularization: raw numerator times ``w(x_hat_k, lambda_hat_k, k)``.

    For ``target=EXOGENOUS`` the numerator is ``(1/n) sum <X_i, phi_k> Y_i``;
    for ``target=IV`` it is ``g_hat_k``, the projection on the estimated
    optimal instrument, so ``1/lambda_k`` cut-off weights give back
    :func:`fit_iv`.
    """
    _check_data(data, est)
    target = SlopeKind(target)
    if target is SlopeKind.EXOGENOUS:
        num = exogenous_numerator(est, data.Y)
    elif target is SlopeKind.IV:
        num = optimal_instrument_numerator(est, data.Y)
    else:
        raise ValueError(f"target must be exogenous or iv, got {target}")
    weights = w(est.x_hat, est.lambda_hat, est.frequencies)
    if weights.shape != num.shape:
        raise InvalidWeight(f"weight returned shape {weights.shape}, expected {num.shape}")
    if not np.all(np.isfinite(weights)):
        bad = est.frequencies[~np.isfinite(weights)]
        raise InvalidWeight(f"non-finite weight at frequencies {bad.tolist()}")
    return SlopeEstimate(FourierCoeffs(num * weights), SlopeKind.WEIGHTED, est.fingerprint)


def project_real(z: np.ndarray) -> np.ndarray:
    tol = IMAG_TOL * (1.0 + np.abs(z.real))
    if np.any(np.abs(z.imag) > tol):
        raise ArithmeticError(
            f"imaginary residue {np.max(np.abs(z.imag)):.3e} in a real inner product"
        )
    return z.real


def fitted_from_coef(coef: np.ndarray, X_coef: np.ndarray) -> np.ndarray:
    """``Re <beta, X_i>`` for coefficient array(s) ``coef`` of shape ``(2K+1,)`` or ``(B, 2K+1)``."""
    return project_real(coef @ np.conj(X_coef).T)


def fitted_values(data: Dataset, slope: SlopeEstimate, X_coef: np.ndarray | None = None) -> np.ndarray:
    if X_coef is None:
        X_coef = analyze_rows(data.X, slope.K)
    elif X_coef.shape[1] != slope.coeffs.coeffs.size:
        raise TruncationMismatch("slope and curve coefficients use different K")
    return fitted_from_coef(slope.coeffs.coeffs, X_coef)


def residuals(data: Dataset, slope: SlopeEstimate, X_coef: np.ndarray | None = None) -> np.ndarray:
    """``Y_i - <beta_hat, X_i>`` with the inner product evaluated by Parseval."""
    return data.Y - fitted_values(data, slope, X_coef)


def sigma_hat_sq(data: Dataset, slope_iv: SlopeEstimate, X_coef: np.ndarray | None = None) -> float:
    """Mean squared residual of the IV fit."""
    if slope_iv.kind is not SlopeKind.IV:
        raise ValueError(f"the error variance is estimated from the IV fit, got {slope_iv.kind.value}")
    r = residuals(data, slope_iv, X_coef)
    return float(np.mean(r**2))
