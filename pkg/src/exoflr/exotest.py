"""Hausman-type statistic and its plug-in asymptotic test.

The statistic is the empirical squared distance between the IV and the
exogenous slope estimate measured along the design,

    T_n = (1/n) sum_i |<beta_IV - beta, X_i>|^2,

and under exogeneity ``n (T_n - B_n - R_n) / (t_n sqrt(V_n))`` is
asymptotically standard normal.  The test is one-sided (upper tail).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import DegenerateStudentization, InconsistentEstimates, NoSelectedFrequencies
from .estimators import fit_exogenous, fit_iv, fitted_from_coef, sigma_hat_sq, project_real
from .fourier import analyze_rows
from .spectra import Dataset, SpectralEstimates, estimate

__all__ = [
    "TestOutcome",
    "Plugins",
    "normal_cdf",
    "normal_quantile",
    "statistic",
    "statistic_quadratic_form",
    "plugins",
    "standardize",
    "asymptotic_test",
]

# The ratio terms are scale free; below this t_hat is rounding noise of W = X.
T_HAT_TOL = 1e-10


def normal_cdf(z: float) -> float:
    return float(ndtr(z))


def normal_quantile(q: float) -> float:
    return float(ndtri(q))


@dataclass(frozen=True)
class Plugins:
    t_hat_n: float
    B_hat_n: float
    R_hat_n: float
    V_hat_n: float


@dataclass(frozen=True)
class TestOutcome:
    T_n: float
    t_hat_n: float
    B_hat_n: float
    R_hat_n: float
    V_hat_n: float
    sigma_sq: float
    z: float
    p_value: float
    reject: bool
    gamma: float
    n_selected: int

    __test__ = False  # not a pytest class


def _check_pair(beta_iv, beta_ex) -> None:
    if beta_iv.spectra_fingerprint != beta_ex.spectra_fingerprint:
        raise InconsistentEstimates("slope estimates come from different spectral estimates")
    if beta_iv.K != beta_ex.K:
        raise InconsistentEstimates(f"truncation orders differ: {beta_iv.K} vs {beta_ex.K}")


def statistic_from_coef(delta: np.ndarray, X_coef: np.ndarray) -> np.ndarray:
    """Per-sample form of ``T_n`` for one or a stack of coefficient differences."""
    proj = fitted_from_coef(delta, X_coef)
    return np.mean(proj**2, axis=-1)


def statistic(data: Dataset, beta_iv, beta_ex, X_coef: np.ndarray | None = None) -> float:
    _check_pair(beta_iv, beta_ex)
    if X_coef is None:
        X_coef = analyze_rows(data.X, beta_iv.K)
    delta = beta_iv.coeffs.coeffs - beta_ex.coeffs.coeffs
    return float(statistic_from_coef(delta, X_coef))


def statistic_quadratic_form(delta: np.ndarray, X_coef: np.ndarray) -> float:
    """``<delta, Gamma_{X,n} delta>`` using the full empirical covariance matrix.

    ``M[k, l] = (1/n) sum_i <X_i, phi_k> conj(<X_i, phi_l>)`` in coefficient
    space; the operator acts as ``(Gamma f)_k = sum_l M[k, l] f_l``.
    """
    n = X_coef.shape[0]
    M = X_coef.T @ np.conj(X_coef) / n
    # <delta, Gamma delta> = sum_k delta_k conj((Gamma delta)_k)
    val = np.sum(delta * np.conj(M @ delta))
    return float(project_real(np.asarray(val)))


def plugins(data: Dataset, est: SpectralEstimates, beta_iv, sigma_sq: float) -> Plugins:
    """Plug-in estimates of the studentization, bias, centering and variance."""
    mask = est.selected_mask
    if not mask.any():
        raise NoSelectedFrequencies(f"no frequency passes the cut-off at alpha={est.alpha}")
    x = est.x_hat[mask]
    w = est.w_hat[mask]
    c = est.c_hat[mask]
    ratio = x * w / np.abs(c) ** 2 - 1.0
    t_hat = float(np.sqrt(np.sum(ratio**2)))
    if t_hat <= T_HAT_TOL:
        raise DegenerateStudentization(
            "x_hat*w_hat == |c_hat|^2 on every selected frequency; W carries no information beyond X"
        )

    fitted = fitted_from_coef(beta_iv.coeffs.coeffs, est.X_coef)
    scale = sigma_sq + float(np.mean(fitted**2))
    n = est.n
    R_hat = scale * float(np.sum(ratio)) / n
    V_hat = scale**2

    proj_mean = float(project_real(np.asarray(np.sum(beta_iv.coeffs.coeffs * np.conj(est.mu_X.coeffs)))))
    mu_w = est.mu_W.coeffs[mask]
    mu_x = est.mu_X.coeffs[mask]
    bias_sum = float(np.sum(np.abs(mu_w / c - mu_x / x) ** 2 * x))
    B_hat = n / (2.0 * t_hat) * proj_mean**2 * bias_sum
    return Plugins(t_hat, B_hat, R_hat, V_hat)


def standardize(T_n: float, n: int, pl: Plugins) -> float:
    return n * (T_n - pl.B_hat_n - pl.R_hat_n) / (pl.t_hat_n * np.sqrt(pl.V_hat_n))


def decide(z: float, gamma: float) -> tuple[float, bool]:
    """One-sided upper-tail decision; ``z`` equal to the critical value does not reject."""
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    p_value = float(ndtr(-z))
    return p_value, bool(z > normal_quantile(1.0 - gamma))


def asymptotic_test(
    data: Dataset,
    alpha: float,
    nu: float = 0.0,
    gamma: float = 0.05,
    K: int | None = None,
    est: SpectralEstimates | None = None,
) -> TestOutcome:
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    if est is None:
        est = estimate(data, K=K, alpha=alpha, nu=nu)
    beta_iv = fit_iv(data, est)
    beta_ex = fit_exogenous(data, est)
    s2 = sigma_hat_sq(data, beta_iv, est.X_coef)
    T_n = statistic(data, beta_iv, beta_ex, est.X_coef)
    pl = plugins(data, est, beta_iv, s2)
    z = float(standardize(T_n, data.n, pl))
    p_value, reject = decide(z, gamma)
    return TestOutcome(
        T_n=T_n,
        t_hat_n=pl.t_hat_n,
        B_hat_n=pl.B_hat_n,
        R_hat_n=pl.R_hat_n,
        V_hat_n=pl.V_hat_n,
        sigma_sq=s2,
        z=z,
        p_value=p_value,
        reject=reject,
        gamma=gamma,
        n_selected=int(est.selected_mask.sum()),
    )
