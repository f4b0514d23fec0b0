"""Residual-based bootstrap tests of exogeneity.

Bootstrap responses are ``Y*_i = <beta_IV, X_i> + U*_i`` on the fixed design
``(X_i, W_i)``.  Because ``U*`` is built from the residual vector and an
independent random stream only, the bootstrap world is exogenous by
construction and the replicate statistics ``T_n*`` approximate the null
distribution of ``T_n`` under both hypotheses.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NotAMultiplierScheme, TooFewReplicates, TooFewSamples
from .estimators import (
    SlopeEstimate,
    exogenous_coefficients,
    fit_exogenous,
    fit_iv,
    fitted_from_coef,
    iv_coefficients,
)
from .exotest import statistic, statistic_from_coef
from .rng import substream
from .spectra import Dataset, SpectralEstimates, estimate

__all__ = [
    "BootstrapScheme",
    "BootstrapOutcome",
    "MAMMEN_VALUES",
    "MAMMEN_PROBS",
    "sample_multiplier",
    "gen_errors",
    "replicate",
    "empirical_quantile",
    "bootstrap_test",
]

_SQRT5 = math.sqrt(5.0)
# golden-section two-point law
MAMMEN_VALUES = (-(_SQRT5 - 1.0) / 2.0, (_SQRT5 + 1.0) / 2.0)
MAMMEN_PROBS = ((_SQRT5 + 1.0) / (2.0 * _SQRT5), (_SQRT5 - 1.0) / (2.0 * _SQRT5))

MIN_REPLICATES = 20


class BootstrapScheme(str, enum.Enum):
    EFRON = "efron"
    MAMMEN = "mammen"
    RADEMACHER = "rademacher"
    NORMAL = "normal"

    @property
    def is_wild(self) -> bool:
        return self is not BootstrapScheme.EFRON

    @classmethod
    def parse(cls, name: "str | BootstrapScheme") -> "BootstrapScheme":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        aliases = {"wildmammen": "mammen", "wildrademacher": "rademacher", "wildnormal": "normal"}
        key = aliases.get(key.replace("-", "").replace("_", ""), key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown bootstrap scheme {name!r}") from None


def sample_multiplier(scheme, rng: np.random.Generator, size=None):
    """Draw wild-bootstrap multipliers with mean 0 and variance 1."""
    scheme = BootstrapScheme.parse(scheme)
    if scheme is BootstrapScheme.MAMMEN:
        u = rng.random(size)
        return np.where(u < MAMMEN_PROBS[0], MAMMEN_VALUES[0], MAMMEN_VALUES[1])
    if scheme is BootstrapScheme.RADEMACHER:
        u = rng.random(size)
        return np.where(u < 0.5, 1.0, -1.0)
    if scheme is BootstrapScheme.NORMAL:
        return rng.standard_normal(size)
    raise NotAMultiplierScheme("Efron resampling does not use multipliers")


def gen_errors(resid, scheme, rng: np.random.Generator) -> np.ndarray:
    """Bootstrap errors from the residual vector alone.

    Efron draws with replacement from the mean-centered residuals; the wild
    schemes multiply each residual by an independent multiplier.
    """
    r = np.asarray(resid, dtype=float).reshape(-1)
    if r.size < 1:
        raise TooFewSamples("need at least one residual")
    scheme = BootstrapScheme.parse(scheme)
    if scheme is BootstrapScheme.EFRON:
        centered = r - r.mean()
        return centered[rng.integers(0, r.size, size=r.size)]
    return sample_multiplier(scheme, rng, r.size) * r


def replicate(
    data: Dataset, est: SpectralEstimates, beta_iv: SlopeEstimate, errors_star
) -> float:
    """One bootstrap statistic ``T_n*`` from given bootstrap errors.

    The spectral estimates depend on ``(X, W)`` only and are reused as is.
    """
    fitted = fitted_from_coef(beta_iv.coeffs.coeffs, est.X_coef)
    boot = data.with_response(fitted + np.asarray(errors_star, dtype=float))
    return statistic(boot, fit_iv(boot, est), fit_exogenous(boot, est), est.X_coef)


def _replicate_batch(est: SpectralEstimates, fitted: np.ndarray, errors: np.ndarray) -> np.ndarray:
    """``replicate`` for a ``(B, n)`` stack of error vectors."""
    Ystar = fitted[None, :] + errors
    delta = iv_coefficients(est, Ystar) - exogenous_coefficients(est, Ystar)
    return statistic_from_coef(delta, est.X_coef)


def order_index(B: int, gamma: float) -> int:
    """0-based position of the order statistic ``T*_(floor(B (1 - gamma)))``."""
    m = math.floor(B * (1.0 - gamma) + 1e-9)
    return min(max(m - 1, 0), B - 1)


def empirical_quantile(replicates, gamma: float) -> float:
    reps = np.sort(np.asarray(replicates, dtype=float))
    return float(reps[order_index(reps.size, gamma)])


@dataclass(frozen=True)
class BootstrapOutcome:
    T_n: float
    replicates: np.ndarray = field(repr=False)
    q_star: float
    p_value: float
    reject: bool
    B: int
    gamma: float
    seed: int
    scheme: BootstrapScheme
    sigma_sq: float
    n_selected: int


def bootstrap_test(
    data: Dataset,
    alpha: float,
    nu: float = 0.0,
    scheme="rademacher",
    B: int = 500,
    gamma: float = 0.05,
    seed: int = 0,
    K: int | None = None,
    est: SpectralEstimates | None = None,
) -> BootstrapOutcome:
    """Reject exogeneity when ``T_n`` exceeds the bootstrap ``(1 - gamma)``-quantile.

    Replicate ``b`` draws its errors from the substream ``(seed, b)``, so the
    outcome is a pure function of the inputs.
    """
    if B < MIN_REPLICATES:
        raise TooFewReplicates(f"B={B} < {MIN_REPLICATES}")
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    scheme = BootstrapScheme.parse(scheme)
    if est is None:
        est = estimate(data, K=K, alpha=alpha, nu=nu)
    beta_iv = fit_iv(data, est)
    beta_ex = fit_exogenous(data, est)
    T_n = statistic(data, beta_iv, beta_ex, est.X_coef)
    fitted = fitted_from_coef(beta_iv.coeffs.coeffs, est.X_coef)
    resid = data.Y - fitted

    errors = np.empty((B, data.n))
    for b in range(B):
        errors[b] = gen_errors(resid, scheme, substream(seed, b))
    reps = _replicate_batch(est, fitted, errors)
    reps.flags.writeable = False

    q_star = empirical_quantile(reps, gamma)
    p_value = (1 + int(np.sum(reps >= T_n))) / (B + 1)
    return BootstrapOutcome(
        T_n=T_n,
        replicates=reps,
        q_star=q_star,
        p_value=p_value,
        reject=bool(T_n > q_star),
        B=B,
        gamma=gamma,
        seed=seed,
        scheme=scheme,
        sigma_sq=float(np.mean(resid**2)),
        n_selected=int(est.selected_mask.sum()),
    )
