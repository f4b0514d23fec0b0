"""Simulation design with controllable endogeneity and instrument strength.

Per observation::

    X(t) = (t + 1/2) Z1
    W(t) = (t + 1/2) Z2 + H,        H ~ U(-1/2, 1/2)
    Y    = (1/(p+1)) sum_l X(t_l) beta(t_l) + sigma U

with ``(Z1, Z2, U)`` trivariate normal, ``corr(Z1, Z2) = nu_instr`` and
``corr(Z1, U) = rho``.  ``rho = 0`` is the exogenous case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy import integrate

from .errors import DomainError, InvalidBandwidth, InvalidCorrelationPair, TooFewSamples
from .fourier import grid
from .rng import substream
from .spectra import Dataset

__all__ = [
    "DgpConfig",
    "slope",
    "slope_on_grid",
    "driver_covariance",
    "sample_driver",
    "dataset_from_drivers",
    "sample_dataset",
]

QUAD_TOL = 1e-6


@dataclass(frozen=True)
class DgpConfig:
    n: int = 100
    p: int = 100
    rho: float = 0.4
    nu_instr: float = 0.6
    sigma: float = 7 / 5
    beta_id: int = 1
    h: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise TooFewSamples(f"n must be >= 2, got {self.n}")
        if self.p < 1:
            raise ValueError(f"p must be >= 1, got {self.p}")
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.beta_id not in (1, 2, 3):
            raise ValueError(f"beta_id must be 1, 2 or 3, got {self.beta_id}")
        if not self.h > 0:
            raise InvalidBandwidth(f"bandwidth h must be positive, got {self.h}")
        _check_pair(self.rho, self.nu_instr)

    def with_(self, **changes) -> "DgpConfig":
        return replace(self, **changes)


# ---------------------------------------------------------------------------
# slope functions


def _bump(s: float) -> float:
    if abs(s) >= 1.0:
        return 0.0
    return math.exp(-1.0 / (1.0 - s * s))


_BUMP_MASS = integrate.quad(_bump, -1.0, 1.0, epsabs=1e-13, epsrel=1e-13)[0]


def _bump_cdf(u: float) -> float:
    """Distribution function of the normalized bump on (-1, 1)."""
    if u <= -1.0:
        return 0.0
    if u >= 1.0:
        return 1.0
    if u <= 0.0:
        val = integrate.quad(_bump, -1.0, u, epsabs=QUAD_TOL * 1e-3)[0]
    else:
        val = _BUMP_MASS - integrate.quad(_bump, u, 1.0, epsabs=QUAD_TOL * 1e-3)[0]
    return val / _BUMP_MASS


def _smoothed_indicator(t: float, h: float) -> float:
    # cell n: indicator of [n + 1/4, n + 3/4] convolved with (1/h) k_n(./h),
    # where k_n is the normalized bump centered at 2n
    total = 0.0
    lo_n = math.floor((-1.0 - 0.75 - h) / (1.0 + 2.0 * h)) - 1
    hi_n = math.ceil((2.0 - 0.25 + h) / (1.0 + 2.0 * h)) + 1
    for n in range(lo_n, hi_n + 1):
        left = n + 0.25 + h * (2 * n - 1)
        right = n + 0.75 + h * (2 * n + 1)
        if right < -1.0 or left > 2.0:
            continue
        total += _bump_cdf((t - n - 0.25) / h - 2 * n) - _bump_cdf((t - n - 0.75) / h - 2 * n)
    return total


def slope(beta_id: int, h: float, t: float) -> float:
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"t={t} outside [0, 1]")
    if beta_id == 1:
        return (
            math.sin(4 * math.pi * t)
            + 0.5 * math.sin(8 * math.pi * t)
            + math.sin(20 * math.pi * t) / 7
        )
    if beta_id == 2:
        return 2 / math.pi * math.asin(max(-1.0, min(1.0, math.cos(2 * math.pi * t))))
    if beta_id == 3:
        if not h > 0:
            raise InvalidBandwidth(f"bandwidth h must be positive, got {h}")
        return _smoothed_indicator(t, h)
    raise ValueError(f"beta_id must be 1, 2 or 3, got {beta_id}")


@lru_cache(maxsize=64)
def _slope_grid_cached(beta_id: int, p: int, h: float) -> np.ndarray:
    values = np.array([slope(beta_id, h, t) for t in grid(p)])
    values.flags.writeable = False
    return values


def slope_on_grid(beta_id: int, p: int, h: float = 0.1) -> np.ndarray:
    """Slope function sampled at ``l / (p + 1)``; cached per ``(beta_id, p, h)``."""
    if beta_id != 3:
        h = 0.1  # irrelevant; keeps one cache entry
    return _slope_grid_cached(int(beta_id), int(p), float(h))


# ---------------------------------------------------------------------------
# drivers


def _check_pair(rho: float, nu_instr: float) -> None:
    if not (rho * rho + nu_instr * nu_instr < 1.0):
        raise InvalidCorrelationPair(
            f"rho^2 + nu_instr^2 = {rho * rho + nu_instr * nu_instr:.4g} must be < 1"
        )


def driver_covariance(rho: float, nu_instr: float) -> np.ndarray:
    """Covariance of ``(Z1, Z2, U)``; its determinant is ``6 (1 - nu^2 - rho^2)``."""
    s6, s3 = math.sqrt(6.0), math.sqrt(3.0)
    return np.array(
        [
            [3.0, nu_instr * s6, rho * s3],
            [nu_instr * s6, 2.0, 0.0],
            [rho * s3, 0.0, 1.0],
        ]
    )


@lru_cache(maxsize=128)
def _driver_factor(rho: float, nu_instr: float) -> np.ndarray:
    _check_pair(rho, nu_instr)
    L = np.linalg.cholesky(driver_covariance(rho, nu_instr))
    L.flags.writeable = False
    return L


def sample_driver(rho: float, nu_instr: float, rng: np.random.Generator, size: int | None = None):
    """Draw ``(Z1, Z2, U)``; scalars when ``size`` is None, else arrays of length ``size``."""
    L = _driver_factor(float(rho), float(nu_instr))
    m = 1 if size is None else size
    Z = rng.standard_normal((m, 3)) @ L.T
    if size is None:
        return float(Z[0, 0]), float(Z[0, 1]), float(Z[0, 2])
    return Z[:, 0], Z[:, 1], Z[:, 2]


def dataset_from_drivers(cfg: DgpConfig, Z1, Z2, U, H) -> Dataset:
    """Assemble curves and responses from given driver draws."""
    t = grid(cfg.p)
    ramp = t + 0.5
    Z1, Z2, U, H = (np.asarray(a, dtype=float).reshape(-1) for a in (Z1, Z2, U, H))
    X = np.outer(Z1, ramp)
    W = np.outer(Z2, ramp) + H[:, None]
    beta = slope_on_grid(cfg.beta_id, cfg.p, cfg.h)
    Y = X @ beta / (cfg.p + 1) + cfg.sigma * U
    return Dataset(X, W, Y)


def sample_dataset(cfg: DgpConfig, rng: np.random.Generator | None = None) -> Dataset:
    if rng is None:
        rng = substream(cfg.seed)
    Z1, Z2, U = sample_driver(cfg.rho, cfg.nu_instr, rng, size=cfg.n)
    H = rng.uniform(-0.5, 0.5, size=cfg.n)
    return dataset_from_drivers(cfg, Z1, Z2, U, H)
