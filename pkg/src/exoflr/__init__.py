"""Hausman-type exogeneity test for the functional linear regression model."""

from .bootstrap import BootstrapOutcome, BootstrapScheme, bootstrap_test
from .dgp import DgpConfig, sample_dataset
from .estimators import fit_exogenous, fit_iv, residuals, sigma_hat_sq
from .exotest import TestOutcome, asymptotic_test, statistic
from .fourier import FourierCoeffs, SampledCurve, analyze, inner_product, synthesize
from .spectra import Dataset, SpectralEstimates, estimate

__version__ = "0.1.0"

__all__ = [
    "BootstrapOutcome",
    "BootstrapScheme",
    "Dataset",
    "DgpConfig",
    "FourierCoeffs",
    "SampledCurve",
    "SpectralEstimates",
    "TestOutcome",
    "analyze",
    "asymptotic_test",
    "bootstrap_test",
    "estimate",
    "fit_exogenous",
    "fit_iv",
    "inner_product",
    "residuals",
    "sample_dataset",
    "sigma_hat_sq",
    "statistic",
    "synthesize",
]
