import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from exoflr.errors import DegenerateStudentization, InconsistentEstimates, NoSelectedFrequencies
from exoflr.estimators import SlopeEstimate, SlopeKind, fit_exogenous, fit_iv, sigma_hat_sq
from exoflr.exotest import (
    Plugins,
    asymptotic_test,
    decide,
    normal_cdf,
    normal_quantile,
    plugins,
    standardize,
    statistic,
    statistic_from_coef,
    statistic_quadratic_form,
)
from exoflr.fourier import FourierCoeffs, analyze_rows, grid
from exoflr.spectra import Dataset, estimate

import oracles
from conftest import random_toy


def _lists(d):
    return d.X.tolist(), d.W.tolist(), d.Y.tolist()


def test_statistic_zero_under_self_instrument(toy):
    d = Dataset(toy.X, toy.X, toy.Y)
    est = estimate(d, alpha=1e-3)
    assert statistic(d, fit_iv(d, est), fit_exogenous(d, est)) == pytest.approx(0.0, abs=1e-12)


def test_statistic_single_tone_difference():
    p, a = 31, np.array([1.0, 2.0, -1.5])
    X = np.outer(a, np.cos(2 * np.pi * grid(p)))
    delta = FourierCoeffs.from_mapping({1: 0.5, -1: 0.5}, K=3).coeffs
    T = float(statistic_from_coef(delta, analyze_rows(X, 3)))
    assert T == pytest.approx(np.mean(a**2) / 4, rel=1e-12)


def test_statistic_matches_grid_oracle(rng):
    d = random_toy(rng, n=5, p=8)
    est = estimate(d, alpha=1e-3)
    T = statistic(d, fit_iv(d, est), fit_exogenous(d, est))
    assert T == pytest.approx(oracles.statistic_grid(*_lists(d), est.K, 1e-3), rel=1e-10)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000))
def test_statistic_equals_quadratic_form(seed):
    d = random_toy(np.random.default_rng(seed), n=6, p=10)
    est = estimate(d, alpha=1e-3)
    bi, be = fit_iv(d, est), fit_exogenous(d, est)
    T = statistic(d, bi, be)
    Q = statistic_quadratic_form(bi.coeffs.coeffs - be.coeffs.coeffs, est.X_coef)
    assert T == pytest.approx(Q, rel=1e-10, abs=1e-14)


def test_statistic_rejects_mixed_spectra(rng):
    a, b = random_toy(rng), random_toy(rng)
    ea, eb = estimate(a, alpha=1e-3), estimate(b, alpha=1e-3)
    with pytest.raises(InconsistentEstimates):
        statistic(a, fit_iv(a, ea), fit_exogenous(b, eb))
    other_K = SlopeEstimate(FourierCoeffs.zeros(1), SlopeKind.EXOGENOUS, ea.fingerprint)
    with pytest.raises(InconsistentEstimates):
        statistic(a, fit_iv(a, ea), other_K)


def test_plugins_match_oracle(rng):
    # n=5, K=2
    d = random_toy(rng, n=5, p=6)
    est = estimate(d, K=2, alpha=1e-3)
    ref = oracles.plugins(*_lists(d), 2, 1e-3)
    bi = fit_iv(d, est)
    s2 = sigma_hat_sq(d, bi)
    assert s2 == pytest.approx(ref["sigma_sq"], rel=1e-12)
    pl = plugins(d, est, bi, s2)
    assert pl.t_hat_n == pytest.approx(ref["t_hat"], rel=1e-12)
    assert pl.B_hat_n == pytest.approx(ref["B"], rel=1e-12)
    assert pl.R_hat_n == pytest.approx(ref["R"], rel=1e-12)
    assert pl.V_hat_n == pytest.approx(ref["V"], rel=1e-12)


def test_plugins_degenerate_under_self_instrument(toy):
    d = Dataset(toy.X, toy.X, toy.Y)
    est = estimate(d, alpha=1e-3)
    bi = fit_iv(d, est)
    with pytest.raises(DegenerateStudentization):
        plugins(d, est, bi, sigma_hat_sq(d, bi))
    with pytest.raises(DegenerateStudentization):
        asymptotic_test(d, alpha=1e-3)


def test_plugins_no_selection(toy):
    est = estimate(toy, alpha=1e6)
    dummy = SlopeEstimate(FourierCoeffs.zeros(est.K), SlopeKind.IV, est.fingerprint)
    with pytest.raises(NoSelectedFrequencies):
        plugins(toy, est, dummy, 1.0)


def test_bias_vanishes_for_centered_data(rng):
    d = random_toy(rng, n=8, p=8)
    centered = Dataset(d.X - d.X.mean(axis=0), d.W - d.W.mean(axis=0), d.Y)
    est = estimate(centered, alpha=1e-3)
    assert np.max(np.abs(est.mu_X.coeffs)) < 1e-14
    bi = fit_iv(centered, est)
    assert plugins(centered, est, bi, 1.0).B_hat_n == pytest.approx(0.0, abs=1e-20)


def test_boundary_does_not_reject():
    u = normal_quantile(0.95)
    p, reject = decide(u, 0.05)
    assert not reject
    assert p == pytest.approx(0.05, abs=1e-12)
    assert decide(np.nextafter(u, np.inf), 0.05)[1]


def test_decide_rejects_bad_level():
    for g in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            decide(1.0, g)


def test_normal_functions_against_mpmath():
    mpmath.mp.dps = 30
    for q in (0.9, 0.95, 0.975, 0.99, 0.5, 0.01):
        exact = float(mpmath.sqrt(2) * mpmath.erfinv(2 * mpmath.mpf(q) - 1))
        assert normal_quantile(q) == pytest.approx(exact, abs=1e-8)
    assert normal_quantile(0.95) == pytest.approx(1.6448536269514722, abs=1e-12)
    for z in (-3.0, -1.0, 0.0, 0.7, 2.5):
        assert normal_cdf(z) == pytest.approx(float(mpmath.ncdf(z)), abs=1e-14)


def test_standardize_formula():
    pl = Plugins(t_hat_n=2.0, B_hat_n=0.1, R_hat_n=0.2, V_hat_n=4.0)
    assert standardize(1.3, 10, pl) == pytest.approx(10 * (1.3 - 0.3) / (2.0 * 2.0))


@settings(max_examples=30, deadline=None)
@given(st.floats(1e-3, 0.5), st.floats(-5, 5), st.floats(0.0, 3.0))
def test_rejection_is_monotone(gamma, z, dz):
    # larger statistics never flip a rejection back; larger levels reject more
    assert decide(z + dz, gamma)[1] >= decide(z, gamma)[1]
    assert decide(z, min(gamma * 1.5, 0.9))[1] >= decide(z, gamma)[1]
    assert decide(z + dz, gamma)[0] <= decide(z, gamma)[0]


def test_asymptotic_pipeline_consistent(rng):
    d = random_toy(rng, n=20, p=16, instrument_noise=1.0)
    out = asymptotic_test(d, alpha=1e-2, gamma=0.1)
    est = estimate(d, alpha=1e-2)
    bi, be = fit_iv(d, est), fit_exogenous(d, est)
    pl = plugins(d, est, bi, sigma_hat_sq(d, bi))
    T = statistic(d, bi, be)
    assert out.T_n == T
    assert out.z == pytest.approx(standardize(T, d.n, pl), rel=1e-14)
    assert out.p_value == pytest.approx(1 - normal_cdf(out.z), abs=1e-14)
    assert out.reject == (out.z > normal_quantile(0.9))
    assert out.n_selected == len(est.selected)


def test_asymptotic_rejects_bad_gamma(toy):
    with pytest.raises(ValueError):
        asymptotic_test(toy, alpha=1e-3, gamma=1.5)
