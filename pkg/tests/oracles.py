"""Brute-force reference implementations used as test oracles.

Everything here is plain Python loops over samples and frequencies with
``cmath``; nothing is shared with the vectorized code under test.
"""

import cmath
import math


def dft_coeff(values, k):
    m = len(values)
    return sum(v * cmath.exp(-2j * math.pi * k * l / m) for l, v in enumerate(values)) / m


def curve_coeffs(values, K):
    return {k: dft_coeff(values, k) for k in range(-K, K + 1)}


def grid_eval(coeffs, p):
    """Real part of sum_k c_k exp(2 pi i k t_l) at t_l = l/(p+1)."""
    m = p + 1
    return [
        sum(c * cmath.exp(2j * math.pi * k * l / m) for k, c in coeffs.items()).real
        for l in range(m)
    ]


def riemann_inner(f, g):
    return sum(a * b for a, b in zip(f, g)) / len(f)


def spectra(X, W, K, alpha, nu=0.0):
    n = len(X)
    Xc = [curve_coeffs(x, K) for x in X]
    Wc = [curve_coeffs(w, K) for w in W]
    out = {}
    for k in range(-K, K + 1):
        x = sum(abs(Xc[i][k]) ** 2 for i in range(n)) / n
        w = sum(abs(Wc[i][k]) ** 2 for i in range(n)) / n
        c = sum(Xc[i][k].conjugate() * Wc[i][k] for i in range(n)) / n
        lam = abs(c) ** 2 / w if w >= alpha else 0.0
        gam = 1 + abs(2 * math.pi * k)
        out[k] = dict(x=x, w=w, c=c, lam=lam, sel=lam >= alpha * gam**nu,
                      mu_x=sum(Xc[i][k] for i in range(n)) / n,
                      mu_w=sum(Wc[i][k] for i in range(n)) / n)
    return out, Xc, Wc


def beta_exogenous(X, W, Y, K, alpha, nu=0.0):
    sp, Xc, _ = spectra(X, W, K, alpha, nu)
    n = len(Y)
    return {
        k: (sum(Xc[i][k] * Y[i] for i in range(n)) / n / sp[k]["x"] if sp[k]["sel"] else 0j)
        for k in sp
    }


def beta_iv(X, W, Y, K, alpha, nu=0.0):
    sp, _, Wc = spectra(X, W, K, alpha, nu)
    n = len(Y)
    return {
        k: (sum(Wc[i][k] * Y[i] for i in range(n)) / n / sp[k]["c"] if sp[k]["sel"] else 0j)
        for k in sp
    }


def statistic_grid(X, W, Y, K, alpha, nu=0.0):
    """T_n with <delta, X_i> evaluated as a Riemann sum on the grid."""
    p = len(X[0]) - 1
    bi = beta_iv(X, W, Y, K, alpha, nu)
    be = beta_exogenous(X, W, Y, K, alpha, nu)
    delta = grid_eval({k: bi[k] - be[k] for k in bi}, p)
    return sum(riemann_inner(delta, x) ** 2 for x in X) / len(X)


def plugins(X, W, Y, K, alpha, nu=0.0):
    """t_hat, B_hat, R_hat, V_hat transcribed term by term."""
    sp, Xc, _ = spectra(X, W, K, alpha, nu)
    n = len(Y)
    bi = beta_iv(X, W, Y, K, alpha, nu)
    p = len(X[0]) - 1
    bi_grid = grid_eval(bi, p)
    fitted = [riemann_inner(bi_grid, x) for x in X]
    s2 = sum((Y[i] - fitted[i]) ** 2 for i in range(n)) / n
    gnorm = sum(f * f for f in fitted) / n
    sel = [k for k in sp if sp[k]["sel"]]
    terms = [sp[k]["x"] * sp[k]["w"] / abs(sp[k]["c"]) ** 2 - 1 for k in sel]
    t_hat = math.sqrt(sum(t * t for t in terms))
    R = (s2 + gnorm) * sum(terms) / n
    V = (s2 + gnorm) ** 2
    proj_mu = sum(bi[k] * sp[k]["mu_x"].conjugate() for k in sp).real
    bias = sum(
        abs(sp[k]["mu_w"] / sp[k]["c"] - sp[k]["mu_x"] / sp[k]["x"]) ** 2 * sp[k]["x"] for k in sel
    )
    B = n / (2 * t_hat) * proj_mu**2 * bias
    return dict(t_hat=t_hat, B=B, R=R, V=V, sigma_sq=s2)
