"""Independent reference implementations used to freeze expected values.

Everything here recomputes results from definitions (explicit sums, joint
Gaussian densities, sequential OLS) without touching the library's own
recursions, so a test that compares the two is a genuine cross-check.
"""

from __future__ import annotations

import math

import numpy as np


def ols_brute(y, x):
    """No-intercept OLS statistics from explicit elementwise sums."""
    y = [float(v) for v in y]
    x = [float(v) for v in x]
    n = len(y)
    sxx = math.fsum(xi * xi for xi in x)
    sxy = math.fsum(xi * yi for xi, yi in zip(x, y))
    coef = sxy / sxx
    resid = [yi - coef * xi for yi, xi in zip(y, x)]
    ssr = math.fsum(r * r for r in resid)
    ybar = math.fsum(y) / n
    tss = math.fsum((yi - ybar) ** 2 for yi in y)
    dw = math.fsum((resid[t] - resid[t - 1]) ** 2 for t in range(1, n)) / ssr
    return {
        "coef": coef,
        "ssr": ssr,
        "r2": 1.0 - ssr / tss,
        "dw": dw,
        "se_regression": math.sqrt(ssr / (n - 1)),
        "std_err": math.sqrt(ssr / (n - 1) / sxx),
    }


def recursive_residuals_brute(y, x):
    """Recursive residuals via a fresh OLS fit on every prefix."""
    y = [float(v) for v in y]
    x = [float(v) for v in x]
    out = []
    for t in range(1, len(y)):
        xs, ys = x[:t], y[:t]
        sxx = math.fsum(v * v for v in xs)
        beta = math.fsum(a * b for a, b in zip(xs, ys)) / sxx
        err = y[t] - x[t] * beta
        out.append(err / math.sqrt(1.0 + x[t] * x[t] / sxx))
    return out


def state_space_oracle(yv, xv, gamma, var_meas, var_state, a0, p0):
    """Exact moments of the TVP model from the joint Gaussian distribution.

    Builds the T x T covariance of the states implied by the random-walk
    (or AR) transition and a proper N(a0, p0) prior, marginalizes to the
    observations, and conditions directly. Returns
    (loglik, filtered_means, filtered_vars, smoothed_means, smoothed_vars).
    """
    yv = np.asarray(yv, dtype=float)
    xv = np.asarray(xv, dtype=float)
    T = len(yv)
    cov_a = np.empty((T, T))
    for t in range(1, T + 1):
        for s in range(1, T + 1):
            acc = gamma ** (t + s) * p0
            for j in range(1, min(t, s) + 1):
                acc += var_state * gamma ** (t - j) * gamma ** (s - j)
            cov_a[t - 1, s - 1] = acc
    mean_a = np.array([gamma ** t * a0 for t in range(1, T + 1)])
    mean_y = xv * mean_a
    cov_y = np.outer(xv, xv) * cov_a + var_meas * np.eye(T)
    resid = yv - mean_y
    _, logdet = np.linalg.slogdet(cov_y)
    loglik = -0.5 * (T * math.log(2.0 * math.pi) + logdet
                     + float(resid @ np.linalg.solve(cov_y, resid)))

    filt_m, filt_v, sm_m, sm_v = [], [], [], []
    sol_full = np.linalg.solve(cov_y, resid)
    for t in range(T):
        cross = cov_a[t, :t + 1] * xv[:t + 1]
        sol = np.linalg.solve(cov_y[:t + 1, :t + 1], resid[:t + 1])
        filt_m.append(mean_a[t] + float(cross @ sol))
        filt_v.append(cov_a[t, t] - float(
            cross @ np.linalg.solve(cov_y[:t + 1, :t + 1], cross)
        ))
        cross_full = cov_a[t, :] * xv
        sm_m.append(mean_a[t] + float(cross_full @ sol_full))
        sm_v.append(cov_a[t, t] - float(
            cross_full @ np.linalg.solve(cov_y, cross_full)
        ))
    return loglik, np.array(filt_m), np.array(filt_v), np.array(sm_m), np.array(sm_v)
