"""No-intercept OLS with stability diagnostics.

The regression of interest is y_t = coef * x_t + e_t on demeaned series
(demeaning upstream replaces the constant). Alongside the usual summary
statistics, this module provides the recursive residuals, the recursive
coefficient path, and the cumulative-sum stability test of Brown, Durbin
and Evans (1975).
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import stats as sps

from .errors import DegenerateRegressor, LengthMismatch
from .series import MonthDate, MonthlySeries

N_REGRESSORS = 1  # one slope, no intercept, throughout

# Brown-Durbin-Evans boundary constants for the CUSUM test
CUSUM_BAND_CONSTANTS = {0.01: 1.143, 0.05: 0.948, 0.10: 0.850}


@dataclass(frozen=True)
class OlsResult:
    """Summary of the no-intercept regression, one row per familiar label."""

    coef: float
    std_err: float
    t_stat: float
    p_value: float
    r2: float
    adj_r2: float
    se_regression: float
    ssr: float
    log_lik: float
    aic: float
    sic: float
    hq: float
    dw: float
    n_obs: int

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        rows = [
            ("Coefficient", self.coef),
            ("Std. Error", self.std_err),
            ("t-Statistic", self.t_stat),
            ("Prob.", self.p_value),
            ("R-squared", self.r2),
            ("Adjusted R-squared", self.adj_r2),
            ("S.E. of regression", self.se_regression),
            ("Sum squared resid", self.ssr),
            ("Log likelihood", self.log_lik),
            ("Akaike info criterion", self.aic),
            ("Schwarz criterion", self.sic),
            ("Hannan-Quinn criter.", self.hq),
            ("Durbin-Watson stat", self.dw),
            ("Included observations", self.n_obs),
        ]
        width = max(len(label) for label, _ in rows)
        lines = ["Least squares, no intercept"]
        for label, value in rows:
            if isinstance(value, int):
                lines.append(f"{label:<{width}}  {value}")
            else:
                lines.append(f"{label:<{width}}  {value:.6f}")
        return "\n".join(lines)


@dataclass(frozen=True)
class RecursivePath:
    """Expanding-sample coefficient estimates with +/-2 s.e. bands.

    start_index is the number of observations in the first estimate (the
    earliest point with a defined standard error).
    """

    start_index: int
    coefs: tuple[float, ...]
    bands_lo: tuple[float, ...]
    bands_hi: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "start_index": self.start_index,
            "coefs": list(self.coefs),
            "bands_lo": list(self.bands_lo),
            "bands_hi": list(self.bands_hi),
        }


@dataclass(frozen=True)
class CusumResult:
    """Cumulative sum of scaled recursive residuals against linear bands.

    Entry i corresponds to t = k + i observations used (the t = k entry is
    the zero anchor before the first recursive residual).
    """

    statistic: tuple[float, ...]
    band_lo: tuple[float, ...]
    band_hi: tuple[float, ...]
    significance: float
    first_crossing: MonthDate | None
    stable: bool
    sigma_w: float

    def to_dict(self) -> dict:
        return {
            "statistic": list(self.statistic),
            "band_lo": list(self.band_lo),
            "band_hi": list(self.band_hi),
            "significance": self.significance,
            "first_crossing": None if self.first_crossing is None else str(self.first_crossing),
            "stable": self.stable,
            "sigma_w": self.sigma_w,
        }


def _check_pair(y: MonthlySeries, x: MonthlySeries, min_len: int) -> tuple[np.ndarray, np.ndarray]:
    if len(y) != len(x):
        raise LengthMismatch(f"y has {len(y)} observations, x has {len(x)}")
    if len(y) < min_len:
        raise LengthMismatch(f"need at least {min_len} observations, got {len(y)}")
    return np.asarray(y.values), np.asarray(x.values)


def ols_no_intercept(y: MonthlySeries, x: MonthlySeries) -> OlsResult:
    """Fit y = coef * x by least squares with no constant term.

    Inputs are expected to be demeaned; the information criteria follow the
    per-observation convention (-2*loglik + penalty) / n so values are
    directly comparable across sample sizes.
    """
    yv, xv = _check_pair(y, x, min_len=2)
    n = len(yv)
    sxx = float(xv @ xv)
    if sxx == 0.0:
        raise DegenerateRegressor("regressor is identically zero")
    coef = float(xv @ yv) / sxx
    resid = yv - coef * xv
    ssr = float(resid @ resid)
    df = n - N_REGRESSORS
    s2 = ssr / df
    std_err = math.sqrt(s2 / sxx)
    t_stat = coef / std_err if std_err > 0 else math.inf
    p_value = 2.0 * float(sps.t.sf(abs(t_stat), df))
    tss = float((yv - yv.mean()) @ (yv - yv.mean()))
    r2 = 1.0 - ssr / tss if tss > 0 else 0.0
    adj_r2 = 1.0 - (1.0 - r2) * (n - 1) / df
    log_lik = -0.5 * n * (math.log(2.0 * math.pi) + math.log(ssr / n) + 1.0) if ssr > 0 else math.inf
    aic = (-2.0 * log_lik + 2.0 * N_REGRESSORS) / n
    sic = (-2.0 * log_lik + N_REGRESSORS * math.log(n)) / n
    hq = (-2.0 * log_lik + 2.0 * N_REGRESSORS * math.log(math.log(n))) / n
    dw = float(np.sum(np.diff(resid) ** 2)) / ssr if ssr > 0 else 0.0
    return OlsResult(
        coef=coef, std_err=std_err, t_stat=t_stat, p_value=p_value,
        r2=r2, adj_r2=adj_r2, se_regression=math.sqrt(s2), ssr=ssr,
        log_lik=log_lik, aic=aic, sic=sic, hq=hq, dw=dw, n_obs=n,
    )


def recursive_residuals(y: MonthlySeries, x: MonthlySeries) -> MonthlySeries:
    """Standardized one-step-ahead prediction errors from expanding OLS.

    w_t = (y_t - x_t * beta_{t-1}) / sqrt(1 + x_t^2 / S_{t-1}) where
    S_{t-1} = sum of x_s^2 over s < t, for t = 2..T. Under a stable model
    with iid N(0, sigma^2) errors the w_t are iid N(0, sigma^2).
    """
    yv, xv = _check_pair(y, x, min_len=N_REGRESSORS + 1)
    if xv[0] == 0.0:
        raise DegenerateRegressor("first observation of x is zero; recursion cannot start")
    sxx = xv[0] * xv[0]
    sxy = xv[0] * yv[0]
    w = []
    for t in range(1, len(yv)):
        beta = sxy / sxx
        err = yv[t] - xv[t] * beta
        w.append(err / math.sqrt(1.0 + xv[t] * xv[t] / sxx))
        sxx += xv[t] * xv[t]
        sxy += xv[t] * yv[t]
    return MonthlySeries(y.start.plus(N_REGRESSORS), tuple(w), name="recursive_residuals")


def recursive_coefficients(y: MonthlySeries, x: MonthlySeries) -> RecursivePath:
    """Coefficient path over expanding samples with +/-2 s.e. bands.

    The first entry uses k+1 = 2 observations (the earliest sample with a
    residual degree of freedom); the last equals the full-sample estimate.
    """
    yv, xv = _check_pair(y, x, min_len=N_REGRESSORS + 1)
    sxx = xv[0] * xv[0]
    sxy = xv[0] * yv[0]
    syy = yv[0] * yv[0]
    if sxx == 0.0:
        raise DegenerateRegressor("first observation of x is zero; recursion cannot start")
    coefs, lo, hi = [], [], []
    for t in range(1, len(yv)):
        sxx += xv[t] * xv[t]
        sxy += xv[t] * yv[t]
        syy += yv[t] * yv[t]
        if sxx == 0.0:
            raise DegenerateRegressor("prefix of x is identically zero")
        beta = float(sxy / sxx)
        n_used = t + 1
        ssr = max(float(syy - beta * sxy), 0.0)
        se = math.sqrt(ssr / (n_used - N_REGRESSORS) / sxx)
        coefs.append(beta)
        lo.append(beta - 2.0 * se)
        hi.append(beta + 2.0 * se)
    return RecursivePath(
        start_index=N_REGRESSORS + 1,
        coefs=tuple(coefs),
        bands_lo=tuple(lo),
        bands_hi=tuple(hi),
    )


def cusum(y: MonthlySeries, x: MonthlySeries, significance: float = 0.05) -> CusumResult:
    """CUSUM stability test on the cumulated scaled recursive residuals.

    W_t = sum of w_s (s <= t) divided by the sample standard deviation of
    the recursive residuals (denominator T-k-1). The boundaries are
    +/- a * [sqrt(T-k) + 2*(t-k)/sqrt(T-k)] with a the Brown-Durbin-Evans
    constant for the chosen significance level; a crossing anywhere rejects
    parameter stability.
    """
    if significance not in CUSUM_BAND_CONSTANTS:
        raise ValueError(
            f"significance must be one of {sorted(CUSUM_BAND_CONSTANTS)}, got {significance}"
        )
    w = recursive_residuals(y, x)
    wv = np.asarray(w.values)
    n = len(wv)  # T - k
    if n < 2:
        raise LengthMismatch("need at least two recursive residuals for CUSUM")
    sigma_w = float(np.std(wv, ddof=1))
    a = CUSUM_BAND_CONSTANTS[significance]
    sqrt_n = math.sqrt(n)
    # index i corresponds to t - k = i, with the zero anchor at i = 0
    stat = [0.0]
    if sigma_w > 0:
        stat.extend(float(v) for v in np.cumsum(wv) / sigma_w)
    else:
        stat.extend([0.0] * n)
    band_hi = [a * (sqrt_n + 2.0 * i / sqrt_n) for i in range(n + 1)]
    band_lo = [-b for b in band_hi]

    first_crossing: MonthDate | None = None
    for i in range(1, n + 1):
        if abs(stat[i]) > band_hi[i]:
            # entry i is the residual at observation k + i (1-based)
            first_crossing = y.start.plus(N_REGRESSORS + i - 1)
            break
    return CusumResult(
        statistic=tuple(stat),
        band_lo=tuple(band_lo),
        band_hi=tuple(band_hi),
        significance=significance,
        first_crossing=first_crossing,
        stable=first_crossing is None,
        sigma_w=sigma_w,
    )
