"""Time-varying-coefficient state-space model and its maximum-likelihood fit.

The model is the univariate pair

    y_t = x_t * alpha_t + mu_t,        mu_t ~ N(0, var_meas)
    alpha_t = gamma * alpha_{t-1} + eps_t,   eps_t ~ N(0, var_state)

with gamma fixed at 1 by default, so the coefficient follows a random walk.
Estimation maximizes the prediction-error-decomposition log-likelihood over
the two log-variances with a quasi-Newton optimizer; parameter uncertainty
is reported with a Huber-White sandwich built from the observed Hessian and
per-observation numerical scores.

Initialization is an approximate diffuse prior: the state starts at zero
with a very large variance scaled to the data, and the first innovation is
excluded from the likelihood. The filtered-variance update is computed as
P_pred * var_meas / F (algebraically identical to (1 - K x) P_pred but free
of cancellation), which keeps the big-variance start numerically exact.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _optim
from .errors import (
    EmptySeries,
    MismatchedOutput,
    NoConvergence,
    NonFiniteObjective,
    NonFiniteState,
)
from .series import MonthDate, MonthlySeries

_LOG_2PI = math.log(2.0 * math.pi)
_DIFFUSE_FACTOR = 1e14
_LOG_VAR_MIN = -40.0
_LOG_VAR_MAX = 40.0
_BOUND_MARGIN = 1.0  # estimates closer than this to a bound are not trusted


@dataclass(frozen=True)
class VarianceParams:
    """Log-variances of the measurement and state innovations."""

    log_var_meas: float
    log_var_state: float

    def __post_init__(self):
        if not (math.isfinite(self.log_var_meas) and math.isfinite(self.log_var_state)):
            raise ValueError("log-variances must be finite")

    @property
    def var_meas(self) -> float:
        return math.exp(self.log_var_meas)

    @property
    def var_state(self) -> float:
        return math.exp(self.log_var_state)


@dataclass(frozen=True)
class TvpModel:
    """Demeaned observation/regressor pair plus the transition coefficient."""

    y: MonthlySeries
    x: MonthlySeries
    gamma: float = 1.0

    def __post_init__(self):
        if len(self.y) != len(self.x) or self.y.start != self.x.start:
            raise ValueError("y and x must be aligned (same start and length)")

    def __len__(self) -> int:
        return len(self.y)


@dataclass(frozen=True)
class ExplicitInit:
    """Proper prior: alpha_0 ~ N(mean, var)."""

    mean: float
    var: float

    def __post_init__(self):
        if self.var < 0:
            raise ValueError("prior variance must be non-negative")


@dataclass(frozen=True)
class KalmanOutput:
    """Per-period filter moments plus the decomposition log-likelihood.

    Index t holds the one-step prediction for observation t, so
    innovations[t] == y_t - x_t * pred_mean[t] exactly.
    """

    pred_mean: tuple[float, ...]
    pred_var: tuple[float, ...]
    filt_mean: tuple[float, ...]
    filt_var: tuple[float, ...]
    innovations: tuple[float, ...]
    innov_var: tuple[float, ...]
    log_lik: float
    n_diffuse_dropped: int
    start: MonthDate
    gamma: float


def _diffuse_p0(yv, xv) -> float:
    vy = float(np.var(yv)) if len(yv) > 1 else 0.0
    vx = float(np.var(xv)) if len(xv) > 1 else 0.0
    scale = vy / vx if vy > 0.0 and vx > 0.0 else 1.0
    return _DIFFUSE_FACTOR * scale


def _filter_core(yv, xv, gamma, var_meas, var_state, a0, p0, n_drop, store):
    """One filter pass; identical arithmetic with or without storage."""
    a = a0
    p = p0
    ll = 0.0
    if store:
        pred_mean, pred_var, filt_mean, filt_var, innov, innov_var = [], [], [], [], [], []
    for t in range(len(yv)):
        a_pred = gamma * a
        p_pred = gamma * gamma * p + var_state
        xt = xv[t]
        f = xt * xt * p_pred + var_meas
        v = yv[t] - xt * a_pred
        k = p_pred * xt / f
        a = a_pred + k * v
        p = p_pred * (var_meas / f)
        if t >= n_drop:
            ll -= 0.5 * (_LOG_2PI + math.log(f) + v * v / f)
        if store:
            pred_mean.append(a_pred)
            pred_var.append(p_pred)
            filt_mean.append(a)
            filt_var.append(p)
            innov.append(v)
            innov_var.append(f)
    if store:
        return ll, pred_mean, pred_var, filt_mean, filt_var, innov, innov_var
    return ll


def _resolve_init(model: TvpModel, init) -> tuple[float, float, int]:
    if init == "diffuse":
        return 0.0, _diffuse_p0(model.y.values, model.x.values), 1
    if isinstance(init, ExplicitInit):
        return init.mean, init.var, 0
    raise ValueError(f"init must be 'diffuse' or ExplicitInit, got {init!r}")


def kalman_filter(model: TvpModel, params: VarianceParams,
                  init="diffuse") -> KalmanOutput:
    """Run the forward recursion and return all per-period moments."""
    if len(model) == 0:
        raise EmptySeries("cannot filter an empty model")
    a0, p0, n_drop = _resolve_init(model, init)
    ll, pm, pv, fm, fv, iv, ivv = _filter_core(
        model.y.values, model.x.values, model.gamma,
        params.var_meas, params.var_state, a0, p0, n_drop, store=True,
    )
    if not (math.isfinite(fm[-1]) and math.isfinite(fv[-1])):
        raise NonFiniteState("filter recursion produced a non-finite state")
    return KalmanOutput(
        pred_mean=tuple(pm), pred_var=tuple(pv),
        filt_mean=tuple(fm), filt_var=tuple(fv),
        innovations=tuple(iv), innov_var=tuple(ivv),
        log_lik=ll, n_diffuse_dropped=n_drop,
        start=model.y.start, gamma=model.gamma,
    )


def log_likelihood(model: TvpModel, params: VarianceParams,
                   init="diffuse") -> float:
    """Prediction-error log-likelihood; equals kalman_filter(...).log_lik."""
    if len(model) == 0:
        raise EmptySeries("cannot filter an empty model")
    a0, p0, n_drop = _resolve_init(model, init)
    return _filter_core(
        model.y.values, model.x.values, model.gamma,
        params.var_meas, params.var_state, a0, p0, n_drop, store=False,
    )


def kalman_smoother(model: TvpModel, params: VarianceParams,
                    output: KalmanOutput,
                    init="diffuse") -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Fixed-interval (RTS) smoother over a previously computed filter pass.

    The output must come from kalman_filter on the same model, parameters,
    and initialization; this is verified by replaying the likelihood.
    """
    n = len(model)
    if len(output.innovations) != n:
        raise MismatchedOutput(
            f"filter output has {len(output.innovations)} periods, model has {n}"
        )
    if log_likelihood(model, params, init) != output.log_lik or output.gamma != model.gamma:
        raise MismatchedOutput("output was not produced by this model/params/init")
    gamma = model.gamma
    sm = list(output.filt_mean)
    sv = list(output.filt_var)
    for t in range(n - 2, -1, -1):
        pp = output.pred_var[t + 1]
        j = output.filt_var[t] * gamma / pp if pp > 0.0 else 0.0
        sm[t] = output.filt_mean[t] + j * (sm[t + 1] - output.pred_mean[t + 1])
        sv[t] = output.filt_var[t] + j * j * (sv[t + 1] - pp)
    return tuple(sm), tuple(sv)


def variance_from_log(v: float) -> float:
    """Back-transform an estimated log-variance to the variance scale."""
    return math.exp(v)


def innovation_shocks(output: KalmanOutput) -> MonthlySeries:
    """Standardized innovations v_t / sqrt(F_t), dated like the input.

    The first output.n_diffuse_dropped entries belong to the diffuse
    burn-in and should be flagged or dropped by presentation layers.
    """
    vals = tuple(v / math.sqrt(f) for v, f in zip(output.innovations, output.innov_var))
    return MonthlySeries(output.start, vals, name="shocks")


@dataclass(frozen=True)
class MleOptions:
    max_iter: int = 500
    grad_tol: float = 1e-6
    rel_tol: float = 1e-9
    fd_scale: float = 1e-4
    estimate_gamma: bool = False


@dataclass(frozen=True)
class MleResult:
    """Maximum-likelihood estimates in the shape of a state-space summary.

    robust_se / z_stats / p_values are ordered (measurement, state) and
    include gamma as a third entry when it was estimated. The headline
    final_state is the last filtered mean a_{T|T}; the one-step forecast
    gamma * a_{T|T} is also reported since the two readings of "final" are
    both in circulation.
    """

    params: VarianceParams
    gamma: float
    robust_se: tuple[float, ...]
    z_stats: tuple[float, ...]
    p_values: tuple[float, ...]
    var_meas: float
    var_state: float
    final_state: float
    final_rmse: float
    final_z: float
    final_p: float
    forecast_state: float
    forecast_rmse: float
    log_lik: float
    aic: float
    sic: float
    hq: float
    n_obs: int
    n_iter: int
    converged: bool
    loglik_path: tuple[float, ...] = field(repr=False, default=())

    def to_dict(self) -> dict:
        d = asdict(self)
        d["params"] = {"log_var_meas": self.params.log_var_meas,
                       "log_var_state": self.params.log_var_state}
        for key in ("robust_se", "z_stats", "p_values", "loglik_path"):
            d[key] = list(d[key])
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def to_text(self) -> str:
        lines = [
            "State-space fit by maximum likelihood (quasi-Newton)",
            f"Included observations        {self.n_obs}",
            f"Convergence {'achieved' if self.converged else 'NOT achieved'} "
            f"after {self.n_iter} iterations",
            "",
            f"{'':24}{'Coefficient':>12}  {'Std. Error':>10}  {'z-Statistic':>11}  {'Prob.':>7}",
            f"{'log var (measurement)':24}{self.params.log_var_meas:>12.6f}  "
            f"{self.robust_se[0]:>10.6f}  {self.z_stats[0]:>11.6f}  {self.p_values[0]:>7.4f}",
            f"{'log var (state)':24}{self.params.log_var_state:>12.6f}  "
            f"{self.robust_se[1]:>10.6f}  {self.z_stats[1]:>11.6f}  {self.p_values[1]:>7.4f}",
        ]
        if len(self.robust_se) > 2:
            lines.append(
                f"{'gamma':24}{self.gamma:>12.6f}  "
                f"{self.robust_se[2]:>10.6f}  {self.z_stats[2]:>11.6f}  {self.p_values[2]:>7.4f}"
            )
        lines += [
            "",
            f"{'':24}{'Final State':>12}  {'Root MSE':>10}  {'z-Statistic':>11}  {'Prob.':>7}",
            f"{'state coefficient':24}{self.final_state:>12.6f}  "
            f"{self.final_rmse:>10.6f}  {self.final_z:>11.6f}  {self.final_p:>7.4f}",
            "",
            f"Log likelihood               {self.log_lik:.6f}",
            f"Akaike info criterion        {self.aic:.6f}",
            f"Schwarz criterion            {self.sic:.6f}",
            f"Hannan-Quinn criter.         {self.hq:.6f}",
            f"Implied var (measurement)    {self.var_meas:.6f}",
            f"Implied var (state)          {self.var_state:.6f}",
        ]
        return "\n".join(lines)


def _default_init(model: TvpModel) -> VarianceParams:
    vy = float(np.var(np.asarray(model.y.values))) if len(model) > 1 else 1.0
    vx = float(np.var(np.asarray(model.x.values))) if len(model) > 1 else 1.0
    vm = max(0.5 * vy, 1e-6)
    vs = max(0.1 * vy / max(vx, 1e-12), 1e-6)
    return VarianceParams(math.log(vm), math.log(vs))


def _per_obs_loglik(model: TvpModel, theta: np.ndarray, estimate_gamma: bool) -> np.ndarray:
    gamma = theta[2] if estimate_gamma else model.gamma
    a0, p0, n_drop = 0.0, _diffuse_p0(model.y.values, model.x.values), 1
    _, _, _, _, _, iv, ivv = _filter_core(
        model.y.values, model.x.values, gamma,
        math.exp(theta[0]), math.exp(theta[1]), a0, p0, n_drop, store=True,
    )
    v = np.asarray(iv[n_drop:])
    f = np.asarray(ivv[n_drop:])
    return -0.5 * (_LOG_2PI + np.log(f) + v * v / f)


def fit_mle(model: TvpModel, init_params: VarianceParams | None = None,
            options: MleOptions | None = None) -> MleResult:
    """Estimate the log-variances (and optionally gamma) by ML.

    Raises NoConvergence when the iteration cap is reached or an estimate
    is pinned at the log-variance box bound; the exception carries the best
    iterate as .result so callers can still inspect it.
    """
    opts = options or MleOptions()
    start = init_params or _default_init(model)
    theta0 = [start.log_var_meas, start.log_var_state]
    if opts.estimate_gamma:
        theta0.append(model.gamma)
    theta0 = np.asarray(theta0, dtype=float)

    def objective(theta: np.ndarray) -> float:
        if theta[0] < _LOG_VAR_MIN or theta[0] > _LOG_VAR_MAX:
            return math.inf
        if theta[1] < _LOG_VAR_MIN or theta[1] > _LOG_VAR_MAX:
            return math.inf
        gamma = theta[2] if opts.estimate_gamma else model.gamma
        try:
            params = VarianceParams(theta[0], theta[1])
        except ValueError:
            return math.inf
        model_g = TvpModel(model.y, model.x, gamma) if opts.estimate_gamma else model
        ll = log_likelihood(model_g, params)
        return -ll if math.isfinite(ll) else math.inf

    f0 = objective(theta0)
    if not math.isfinite(f0):
        raise NonFiniteObjective(
            f"log-likelihood is non-finite at the starting values {theta0.tolist()}"
        )
    opt = _optim.minimize(
        objective, theta0, max_iter=opts.max_iter, grad_tol=opts.grad_tol,
        f_rel_tol=opts.rel_tol, fd_scale=opts.fd_scale,
    )
    result = _build_result(model, opt, opts)
    if not opt.converged:
        raise NoConvergence(
            f"no convergence after {opt.n_iter} iterations "
            f"(gradient inf-norm {float(np.max(np.abs(opt.grad))):.3g})",
            result=result,
        )
    for i in range(2):
        if opt.x[i] < _LOG_VAR_MIN + _BOUND_MARGIN or opt.x[i] > _LOG_VAR_MAX - _BOUND_MARGIN:
            raise NoConvergence(
                f"log-variance estimate {opt.x[i]:.2f} is pinned at the parameter bound; "
                "the variance is not identified on this data",
                result=result,
            )
    return result


def _build_result(model: TvpModel, opt: _optim.OptResult, opts: MleOptions) -> MleResult:
    theta = opt.x
    gamma = float(theta[2]) if opts.estimate_gamma else model.gamma
    params = VarianceParams(float(theta[0]), float(theta[1]))
    model_g = TvpModel(model.y, model.x, gamma) if opts.estimate_gamma else model
    out = kalman_filter(model_g, params)

    def loglik_of(t: np.ndarray) -> float:
        g = t[2] if opts.estimate_gamma else model.gamma
        m = TvpModel(model.y, model.x, g) if opts.estimate_gamma else model
        return log_likelihood(m, VarianceParams(t[0], t[1]))

    hess = _optim.fd_hessian(loglik_of, theta, opts.fd_scale)
    scores = _score_matrix(model, theta, opts)
    g_outer = scores.T @ scores
    try:
        hinv = np.linalg.inv(hess)
    except np.linalg.LinAlgError:
        hinv = np.linalg.pinv(hess)
    cov = hinv @ g_outer @ hinv
    se = tuple(math.sqrt(abs(float(cov[i, i]))) for i in range(len(theta)))
    z = tuple(float(theta[i]) / se[i] if se[i] > 0 else math.inf for i in range(len(theta)))
    pvals = tuple(math.erfc(abs(zi) / math.sqrt(2.0)) for zi in z)

    n = len(model)
    k = len(theta)
    ll = out.log_lik
    final_state = out.filt_mean[-1]
    final_rmse = math.sqrt(out.filt_var[-1])
    final_z = final_state / final_rmse if final_rmse > 0 else math.inf
    return MleResult(
        params=params,
        gamma=gamma,
        robust_se=se,
        z_stats=z,
        p_values=pvals,
        var_meas=params.var_meas,
        var_state=params.var_state,
        final_state=final_state,
        final_rmse=final_rmse,
        final_z=final_z,
        final_p=math.erfc(abs(final_z) / math.sqrt(2.0)),
        forecast_state=gamma * final_state,
        forecast_rmse=math.sqrt(gamma * gamma * out.filt_var[-1] + params.var_state),
        log_lik=ll,
        aic=(-2.0 * ll + 2.0 * k) / n,
        sic=(-2.0 * ll + k * math.log(n)) / n,
        hq=(-2.0 * ll + 2.0 * k * math.log(math.log(n))) / n,
        n_obs=n,
        n_iter=opt.n_iter,
        converged=opt.converged,
        loglik_path=tuple(-f for f in opt.accepted_f),
    )


def _score_matrix(model: TvpModel, theta: np.ndarray, opts: MleOptions) -> np.ndarray:
    """Per-observation numerical scores (central differences)."""
    h = _optim.fd_step(theta, opts.fd_scale)
    cols = []
    for i in range(len(theta)):
        tp = theta.copy(); tp[i] += h[i]
        tm = theta.copy(); tm[i] -= h[i]
        cols.append(
            (_per_obs_loglik(model, tp, opts.estimate_gamma)
             - _per_obs_loglik(model, tm, opts.estimate_gamma)) / (2.0 * h[i])
        )
    return np.column_stack(cols)
