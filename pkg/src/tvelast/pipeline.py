"""End-to-end workflow: transforms, pretests, stability, state-space fit.

run_pipeline executes, in order: twelve-month growth transform, ADF tests on
the growth series and their first differences, demeaning, the no-intercept
OLS with CUSUM and recursive-coefficient diagnostics, the ML state-space
fit, the derived state paths / decade averages / shock series, and the
expanding sub-sample table. Every failure is re-raised annotated with the
stage that produced it. The Report serializes to one JSON document plus
fixed-name CSV files per table and figure.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__, regress, sspace, unitroot
from .errors import NoConvergence, OutOfRange, SectionMissing, StageError, TooShort, TvelastError
from .series import (
    Dataset,
    DecadeAverage,
    MonthDate,
    MonthlySeries,
    decade_averages,
    demean,
    window,
    write_csv,
    yoy_growth,
)

MIN_MONTHS_FOR_ADF = 60  # five years of monthly data before unit-root pretests

FIGURE_FILES = {
    "table1": "table1_adf.csv",
    "table2": "table2_ols.csv",
    "table3": "table3_sspace.csv",
    "fig3": "fig3_cusum.csv",
    "fig4": "fig4_recursive.csv",
    "fig5": "fig5_state_path.csv",
    "fig6": "fig6_decades.csv",
    "fig7": "fig7_subsample.csv",
    "fig8": "fig8_shocks.csv",
    "appendixA1": "appendixA1_subsamples.csv",
}


@dataclass(frozen=True)
class PipelineConfig:
    growth_mode: str = "log-diff"  # or "pct-change"
    adf_levels_deterministic: str = "constant+trend"
    adf_diff_deterministic: str = "constant"
    adf_max_lags: int | None = None
    adf_selection: str = "schwarz"
    cusum_significance: float = 0.05
    subsample_end_dates: tuple[MonthDate, ...] = ()
    decade_path: str = "filtered"  # or "onestep" / "smoothed"
    demean_scope: str = "window"  # sub-samples re-demean; "full" reuses the full mean
    mle: sspace.MleOptions = sspace.MleOptions()
    seed: int = 0

    def __post_init__(self):
        dates = tuple(self.subsample_end_dates)
        if any(b <= a for a, b in zip(dates, dates[1:])):
            raise ValueError("subsample_end_dates must be strictly increasing")
        if self.decade_path not in ("onestep", "filtered", "smoothed"):
            raise ValueError(f"unknown decade_path {self.decade_path!r}")
        if self.demean_scope not in ("window", "full"):
            raise ValueError(f"unknown demean_scope {self.demean_scope!r}")
        object.__setattr__(self, "subsample_end_dates", dates)

    def to_dict(self) -> dict:
        return {
            "growth_mode": self.growth_mode,
            "adf_levels_deterministic": self.adf_levels_deterministic,
            "adf_diff_deterministic": self.adf_diff_deterministic,
            "adf_max_lags": self.adf_max_lags,
            "adf_selection": self.adf_selection,
            "cusum_significance": self.cusum_significance,
            "subsample_end_dates": [str(d) for d in self.subsample_end_dates],
            "decade_path": self.decade_path,
            "demean_scope": self.demean_scope,
            "mle": {
                "max_iter": self.mle.max_iter,
                "grad_tol": self.mle.grad_tol,
                "rel_tol": self.mle.rel_tol,
                "fd_scale": self.mle.fd_scale,
                "estimate_gamma": self.mle.estimate_gamma,
            },
            "seed": self.seed,
        }


@dataclass(frozen=True)
class AdfTableRow:
    variable: str
    form: str  # "level" or "first_difference"
    result: unitroot.AdfResult


@dataclass(frozen=True)
class SubSampleRow:
    sample_start: MonthDate
    sample_end: MonthDate
    final_state: float
    final_rmse: float
    z: float
    p_value: float
    converged: bool

    def to_dict(self) -> dict:
        return {
            "sample_start": str(self.sample_start),
            "sample_end": str(self.sample_end),
            "final_state": self.final_state,
            "final_rmse": self.final_rmse,
            "z": self.z,
            "p_value": self.p_value,
            "converged": self.converged,
        }


@dataclass(frozen=True)
class StatePaths:
    start: MonthDate
    onestep: tuple[float, ...]
    filtered: tuple[float, ...]
    smoothed: tuple[float, ...]


@dataclass
class Report:
    """All pipeline outputs; absent sections carry a reason in `skipped`."""

    growth_y: MonthlySeries | None = None
    growth_x: MonthlySeries | None = None
    demeaned_y: MonthlySeries | None = None
    demeaned_x: MonthlySeries | None = None
    y_mean: float | None = None
    x_mean: float | None = None
    adf_table: list[AdfTableRow] | None = None
    ols: regress.OlsResult | None = None
    cusum: regress.CusumResult | None = None
    recursive: regress.RecursivePath | None = None
    mle: sspace.MleResult | None = None
    state_paths: StatePaths | None = None
    decades: list[DecadeAverage] | None = None
    shocks: MonthlySeries | None = None
    shock_burn_in: int = 0
    subsample_table: list[SubSampleRow] | None = None
    skipped: dict[str, str] = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def to_dict(self, include_timestamp: bool = True) -> dict:
        prov = dict(self.provenance)
        if not include_timestamp:
            prov.pop("created_at", None)
        return {
            "transform": _maybe(self.growth_y, lambda _: {
                "y_mean": self.y_mean,
                "x_mean": self.x_mean,
                "growth_y": _series_dict(self.growth_y),
                "growth_x": _series_dict(self.growth_x),
                "demeaned_y": _series_dict(self.demeaned_y),
                "demeaned_x": _series_dict(self.demeaned_x),
            }),
            "adf_table": _maybe(self.adf_table, lambda rows: [
                {"variable": r.variable, "form": r.form, **r.result.to_dict()}
                for r in rows
            ]),
            "ols": _maybe(self.ols, lambda o: o.to_dict()),
            "cusum": _maybe(self.cusum, lambda c: c.to_dict()),
            "recursive": _maybe(self.recursive, lambda r: r.to_dict()),
            "mle": _maybe(self.mle, lambda m: m.to_dict()),
            "state_paths": _maybe(self.state_paths, lambda p: {
                "start": str(p.start),
                "onestep": list(p.onestep),
                "filtered": list(p.filtered),
                "smoothed": list(p.smoothed),
            }),
            "decades": _maybe(self.decades, lambda ds: [
                {"label": d.label, "first": str(d.first), "last": str(d.last), "mean": d.mean}
                for d in ds
            ]),
            "shocks": _maybe(self.shocks, lambda s: {
                **_series_dict(s), "n_burn_in": self.shock_burn_in,
            }),
            "subsample_table": _maybe(self.subsample_table, lambda rows: [
                r.to_dict() for r in rows
            ]),
            "skipped": dict(sorted(self.skipped.items())),
            "provenance": prov,
        }

    def to_json(self, include_timestamp: bool = True) -> str:
        return json.dumps(self.to_dict(include_timestamp), sort_keys=True, indent=2)


def _maybe(section, render):
    return None if section is None else render(section)


def _series_dict(s: MonthlySeries) -> dict:
    return {"start": str(s.start), "name": s.name, "values": list(s.values)}


def run_pipeline(data: Dataset, cfg: PipelineConfig = PipelineConfig()) -> Report:
    """Run the full battery on a validated dataset; see the module docstring."""
    report = Report()
    report.provenance = {
        "data_sha256": hashlib.sha256(write_csv(data).encode()).hexdigest(),
        "config_sha256": hashlib.sha256(
            json.dumps(cfg.to_dict(), sort_keys=True).encode()
        ).hexdigest(),
        "created_at": datetime.now(timezone.utc).isoformat(),
        "version": __version__,
    }

    with _stage("transform"):
        growth_y = yoy_growth(data.y_raw, cfg.growth_mode)
        growth_x = yoy_growth(data.x_raw, cfg.growth_mode)
        report.growth_y, report.growth_x = growth_y, growth_x

    with _stage("adf"):
        if len(data) < MIN_MONTHS_FOR_ADF:
            raise TooShort(
                f"dataset has {len(data)} months; unit-root pretesting "
                f"requires at least {MIN_MONTHS_FOR_ADF}"
            )
        report.adf_table = adf_battery(growth_y, growth_x, cfg)

    with _stage("demean"):
        dm_y, y_mean = demean(growth_y)
        dm_x, x_mean = demean(growth_x)
        report.demeaned_y, report.demeaned_x = dm_y, dm_x
        report.y_mean, report.x_mean = y_mean, x_mean

    with _stage("ols"):
        report.ols = regress.ols_no_intercept(dm_y, dm_x)

    with _stage("stability"):
        report.cusum = regress.cusum(dm_y, dm_x, cfg.cusum_significance)
        report.recursive = regress.recursive_coefficients(dm_y, dm_x)

    with _stage("sspace"):
        model = sspace.TvpModel(dm_y, dm_x)
        report.mle = sspace.fit_mle(model, options=cfg.mle)
        out = sspace.kalman_filter(model, report.mle.params)
        smoothed, _ = sspace.kalman_smoother(model, report.mle.params, out)
        report.state_paths = StatePaths(
            start=dm_y.start,
            onestep=out.pred_mean,
            filtered=out.filt_mean,
            smoothed=smoothed,
        )
        path_values = {
            "onestep": out.pred_mean,
            "filtered": out.filt_mean,
            "smoothed": smoothed,
        }[cfg.decade_path]
        report.decades = decade_averages(
            MonthlySeries(dm_y.start, path_values, name=f"elasticity_{cfg.decade_path}")
        )
        report.shocks = sspace.innovation_shocks(out)
        report.shock_burn_in = out.n_diffuse_dropped

    if not cfg.subsample_end_dates:
        report.skipped["subsample_table"] = "no end dates configured"
    else:
        with _stage("subsample"):
            report.subsample_table = subsample_final_states(
                data, list(cfg.subsample_end_dates), cfg
            )
    return report



class _stage:
    """Re-raise any package error with the pipeline stage attached."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and isinstance(exc, TvelastError):
            raise StageError(self.name, str(exc)) from exc
        return False


def adf_battery(growth_y: MonthlySeries, growth_x: MonthlySeries,
                 cfg: PipelineConfig) -> list[AdfTableRow]:
    level_spec = unitroot.AdfSpec(
        deterministic=cfg.adf_levels_deterministic,
        max_lags=cfg.adf_max_lags, selection=cfg.adf_selection,
    )
    diff_spec = unitroot.AdfSpec(
        deterministic=cfg.adf_diff_deterministic,
        max_lags=cfg.adf_max_lags, selection=cfg.adf_selection,
    )
    rows = []
    for s in (growth_x, growth_y):
        rows.append(AdfTableRow(s.name, "level", unitroot.adf(s, level_spec)))
        diffs = MonthlySeries(
            s.start.plus(1),
            tuple(b - a for a, b in zip(s.values, s.values[1:])),
            name=f"d({s.name})",
        )
        rows.append(AdfTableRow(s.name, "first_difference", unitroot.adf(diffs, diff_spec)))
    return rows


def subsample_final_states(data: Dataset, end_dates: list[MonthDate],
                           cfg: PipelineConfig = PipelineConfig()) -> list[SubSampleRow]:
    """Expanding-window final states: one ML fit per end date.

    Each window spans the dataset start through the end date; the growth
    series is re-demeaned inside the window unless cfg.demean_scope is
    "full". A failed fit is recorded in its row with converged=False and
    never aborts the table.
    """
    for e in end_dates:
        if data.start.months_until(e) < 24:
            raise OutOfRange(f"end date {e} is less than 24 months after {data.start}")
        if e > data.end:
            raise OutOfRange(f"end date {e} is beyond the data span ({data.end})")
    growth_y = yoy_growth(data.y_raw, cfg.growth_mode)
    growth_x = yoy_growth(data.x_raw, cfg.growth_mode)
    _, full_y_mean = demean(growth_y)
    _, full_x_mean = demean(growth_x)

    rows = []
    for e in sorted(end_dates):
        wy = window(growth_y, growth_y.start, e)
        wx = window(growth_x, growth_x.start, e)
        if cfg.demean_scope == "window":
            dm_y, _ = demean(wy)
            dm_x, _ = demean(wx)
        else:
            dm_y = MonthlySeries(wy.start, tuple(v - full_y_mean for v in wy.values), wy.name)
            dm_x = MonthlySeries(wx.start, tuple(v - full_x_mean for v in wx.values), wx.name)
        fit = None
        try:
            fit = sspace.fit_mle(sspace.TvpModel(dm_y, dm_x), options=cfg.mle)
        except NoConvergence as exc:
            fit = exc.result
        except TvelastError:
            fit = None
        if fit is not None:
            rows.append(SubSampleRow(
                sample_start=data.start, sample_end=e,
                final_state=fit.final_state, final_rmse=fit.final_rmse,
                z=fit.final_z, p_value=fit.final_p, converged=fit.converged,
            ))
        else:
            rows.append(SubSampleRow(
                sample_start=data.start, sample_end=e,
                final_state=math.nan, final_rmse=math.nan,
                z=math.nan, p_value=1.0, converged=False,
            ))
    return rows


# --- tabular output -------------------------------------------------------------


def emit_figure_data(report: Report, which: str) -> str:
    """Plot-ready CSV text for one figure or table id (see FIGURE_FILES)."""
    if which not in FIGURE_FILES:
        raise ValueError(f"unknown figure id {which!r}; know {sorted(FIGURE_FILES)}")
    builder = {
        "table1": _emit_table1,
        "table2": _emit_table2,
        "table3": _emit_table3,
        "fig3": _emit_fig3,
        "fig4": _emit_fig4,
        "fig5": _emit_fig5,
        "fig6": _emit_fig6,
        "fig7": _emit_fig7,
        "fig8": _emit_fig8,
        "appendixA1": _emit_appendix,
    }[which]
    return builder(report)


def write_report(report: Report, outdir) -> list[str]:
    """Write report.json plus every available table/figure CSV; returns paths."""
    from pathlib import Path

    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    path = out / "report.json"
    path.write_text(report.to_json(), encoding="utf-8")
    written.append(str(path))
    for which, fname in FIGURE_FILES.items():
        try:
            text = emit_figure_data(report, which)
        except SectionMissing:
            continue
        path = out / fname
        path.write_text(text, encoding="utf-8")
        written.append(str(path))
    return written


def _need(section, name: str, report: Report):
    if section is None:
        reason = report.skipped.get(name, "stage did not run")
        raise SectionMissing(f"section {name!r} unavailable: {reason}")
    return section


def _csv_text(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt_cell(c) for c in row])
    return buf.getvalue()


def _fmt_cell(c):
    # repr of a plain float is shortest-roundtrip; numpy scalars would
    # render as np.float64(...), so coerce first
    if isinstance(c, float):
        return repr(float(c))
    return c


def _emit_table1(report: Report) -> str:
    rows = _need(report.adf_table, "adf_table", report)
    return _csv_text(
        ["variable", "form", "statistic", "p_value", "chosen_lags",
         "crit_1", "crit_5", "crit_10", "reject_at", "n_used"],
        [[r.variable, r.form, r.result.statistic, r.result.p_value_approx,
          r.result.chosen_lags, r.result.crit_1, r.result.crit_5, r.result.crit_10,
          "" if r.result.reject_at is None else r.result.reject_at, r.result.n_used]
         for r in rows],
    )


def _emit_table2(report: Report) -> str:
    o = _need(report.ols, "ols", report)
    d = o.to_dict()
    keys = sorted(d)
    return _csv_text(keys, [[d[k] for k in keys]])


def _emit_table3(report: Report) -> str:
    m = _need(report.mle, "mle", report)
    row = {
        "log_var_meas": m.params.log_var_meas,
        "log_var_meas_se": m.robust_se[0],
        "log_var_meas_z": m.z_stats[0],
        "log_var_meas_p": m.p_values[0],
        "log_var_state": m.params.log_var_state,
        "log_var_state_se": m.robust_se[1],
        "log_var_state_z": m.z_stats[1],
        "log_var_state_p": m.p_values[1],
        "var_meas": m.var_meas,
        "var_state": m.var_state,
        "final_state": m.final_state,
        "final_rmse": m.final_rmse,
        "final_z": m.final_z,
        "final_p": m.final_p,
        "log_lik": m.log_lik,
        "aic": m.aic,
        "sic": m.sic,
        "hq": m.hq,
        "n_obs": m.n_obs,
        "n_iter": m.n_iter,
        "converged": m.converged,
    }
    keys = list(row)
    return _csv_text(keys, [[row[k] for k in keys]])


def _emit_fig3(report: Report) -> str:
    c = _need(report.cusum, "cusum", report)
    y = _need(report.demeaned_y, "transform", report)
    # statistic index i sits at observation k + i (1-based)
    start = y.start.plus(regress.N_REGRESSORS - 1)
    rows = [[str(start.plus(i)), c.statistic[i], c.band_lo[i], c.band_hi[i]]
            for i in range(len(c.statistic))]
    return _csv_text(["date", "cusum", "band_lo", "band_hi"], rows)


def _emit_fig4(report: Report) -> str:
    r = _need(report.recursive, "recursive", report)
    y = _need(report.demeaned_y, "transform", report)
    start = y.start.plus(r.start_index - 1)
    rows = [[str(start.plus(i)), r.coefs[i], r.bands_lo[i], r.bands_hi[i]]
            for i in range(len(r.coefs))]
    return _csv_text(["date", "coef", "band_lo", "band_hi"], rows)


def _emit_fig5(report: Report) -> str:
    p = _need(report.state_paths, "state_paths", report)
    rows = [[str(p.start.plus(i)), p.onestep[i], p.filtered[i], p.smoothed[i]]
            for i in range(len(p.filtered))]
    return _csv_text(["date", "sv1_onestep", "sv1_filtered", "sv1_smoothed"], rows)


def _emit_fig6(report: Report) -> str:
    ds = _need(report.decades, "decades", report)
    rows = [[d.label, str(d.first), str(d.last), d.mean] for d in ds]
    return _csv_text(["decade", "first", "last", "mean"], rows)


def _emit_fig7(report: Report) -> str:
    rows = _need(report.subsample_table, "subsample_table", report)
    return _csv_text(
        ["sample_end", "final_state"],
        [[str(r.sample_end), r.final_state] for r in rows],
    )


def _emit_fig8(report: Report) -> str:
    s = _need(report.shocks, "shocks", report)
    rows = [[str(s.start.plus(i)), s.values[i], 1 if i < report.shock_burn_in else 0]
            for i in range(len(s.values))]
    return _csv_text(["date", "shock", "in_burn_in"], rows)


def _emit_appendix(report: Report) -> str:
    rows = _need(report.subsample_table, "subsample_table", report)
    return _csv_text(
        ["sample_start", "sample_end", "final_state", "final_rmse", "z", "p_value", "converged"],
        [[str(r.sample_start), str(r.sample_end), r.final_state, r.final_rmse,
          r.z, r.p_value, 1 if r.converged else 0] for r in rows],
    )


def adf_table_text(rows: list[AdfTableRow]) -> str:
    """Aligned text block in the shape of a levels/first-difference table."""
    lines = [f"{'Variable':24}{'Levels':>12}{'p-value':>10}{'First Diff.':>14}{'p-value':>10}"]
    by_var: dict[str, dict[str, unitroot.AdfResult]] = {}
    for r in rows:
        by_var.setdefault(r.variable, {})[r.form] = r.result
    for var, forms in by_var.items():
        lev = forms.get("level")
        dif = forms.get("first_difference")
        lines.append(
            f"{var:24}"
            f"{lev.statistic if lev else math.nan:>12.5f}"
            f"{lev.p_value_approx if lev else math.nan:>10.4f}"
            f"{dif.statistic if dif else math.nan:>14.5f}"
            f"{(dif.p_value_approx if dif else math.nan):>9.4f}{dif.stars() if dif else '':<3}"
        )
    crit = rows[0].result
    lines.append(
        f"Critical values (levels, n={crit.n_used}): "
        f"1% {crit.crit_1:.4f}; 5% {crit.crit_5:.4f}; 10% {crit.crit_10:.4f}"
    )
    return "\n".join(lines)
