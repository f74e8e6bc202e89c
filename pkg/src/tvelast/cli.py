"""Command-line front end.

One subcommand per analysis surface: validate, adf, ols, cusum, recursive,
sspace, pipeline, subsample, simulate. Results go to standard output or to
files under --out; diagnostics go to standard error. Exit codes: 0 success,
1 data/validation error, 2 estimation failure, 64 usage error.

Configuration precedence for the pipeline subcommands is built-in defaults,
then a JSON --config file, then explicit command-line flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__, pipeline, regress, simlab, sspace, unitroot
from .errors import DataError, EstimationError, StageError, TvelastError
from .series import CsvSchema, MonthDate, demean, parse_csv, yoy_growth

EXIT_OK = 0
EXIT_DATA = 1
EXIT_ESTIMATION = 2
EXIT_USAGE = 64

_GROWTH_MODES = {"logdiff": "log-diff", "pct": "pct-change"}


class _Parser(argparse.ArgumentParser):
    """argparse with the conventional 64 exit code for usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="tvelast",
        description="Money-growth/inflation elasticity toolkit: OLS stability "
                    "diagnostics, ADF pretests, and a time-varying-coefficient "
                    "state-space model.",
    )
    parser.add_argument("--version", action="version", version=f"tvelast {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    def add_io(p, need_input=True):
        if need_input:
            p.add_argument("--input", required=True, help="CSV of monthly levels (date,y,x)")
        p.add_argument("--format", choices=["json", "csv", "text"], default="json",
                       help="output format (default json)")
        p.add_argument("--date-col", default="date", help="name of the date column")
        p.add_argument("--y-col", default=None, help="price-index column (default: first value column)")
        p.add_argument("--x-col", default=None, help="money-stock column (default: second value column)")

    def add_growth(p):
        p.add_argument("--growth-mode", choices=sorted(_GROWTH_MODES), default=None,
                       help="12-month growth definition (default logdiff)")

    p = sub.add_parser("validate", help="parse and validate a CSV, print a summary")
    add_io(p)

    p = sub.add_parser("adf", help="ADF tests on growth levels and first differences")
    add_io(p)
    add_growth(p)
    p.add_argument("--max-lags", type=int, default=None, help="largest augmentation lag")
    p.add_argument("--deterministic-levels", choices=unitroot.DETERMINISTIC_CASES,
                   default=None, help="deterministic terms for the level tests")
    p.add_argument("--deterministic-diffs", choices=unitroot.DETERMINISTIC_CASES,
                   default=None, help="deterministic terms for the difference tests")

    p = sub.add_parser("ols", help="no-intercept OLS on the demeaned growth series")
    add_io(p)
    add_growth(p)

    p = sub.add_parser("cusum", help="CUSUM parameter-stability test")
    add_io(p)
    add_growth(p)
    p.add_argument("--cusum-sig", type=float, default=None,
                   help="significance level: 0.01, 0.05 or 0.10 (default 0.05)")

    p = sub.add_parser("recursive", help="recursive coefficient path")
    add_io(p)
    add_growth(p)

    p = sub.add_parser("sspace", help="ML fit of the time-varying-coefficient model")
    add_io(p)
    add_growth(p)
    p.add_argument("--max-iter", type=int, default=None, help="optimizer iteration cap")
    p.add_argument("--estimate-gamma", action="store_true",
                   help="also estimate the state transition coefficient")

    p = sub.add_parser("pipeline", help="run the full battery and write all outputs")
    add_io(p)
    add_growth(p)
    p.add_argument("--out", default=None, help="output directory (default: report JSON to stdout)")
    p.add_argument("--config", default=None, help="JSON file with PipelineConfig overrides")
    p.add_argument("--cusum-sig", type=float, default=None)
    p.add_argument("--max-lags", type=int, default=None)
    p.add_argument("--subsample-ends", default=None,
                   help="comma-separated end months, e.g. 2000-12,2005-12")
    p.add_argument("--seed", type=int, default=None, help="recorded in provenance")

    p = sub.add_parser("subsample", help="expanding-window final-state table")
    add_io(p)
    add_growth(p)
    p.add_argument("--subsample-ends", required=True,
                   help="comma-separated end months, e.g. 2000-12,2005-12")
    p.add_argument("--out", default=None, help="write appendixA1_subsamples.csv here")

    p = sub.add_parser("simulate", help="Monte Carlo studies of the estimators")
    p.add_argument("study", choices=["mle", "adf-size", "adf-power", "cusum-size", "cusum-power"])
    p.add_argument("--reps", type=int, default=200, help="number of replications")
    p.add_argument("--seed", type=int, default=0, help="master seed; replication r uses seed XOR r")
    p.add_argument("--t", type=int, default=None, help="sample size per replication")
    p.add_argument("--dump", default=None, help="write per-replication records to this CSV")
    p.add_argument("--format", choices=["json", "csv", "text"], default="json")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except FileNotFoundError as exc:
        print(f"tvelast: no such file: {exc.filename or exc}", file=sys.stderr)
        return EXIT_DATA
    except StageError as exc:
        print(f"tvelast: {exc}", file=sys.stderr)
        cause = exc.__cause__
        return EXIT_DATA if isinstance(cause, DataError) else EXIT_ESTIMATION
    except DataError as exc:
        print(f"tvelast: {exc}", file=sys.stderr)
        return EXIT_DATA
    except EstimationError as exc:
        print(f"tvelast: {exc}", file=sys.stderr)
        return EXIT_ESTIMATION
    except TvelastError as exc:
        print(f"tvelast: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"tvelast: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _dispatch(args) -> int:
    if args.command == "validate":
        return _cmd_validate(args)
    if args.command == "adf":
        return _cmd_adf(args)
    if args.command in ("ols", "cusum", "recursive", "sspace"):
        return _cmd_single(args)
    if args.command == "pipeline":
        return _cmd_pipeline(args)
    if args.command == "subsample":
        return _cmd_subsample(args)
    if args.command == "simulate":
        return _cmd_simulate(args)
    raise AssertionError(f"unhandled command {args.command}")


def _load(args):
    schema = CsvSchema(date=args.date_col, y=args.y_col, x=args.x_col)
    with open(args.input, "rb") as fh:
        return parse_csv(fh, schema)


def _growth_pair(args, data):
    mode = _GROWTH_MODES[args.growth_mode or "logdiff"]
    return yoy_growth(data.y_raw, mode), yoy_growth(data.x_raw, mode)


def _emit(args, payload: dict, text: str | None = None) -> int:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    elif args.format == "csv":
        keys = sorted(payload)
        print(",".join(keys))
        print(",".join(_csv_cell(payload[k]) for k in keys))
    else:
        print(text if text is not None else json.dumps(payload, sort_keys=True, indent=2))
    return EXIT_OK


def _csv_cell(v) -> str:
    if isinstance(v, float):
        return repr(float(v))
    if v is None:
        return ""
    text = str(v)
    return '"' + text.replace('"', '""') + '"' if "," in text else text


def _cmd_validate(args) -> int:
    data = _load(args)
    payload = {
        "rows": len(data),
        "start": str(data.start),
        "end": str(data.end),
        "y_column": data.y_raw.name,
        "x_column": data.x_raw.name,
        "valid": True,
    }
    text = (f"{args.input}: {len(data)} months {data.start}..{data.end} "
            f"({data.y_raw.name}, {data.x_raw.name}); all checks passed")
    return _emit(args, payload, text)


def _cmd_adf(args) -> int:
    data = _load(args)
    gy, gx = _growth_pair(args, data)
    cfg = pipeline.PipelineConfig(
        adf_levels_deterministic=args.deterministic_levels or "constant+trend",
        adf_diff_deterministic=args.deterministic_diffs or "constant",
        adf_max_lags=args.max_lags,
    )
    rows = pipeline.adf_battery(gy, gx, cfg)
    if args.format == "csv":
        rep = pipeline.Report(adf_table=rows)
        print(pipeline.emit_figure_data(rep, "table1"), end="")
        return EXIT_OK
    payload = [{"variable": r.variable, "form": r.form, **r.result.to_dict()} for r in rows]
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        print(pipeline.adf_table_text(rows))
    return EXIT_OK


def _cmd_single(args) -> int:
    data = _load(args)
    gy, gx = _growth_pair(args, data)
    dm_y, _ = demean(gy)
    dm_x, _ = demean(gx)
    if args.command == "ols":
        res = regress.ols_no_intercept(dm_y, dm_x)
        return _emit(args, res.to_dict(), res.to_text())
    if args.command == "cusum":
        res = regress.cusum(dm_y, dm_x, args.cusum_sig if args.cusum_sig is not None else 0.05)
        text = (f"CUSUM at {res.significance:.0%}: "
                + ("stable (no boundary crossing)" if res.stable
                   else f"unstable; first crossing {res.first_crossing}"))
        return _emit(args, res.to_dict(), text)
    if args.command == "recursive":
        res = regress.recursive_coefficients(dm_y, dm_x)
        text = (f"recursive coefficients over {len(res.coefs)} expanding samples; "
                f"final {res.coefs[-1]:.6f} "
                f"[{res.bands_lo[-1]:.6f}, {res.bands_hi[-1]:.6f}]")
        return _emit(args, res.to_dict(), text)
    # sspace
    opts = sspace.MleOptions(
        max_iter=args.max_iter if args.max_iter is not None else 500,
        estimate_gamma=args.estimate_gamma,
    )
    res = sspace.fit_mle(sspace.TvpModel(dm_y, dm_x), options=opts)
    return _emit(args, res.to_dict(), res.to_text())


def _parse_ends(text: str) -> tuple[MonthDate, ...]:
    return tuple(MonthDate.parse(part) for part in text.split(",") if part.strip())


def _pipeline_config(args) -> pipeline.PipelineConfig:
    settings = pipeline.PipelineConfig().to_dict()
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
        unknown = set(overrides) - set(settings)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        settings.update(overrides)
    if args.growth_mode is not None:
        settings["growth_mode"] = _GROWTH_MODES[args.growth_mode]
    if getattr(args, "cusum_sig", None) is not None:
        settings["cusum_significance"] = args.cusum_sig
    if getattr(args, "max_lags", None) is not None:
        settings["adf_max_lags"] = args.max_lags
    if getattr(args, "subsample_ends", None):
        settings["subsample_end_dates"] = [str(d) for d in _parse_ends(args.subsample_ends)]
    if getattr(args, "seed", None) is not None:
        settings["seed"] = args.seed
    mle = settings.pop("mle")
    return pipeline.PipelineConfig(
        subsample_end_dates=tuple(MonthDate.parse(d) for d in settings.pop("subsample_end_dates")),
        mle=sspace.MleOptions(**mle),
        **settings,
    )


def _cmd_pipeline(args) -> int:
    data = _load(args)
    cfg = _pipeline_config(args)
    report = pipeline.run_pipeline(data, cfg)
    if args.out:
        written = pipeline.write_report(report, args.out)
        for path in written:
            print(path, file=sys.stderr)
    else:
        print(report.to_json())
    return EXIT_OK


def _cmd_subsample(args) -> int:
    data = _load(args)
    cfg = _pipeline_config(args)
    rows = pipeline.subsample_final_states(data, list(_parse_ends(args.subsample_ends)), cfg)
    report = pipeline.Report(subsample_table=rows)
    if args.out:
        from pathlib import Path
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / pipeline.FIGURE_FILES["appendixA1"]
        path.write_text(pipeline.emit_figure_data(report, "appendixA1"), encoding="utf-8")
        print(str(path), file=sys.stderr)
        return EXIT_OK
    if args.format == "csv":
        print(pipeline.emit_figure_data(report, "appendixA1"), end="")
    elif args.format == "json":
        print(json.dumps([r.to_dict() for r in rows], sort_keys=True, indent=2))
    else:
        for r in rows:
            flag = "" if r.converged else "  [no convergence]"
            print(f"{r.sample_start}..{r.sample_end}  final_state={r.final_state:.4f} "
                  f"rmse={r.final_rmse:.4f} p={r.p_value:.4f}{flag}")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    if args.study == "mle":
        t = args.t or 543
        dgp = simlab.TvpDgp(T=t, sigma2_meas=0.016, sigma2_state=0.359)
        summary = simlab.monte_carlo("mle", dgp, args.reps, args.seed, dump_path=args.dump)
    elif args.study == "adf-size":
        dgp = simlab.UnitRootDgp(T=args.t or 500)
        summary = simlab.monte_carlo("adf", dgp, args.reps, args.seed, dump_path=args.dump)
    elif args.study == "adf-power":
        dgp = simlab.Ar1Dgp(T=args.t or 500, phi=0.5)
        summary = simlab.monte_carlo("adf", dgp, args.reps, args.seed, dump_path=args.dump)
    elif args.study == "cusum-size":
        dgp = simlab.BreakRegressionDgp(T=args.t or 200)
        summary = simlab.monte_carlo("cusum", dgp, args.reps, args.seed, dump_path=args.dump)
    else:  # cusum-power
        dgp = simlab.BreakRegressionDgp(T=args.t or 200, beta2=4.0)
        summary = simlab.monte_carlo("cusum", dgp, args.reps, args.seed, dump_path=args.dump)
    if args.format == "text":
        print(f"{summary.estimator}: {summary.n_reps} reps, {summary.n_failed} failed")
        if summary.rejection_rate is not None:
            print(f"rejection rate: {summary.rejection_rate:.4f}")
        for name in summary.bias:
            print(f"{name}: bias={summary.bias[name]:+.4f} rmse={summary.rmse[name]:.4f} "
                  f"median={summary.median[name]:.4f} "
                  f"coverage95={summary.coverage95.get(name, float('nan')):.3f}")
    else:
        print(summary.to_json() if args.format == "json"
              else _summary_csv(summary))
    return EXIT_OK


def _summary_csv(summary: simlab.McSummary) -> str:
    d = summary.to_dict()
    flat = {"estimator": d["estimator"], "n_reps": d["n_reps"], "n_failed": d["n_failed"],
            "rejection_rate": d["rejection_rate"]}
    for group in ("bias", "rmse", "median", "coverage95"):
        for k, v in d[group].items():
            flat[f"{group}_{k}"] = v
    keys = sorted(flat)
    return ",".join(keys) + "\n" + ",".join(_csv_cell(flat[k]) for k in keys)


def render_all_help(width: int = 100) -> str:
    """Deterministic help text for the parser and every subcommand."""
    old = os.environ.get("COLUMNS")
    os.environ["COLUMNS"] = str(width)
    try:
        parser = build_parser()
        chunks = [parser.format_help()]
        subparsers = next(
            a for a in parser._actions if isinstance(a, argparse._SubParsersAction)
        )
        for name, sp in subparsers.choices.items():
            chunks.append(f"===== tvelast {name} =====\n{sp.format_help()}")
        return "\n".join(chunks)
    finally:
        if old is None:
            os.environ.pop("COLUMNS", None)
        else:
            os.environ["COLUMNS"] = old


if __name__ == "__main__":
    sys.exit(main())
