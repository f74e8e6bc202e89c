import json
import math

import numpy as np
import pytest

from tvelast import regress, sspace
from tvelast.errors import OutOfRange, SectionMissing, StageError
from tvelast.pipeline import (
    FIGURE_FILES,
    PipelineConfig,
    Report,
    emit_figure_data,
    run_pipeline,
    subsample_final_states,
    write_report,
)
from tvelast.series import Dataset, MonthDate, MonthlySeries

from conftest import make_dataset


@pytest.fixture(scope="module")
def report_and_inputs():
    data = make_dataset(n_months=240, seed=42)
    cfg = PipelineConfig(
        subsample_end_dates=(MonthDate(1983, 12), MonthDate(1987, 12), data.end),
    )
    return run_pipeline(data, cfg), data, cfg


class TestRunPipeline:
    def test_all_sections_populated(self, report_and_inputs):
        report, _, _ = report_and_inputs
        d = report.to_dict()
        for key in ("transform", "adf_table", "ols", "cusum", "recursive", "mle",
                    "state_paths", "decades", "shocks", "subsample_table"):
            assert d[key] is not None, key
        assert report.skipped == {}

    def test_skipped_sections_carry_reason(self, dataset):
        report = run_pipeline(dataset, PipelineConfig())
        assert report.subsample_table is None
        assert "subsample_table" in report.skipped

    def test_determinism_excluding_timestamp(self, report_and_inputs):
        report, data, cfg = report_and_inputs
        again = run_pipeline(data, cfg)
        assert report.to_json(include_timestamp=False) == again.to_json(include_timestamp=False)

    def test_short_dataset_fails_at_adf_stage(self):
        data = make_dataset(n_months=59)
        with pytest.raises(StageError) as exc_info:
            run_pipeline(data, PipelineConfig())
        assert exc_info.value.stage == "adf"
        assert "adf" in str(exc_info.value)

    def test_ols_consistent_with_reports_own_series(self, report_and_inputs):
        report, _, _ = report_and_inputs
        redo = regress.ols_no_intercept(report.demeaned_y, report.demeaned_x)
        assert redo.coef == report.ols.coef

    def test_shocks_equal_headline_innovations(self, report_and_inputs):
        report, _, _ = report_and_inputs
        model = sspace.TvpModel(report.demeaned_y, report.demeaned_x)
        out = sspace.kalman_filter(model, report.mle.params)
        redo = sspace.innovation_shocks(out)
        assert redo.values == report.shocks.values

    def test_decades_computed_from_filtered_path(self, report_and_inputs):
        report, _, _ = report_and_inputs
        from tvelast.series import decade_averages
        path = MonthlySeries(report.state_paths.start, report.state_paths.filtered, "p")
        assert [d.mean for d in decade_averages(path)] == [d.mean for d in report.decades]

    def test_provenance_hashes_present(self, report_and_inputs):
        report, _, _ = report_and_inputs
        assert len(report.provenance["data_sha256"]) == 64
        assert len(report.provenance["config_sha256"]) == 64
        assert "created_at" in report.provenance

    def test_growth_mode_flag_respected(self, dataset):
        cfg = PipelineConfig(growth_mode="pct-change")
        report = run_pipeline(dataset, cfg)
        from tvelast.series import yoy_growth
        expect = yoy_growth(dataset.y_raw, "pct-change")
        assert report.growth_y.values == expect.values


class TestSubsampleFinalStates:
    def test_full_span_row_equals_headline(self, report_and_inputs):
        report, data, cfg = report_and_inputs
        last = report.subsample_table[-1]
        assert last.sample_end == data.end
        assert last.final_state == report.mle.final_state
        assert last.final_rmse == report.mle.final_rmse
        assert last.z == report.mle.final_z
        assert last.p_value == report.mle.final_p

    def test_rows_ordered_and_prefix_extending(self, report_and_inputs):
        report, data, _ = report_and_inputs
        ends = [r.sample_end for r in report.subsample_table]
        assert ends == sorted(ends)
        assert all(r.sample_start == data.start for r in report.subsample_table)

    def test_end_date_too_early_rejected(self, dataset):
        with pytest.raises(OutOfRange):
            subsample_final_states(dataset, [dataset.start.plus(23)])

    def test_end_date_beyond_span_rejected(self, dataset):
        with pytest.raises(OutOfRange):
            subsample_final_states(dataset, [dataset.end.plus(1)])

    def test_constant_coefficient_dgp_recovers_truth(self):
        # y growth = alpha * x growth + small noise in logs: the final state
        # should sit within 2 RMSE of the constant elasticity at every end date
        gen = np.random.default_rng(5)
        n = 240
        alpha = 0.8
        gx = gen.normal(0.0, 0.02, n)  # log money-growth innovations
        logm = np.cumsum(gx)
        logp = alpha * logm + gen.normal(0.0, 0.005, n)
        data = Dataset(
            MonthlySeries(MonthDate(1971, 1), tuple(float(v) for v in 100 * np.exp(logp)), "cpi"),
            MonthlySeries(MonthDate(1971, 1), tuple(float(v) for v in 50 * np.exp(logm)), "m2"),
        )
        ends = [MonthDate(1980, 12), MonthDate(1985, 12), MonthDate(1990, 12)]
        rows = subsample_final_states(data, ends)
        for row in rows:
            assert row.converged
            assert abs(row.final_state - alpha) <= 2.0 * row.final_rmse

    def test_failed_fit_recorded_not_fatal(self, monkeypatch):
        data = make_dataset(n_months=120, seed=3)

        def boom(model, init_params=None, options=None):
            raise sspace.NonFiniteObjective("forced failure")

        monkeypatch.setattr(sspace, "fit_mle", boom)
        rows = subsample_final_states(data, [MonthDate(1975, 12)])
        assert len(rows) == 1
        assert not rows[0].converged
        assert math.isnan(rows[0].final_state)


class TestEmitFigureData:
    def test_fig5_schema(self, report_and_inputs):
        report, _, _ = report_and_inputs
        text = emit_figure_data(report, "fig5")
        assert text.splitlines()[0] == "date,sv1_onestep,sv1_filtered,sv1_smoothed"
        assert len(text.splitlines()) == len(report.state_paths.filtered) + 1

    def test_fig3_band_symmetry(self, report_and_inputs):
        report, _, _ = report_and_inputs
        lines = emit_figure_data(report, "fig3").splitlines()
        assert lines[0] == "date,cusum,band_lo,band_hi"
        for line in lines[1:]:
            _, _, lo, hi = line.split(",")
            assert float(lo) == -float(hi)

    def test_fig6_matches_decades_section(self, report_and_inputs):
        report, _, _ = report_and_inputs
        lines = emit_figure_data(report, "fig6").splitlines()[1:]
        assert len(lines) == len(report.decades)
        for line, d in zip(lines, report.decades):
            label, first, last, mean = line.split(",")
            assert label == d.label
            assert float(mean) == d.mean

    def test_fig7_matches_subsample_column(self, report_and_inputs):
        report, _, _ = report_and_inputs
        lines = emit_figure_data(report, "fig7").splitlines()[1:]
        states = [float(line.split(",")[1]) for line in lines]
        assert states == [r.final_state for r in report.subsample_table]

    def test_fig8_burn_in_flag(self, report_and_inputs):
        report, _, _ = report_and_inputs
        lines = emit_figure_data(report, "fig8").splitlines()[1:]
        flags = [int(line.split(",")[2]) for line in lines]
        assert sum(flags) == report.shock_burn_in
        assert flags[0] == 1

    def test_section_missing(self, dataset):
        report = run_pipeline(dataset, PipelineConfig())
        with pytest.raises(SectionMissing):
            emit_figure_data(report, "fig7")

    def test_unknown_figure_id(self, report_and_inputs):
        report, _, _ = report_and_inputs
        with pytest.raises(ValueError):
            emit_figure_data(report, "fig99")


class TestWriteReport:
    def test_writes_all_fixed_names(self, report_and_inputs, tmp_path):
        report, _, _ = report_and_inputs
        written = write_report(report, tmp_path)
        names = {p.split("/")[-1] for p in written}
        assert names == {"report.json", *FIGURE_FILES.values()}
        payload = json.loads((tmp_path / "report.json").read_text())
        assert payload["ols"]["coef"] == report.ols.coef

    def test_csv_cells_are_plain_numbers(self, report_and_inputs, tmp_path):
        # a numpy scalar slipping into a cell would render as np.float64(...)
        report, _, _ = report_and_inputs
        for path in write_report(report, tmp_path):
            name = path.split("/")[-1]
            text = (tmp_path / name).read_text()
            assert "np.float" not in text, name
            if name.endswith(".csv"):
                assert "(" not in text, name

    def test_skipped_sections_not_written(self, dataset, tmp_path):
        report = run_pipeline(dataset, PipelineConfig())
        written = write_report(report, tmp_path)
        names = {p.split("/")[-1] for p in written}
        assert "fig7_subsample.csv" not in names
        assert "appendixA1_subsamples.csv" not in names
