"""CSV ingestion, VAR(1) filtering, standardization, power study and analyze."""

import numpy as np
import pytest

import greenstat as gs
from greenstat import (
    CsvFormatError,
    ParameterError,
    PowerStudyConfig,
    QuantileCache,
    RngStream,
    StableSpec,
    Var1Model,
    greenwood,
    ingest_csv,
    run_power_study,
    s1,
    s2,
    sample_sas,
    standardize,
    var1_residuals,
)


class TestIngest:
    def test_two_columns(self, tmp_path):
        p = tmp_path / "pairs.csv"
        p.write_text("1.0,2.0\n-3.5,0.25\n")
        data = ingest_csv(p)
        assert data.shape == (2, 2) and data[1, 0] == -3.5

    def test_one_column(self, tmp_path):
        p = tmp_path / "series.csv"
        p.write_text("1\n2\n3\n")
        assert ingest_csv(p).shape == (3,)

    def test_header_skipped(self, tmp_path):
        p = tmp_path / "with_header.csv"
        p.write_text("usdpln,cu\n0.1,0.2\n0.3,0.4\n")
        assert ingest_csv(p).shape == (2, 2)

    def test_ragged_row_names_line(self, tmp_path):
        p = tmp_path / "ragged.csv"
        p.write_text("1,2\n3,4,5\n")
        with pytest.raises(CsvFormatError, match="line 2"):
            ingest_csv(p)

    def test_non_numeric_cell_names_line(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1,2\n3,oops\n")
        with pytest.raises(CsvFormatError, match="line 2"):
            ingest_csv(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("")
        with pytest.raises(CsvFormatError, match="no numeric data"):
            ingest_csv(p)

    def test_three_columns_rejected(self, tmp_path):
        p = tmp_path / "wide.csv"
        p.write_text("1,2,3\n4,5,6\n")
        with pytest.raises(CsvFormatError):
            ingest_csv(p)


class TestVar1:
    def test_zero_matrix_shifts_by_one(self):
        series = RngStream(401).generator().standard_normal((10, 2))
        resid = var1_residuals(series, np.zeros((2, 2)))
        assert np.array_equal(resid, series[1:])

    def test_constant_series_arithmetic(self):
        m = np.array([[0.2927, 0.0], [0.0, 0.2100]])
        series = np.ones((5, 2))
        resid = var1_residuals(series, m)
        assert resid.shape == (4, 2)
        assert np.allclose(resid, [0.7073, 0.7900], atol=1e-12)

    def test_round_trip_recovers_innovations(self):
        gen_model = Var1Model(np.array([[0.3, 0.1], [-0.2, 0.4]]))
        innovations = np.column_stack(
            [
                sample_sas(StableSpec(1.7), 300, RngStream(402, 0)),
                sample_sas(StableSpec(1.7), 300, RngStream(402, 1)),
            ]
        )
        series = gen_model.simulate(innovations)
        resid = var1_residuals(series, gen_model)
        assert np.allclose(resid, innovations[1:], rtol=1e-10, atol=1e-10)

    def test_round_trip_alpha_test_retention(self):
        # filtering with the true matrix leaves alpha-stable residuals, so
        # the two-sided test at the true index retains at its nominal rate
        model = Var1Model(np.array([[0.5, 0.2], [0.1, 0.3]]))
        cfg = gs.TestConfig(reps=2000, seed=403, cache=QuantileCache())
        retained = 0
        reps = 300
        for i in range(reps):
            innovations = np.column_stack(
                [
                    sample_sas(StableSpec(1.7), 200, RngStream(404, (i, 0))),
                    sample_sas(StableSpec(1.7), 200, RngStream(404, (i, 1))),
                ]
            )
            series = model.simulate(innovations)
            resid = var1_residuals(series, model)
            retained += not gs.test_alpha_two_sided(resid[:, 0], 1.7, 0.05, cfg).reject
        assert retained / reps >= 0.93

    def test_validation(self):
        with pytest.raises(ParameterError):
            var1_residuals(np.ones((1, 2)), np.zeros((2, 2)))
        with pytest.raises(ParameterError):
            var1_residuals(np.ones((5, 3)), np.zeros((2, 2)))
        with pytest.raises(ParameterError):
            Var1Model(np.ones((2, 3)))


class TestStandardize:
    def test_none_is_identity(self):
        x = RngStream(405).generator().standard_normal((20, 2))
        assert np.array_equal(standardize(x, "none"), x)

    def test_global_scale_preserves_greenwood(self):
        x = sample_sas(StableSpec(1.6), 500, RngStream(406))
        assert greenwood(standardize(x, "global-scale")).value == pytest.approx(
            greenwood(x).value, rel=1e-12
        )

    def test_global_scale_preserves_s1_s2_with_shared_factor(self):
        # both columns hold the same magnitudes, so the per-component
        # scale factors coincide and S1/S2 are unchanged
        x = sample_sas(StableSpec(1.6), 400, RngStream(407))
        xy = np.column_stack([x, x[::-1]])
        scaled = standardize(xy, "global-scale")
        assert s1(scaled).value == pytest.approx(s1(xy).value, rel=1e-12)
        assert s2(scaled).value == pytest.approx(s2(xy).value, rel=1e-12)

    def test_full_window_rolling_equals_global_std(self):
        xy = RngStream(408).generator().standard_normal((50, 2))
        rolled = standardize(xy, "rolling-conditional-std", window=50)
        assert np.allclose(rolled, xy / np.std(xy, axis=0), rtol=1e-12)

    def test_rolling_univariate(self):
        x = RngStream(409).generator().standard_normal(30)
        out = standardize(x, "rolling-conditional-std", window=10)
        assert out.shape == (30,)
        assert out[29] == pytest.approx(x[29] / np.std(x[20:30]))
        # early positions borrow the first full window
        assert out[0] == pytest.approx(x[0] / np.std(x[:10]))

    def test_zero_scale_errors(self):
        with pytest.raises(ParameterError):
            standardize(np.zeros(10), "global-scale")
        flat = np.ones(20)
        with pytest.raises(ParameterError):
            standardize(flat, "rolling-conditional-std", window=5)

    def test_validation(self):
        x = np.ones(10)
        with pytest.raises(ParameterError):
            standardize(x, "rolling-conditional-std", window=1)
        with pytest.raises(ParameterError):
            standardize(x, "rolling-conditional-std", window=11)
        with pytest.raises(ParameterError):
            standardize(x, "winsorize")


@pytest.fixture(scope="module")
def small_cells():
    cfg = PowerStudyConfig(
        statistics=("s1", "s2"),
        alphas=(1.5, 2.0),
        sizes=(30,),
        betas=(0.0, 1.0),
        null_reps=2000,
        alt_reps=200,
        seed=410,
    )
    return cfg, run_power_study(cfg, cache=QuantileCache())


class TestPowerStudy:
    def test_size_row_matches_level(self, small_cells):
        cfg, cells = small_cells
        slack = 3.0 * np.sqrt(cfg.level * 0.95 / cfg.alt_reps) + 1e-9
        for cell in cells:
            if cell.alpha != 2.0:
                continue
            if cell.statistic == "s2" and cell.beta > 0.0:
                # calibrated at the most conservative null (beta = 0)
                assert cell.power <= cfg.level + slack
            else:
                assert abs(cell.power - cfg.level) <= slack

    def test_power_rises_as_alpha_falls(self, small_cells):
        _, cells = small_cells
        for stat in ("s1", "s2"):
            for beta in (0.0, 1.0):
                at = {c.alpha: c.power for c in cells if c.statistic == stat and c.beta == beta}
                assert at[1.5] > at[2.0]

    def test_rows_carry_standard_errors(self, small_cells):
        _, cells = small_cells
        for c in cells:
            assert c.se == pytest.approx(np.sqrt(c.power * (1 - c.power) / c.alt_reps))
            assert 0.0 <= c.power <= 1.0

    def test_deterministic_and_worker_independent(self):
        cfg = PowerStudyConfig(
            statistics=("s1",), alphas=(1.8,), sizes=(20,), betas=(1.0,),
            null_reps=500, alt_reps=100, seed=411,
        )
        a = run_power_study(cfg, cache=QuantileCache(), workers=1)
        b = run_power_study(cfg, cache=QuantileCache(), workers=2)
        assert a == b

    def test_csv_round_trip(self, small_cells, tmp_path):
        _, cells = small_cells
        out = tmp_path / "power.csv"
        gs.power_curve_to_csv(cells, out)
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "statistic,n,alpha,beta,power,se,B1,B0,seed"
        assert len(lines) == len(cells) + 1

    def test_config_validation(self):
        with pytest.raises(ParameterError):
            PowerStudyConfig(statistics=())
        with pytest.raises(ParameterError):
            PowerStudyConfig(statistics=("s3",))
        with pytest.raises(ParameterError):
            PowerStudyConfig(alphas=(2.2,))
        with pytest.raises(ParameterError):
            PowerStudyConfig(alt_reps=50)


class TestAnalyze:
    def test_bivariate_pipeline(self, tmp_path):
        gen = RngStream(412).generator()
        series = gen.standard_normal((120, 2))
        p = tmp_path / "biv.csv"
        p.write_text("a,b\n" + "\n".join(f"{float(u)!r},{float(v)!r}" for u, v in series))
        cfg = gs.AnalyzeConfig(
            m=np.array([[0.2, 0.0], [0.0, 0.1]]),
            standardize_method="rolling-conditional-std",
            window=20,
            tests=("s1", "s2", "kurt"),
            mc=gs.TestConfig(reps=500, seed=413, cache=QuantileCache()),
        )
        report = gs.analyze(p, cfg)
        assert report["rows"] == 120
        assert report["var1"]["residual_rows"] == 119
        assert report["standardize"]["method"] == "rolling-conditional-std"
        assert [t["statistic"] for t in report["tests"]] == ["s1", "s2", "mardia-kurtosis"]
        import json

        json.dumps(report)  # must be serializable

    def test_univariate_pipeline_with_ci(self, tmp_path):
        x = sample_sas(StableSpec(1.8), 150, RngStream(414))
        p = tmp_path / "uni.csv"
        p.write_text("\n".join(repr(float(v)) for v in x))
        cfg = gs.AnalyzeConfig(
            tests=(),
            with_ci=True,
            grid_step=0.25,
            mc=gs.TestConfig(reps=500, seed=415, cache=QuantileCache()),
        )
        report = gs.analyze(p, cfg)
        assert report["tests"][0]["statistic"] == "greenwood"
        ci = report["ci"]["component1"]
        assert ci["lower"] <= ci["upper"] <= 2.0

    def test_unknown_test_rejected(self, tmp_path):
        p = tmp_path / "biv.csv"
        p.write_text("1.0,2.0\n2.0,1.0\n0.5,0.25\n")
        with pytest.raises(ParameterError):
            gs.analyze(p, gs.AnalyzeConfig(tests=("mystery",)))
