"""End-to-end runs of every CLI subcommand."""

import json

import numpy as np
import pytest

from greenstat.cli import main
from greenstat.harness import ingest_csv


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "dist,extra,bivariate",
    [
        ("sas", ["--alpha", "1.5", "--sigma", "2.0"], False),
        ("pos-stable", ["--alpha", "1.2"], False),
        ("gauss2", ["--rho", "0.5"], True),
        ("subgauss", ["--alpha", "1.8", "--rho", "0.3"], True),
        ("chi2-1", [], False),
    ],
)
def test_sample_writes_csv(tmp_path, capsys, dist, extra, bivariate):
    out = tmp_path / "draws.csv"
    code, text, _ = run(
        capsys, "sample", "--dist", dist, *extra, "--n", "50", "--seed", "3", "--out", str(out)
    )
    assert code == 0 and "50" in text
    data = ingest_csv(out)
    assert data.shape == ((50, 2) if bivariate else (50,))
    if dist in ("pos-stable", "chi2-1"):
        assert data.min() > 0.0


def test_sample_round_trip_preserves_values(tmp_path, capsys):
    out = tmp_path / "draws.csv"
    run(capsys, "sample", "--dist", "sas", "--alpha", "1.5", "--n", "20", "--seed", "9", "--out", str(out))
    from greenstat import RngStream, StableSpec, sample_sas

    assert np.array_equal(ingest_csv(out), sample_sas(StableSpec(1.5), 20, RngStream(9)))


def test_stat_kinds(tmp_path, capsys):
    uni = tmp_path / "uni.csv"
    uni.write_text("1.0\n2.0\n")
    code, text, _ = run(capsys, "stat", "--kind", "greenwood", "--in", str(uni))
    assert code == 0
    assert float(text.strip()) == pytest.approx(5.0 / 9.0, abs=1e-12)

    biv = tmp_path / "biv.csv"
    biv.write_text("1.0,2.0\n-1.0,0.0\n")
    code, text, _ = run(capsys, "stat", "--kind", "s1", "--in", str(biv))
    assert float(text.strip()) == pytest.approx(0.625, abs=1e-12)
    code, text, _ = run(capsys, "stat", "--kind", "s2", "--in", str(biv))
    assert float(text.strip()) == pytest.approx(26.0 / 36.0, abs=1e-12)

    code, text, _ = run(capsys, "stat", "--kind", "beta", "--cov", "2,0,1")
    assert float(text.strip()) == pytest.approx(0.5, abs=1e-12)


def test_stat_prints_15_significant_digits(tmp_path, capsys):
    uni = tmp_path / "uni.csv"
    uni.write_text("1.0\n2.0\n3.0\n")
    _, text, _ = run(capsys, "stat", "--kind", "greenwood", "--in", str(uni))
    assert text.strip() == f"{14.0 / 36.0:.15g}"


def test_quantile_table_cache_schema(tmp_path, capsys):
    cache_dir = tmp_path / "cache"
    code, text, _ = run(
        capsys,
        "quantile-table",
        "--stat", "s1", "--null", "gauss", "--n", "30",
        "--levels", "0.9,0.95,0.99", "--reps", "300", "--seed", "7",
        "--cache-dir", str(cache_dir),
    )
    assert code == 0
    payload = json.loads(text)
    files = list(cache_dir.glob("*.json"))
    assert len(files) == 1
    stored = json.loads(files[0].read_text())
    assert stored == payload
    assert set(stored) == {"stat_kind", "null", "n", "B", "seed", "levels", "values", "engine_version"}
    assert stored["null"] == {"kind": "subgauss", "alpha_star": 2.0, "rho": 0.0}
    assert stored["values"] == sorted(stored["values"])


def test_test_uni_json(tmp_path, capsys):
    from greenstat import RngStream, StableSpec, sample_sas

    path = tmp_path / "x.csv"
    x = sample_sas(StableSpec(1.2), 100, RngStream(31))
    path.write_text("\n".join(repr(float(v)) for v in x))
    code, text, _ = run(
        capsys,
        "test-uni", "--in", str(path), "--alpha-star", "2", "--alt", "less",
        "--level", "0.05", "--reps", "500", "--seed", "5", "--json",
    )
    assert code == 0
    payload = json.loads(text)
    assert payload["decision"] == "reject"
    assert payload["cache_key"]
    assert payload["region"][0][1] == 1.0


def test_test_biv_variants(tmp_path, capsys):
    from greenstat import RngStream, SubGaussianSpec, sample_sub_gaussian

    path = tmp_path / "xy.csv"
    xy = sample_sub_gaussian(SubGaussianSpec(1.5), 120, RngStream(32))
    path.write_text("\n".join(f"{float(a)!r},{float(b)!r}" for a, b in xy))

    for stat in ("s1", "s2"):
        code, text, _ = run(
            capsys,
            "test-biv", "--in", str(path), "--stat", stat,
            "--reps", "500", "--seed", "5", "--json",
        )
        assert code == 0 and json.loads(text)["statistic"] == stat

    code, text, _ = run(
        capsys,
        "test-biv", "--in", str(path), "--stat", "s1", "--alpha-star", "1.5",
        "--alt", "two-sided", "--reps", "500", "--seed", "5", "--json",
    )
    assert json.loads(text)["null"]["alpha_star"] == 1.5

    code, text, _ = run(
        capsys,
        "test-biv", "--in", str(path), "--stat", "kurt", "--critical", "asymptotic", "--json",
        "--reps", "500",
    )
    assert json.loads(text)["critical_source"] == "asymptotic"

    code, _, err = run(capsys, "test-biv", "--in", str(path), "--stat", "s2", "--alpha-star", "1.5")
    assert code == 2 and "S2" in err


def test_ci_alpha_json(tmp_path, capsys):
    from greenstat import RngStream, StableSpec, sample_sas

    path = tmp_path / "x.csv"
    x = sample_sas(StableSpec(1.8), 120, RngStream(33))
    path.write_text("\n".join(repr(float(v)) for v in x))
    code, text, _ = run(
        capsys,
        "ci-alpha", "--in", str(path), "--level", "0.95", "--grid", "0.2",
        "--reps", "300", "--seed", "5", "--json",
    )
    assert code == 0
    payload = json.loads(text)
    assert payload["lower"] <= payload["upper"] <= 2.0


def test_power_flags_and_csv(tmp_path, capsys):
    out = tmp_path / "power.csv"
    code, text, _ = run(
        capsys,
        "power", "--stats", "s1", "--alphas", "1.8,2.0", "--sizes", "20",
        "--betas", "1.0", "--null-reps", "300", "--alt-reps", "100",
        "--seed", "11", "--out-csv", str(out),
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("statistic,n,alpha")
    assert len(lines) == 3


def test_power_config_file(tmp_path, capsys):
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(
        json.dumps(
            {
                "statistics": ["s2"],
                "alphas": [2.0],
                "sizes": [15],
                "betas": [0.0],
                "null_reps": 200,
                "alt_reps": 100,
                "seed": 12,
            }
        )
    )
    out = tmp_path / "power.csv"
    code, _, _ = run(capsys, "power", "--config", str(cfg_path), "--out-csv", str(out))
    assert code == 0
    assert len(out.read_text().strip().splitlines()) == 2


def test_analyze_full_pipeline(tmp_path, capsys):
    gen = np.random.default_rng(13)
    series = gen.standard_normal((80, 2))
    path = tmp_path / "series.csv"
    path.write_text("u,v\n" + "\n".join(f"{float(a)!r},{float(b)!r}" for a, b in series))
    code, text, _ = run(
        capsys,
        "analyze", "--in", str(path), "--m", "0.2,0,0,0.1",
        "--standardize", "rolling:20", "--tests", "s1,kurt",
        "--reps", "300", "--seed", "4", "--json",
    )
    assert code == 0
    payload = json.loads(text)
    assert payload["var1"]["residual_rows"] == 79
    assert [t["statistic"] for t in payload["tests"]] == ["s1", "mardia-kurtosis"]


def test_analyze_human_output(tmp_path, capsys):
    path = tmp_path / "series.csv"
    path.write_text("\n".join(repr(float(v)) for v in np.random.default_rng(14).standard_normal(60)))
    code, text, _ = run(capsys, "analyze", "--in", str(path), "--reps", "300", "--seed", "4")
    assert code == 0 and "greenwood" in text


def test_errors_exit_2(tmp_path, capsys):
    missing = tmp_path / "missing.csv"
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,nope\n")
    code, _, err = run(capsys, "stat", "--kind", "greenwood", "--in", str(bad))
    assert code == 2 and "line 2" in err
    code, _, err = run(capsys, "test-uni", "--in", str(bad), "--alpha-star", "2")
    assert code == 2
