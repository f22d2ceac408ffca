import csv
import json
import math

import numpy as np
import pytest

from realign.cli import main
from realign.criteria import threshold_gamma
from realign.harness import (
    ExperimentConfig,
    SweepPoint,
    SweepResult,
    default_balanced_grid,
    mc_trace_moments,
    run,
    run_criteria_compare,
    run_moments,
    run_oracle_check,
    run_spectrum,
    run_threshold_balanced,
    run_threshold_unbalanced,
    worker_count,
)
from realign.tensor_ops import BipartiteShape


def read_csv(path):
    lines = path.read_text(encoding="utf-8").splitlines()
    header = [ln for ln in lines if ln.startswith("#")]
    body = [ln for ln in lines if not ln.startswith("#")]
    return header, list(csv.DictReader(body))


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(experiment="nope", d=2, s=2),
        dict(experiment="spectrum", d=2, s=2, trials=0),
        dict(experiment="spectrum", d=2, s=2, format="xml"),
        dict(experiment="spectrum", d=2, s=2, seed=-1),
        dict(experiment="threshold_balanced", d=2, s_grid=(3, 2)),
        dict(experiment="threshold_balanced", d=2, s_grid=()),
        dict(experiment="oracle_check", d=2, s=2, p_max=6),
        dict(experiment="spectrum", d1=2, d2=3, s=2),
        dict(experiment="spectrum", s=2),
        dict(experiment="spectrum", d=0, s=2),
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ExperimentConfig(**kwargs)


def test_config_digest_ignores_output_path():
    a = ExperimentConfig("spectrum", d=3, s=3, output_path="a.csv")
    b = ExperimentConfig("spectrum", d=3, s=3, output_path="b.csv")
    c = ExperimentConfig("spectrum", d=3, s=4)
    assert a.digest() == b.digest() != c.digest()


def test_worker_count_env(monkeypatch):
    monkeypatch.setenv("REALIGN_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("REALIGN_THREADS", "0")
    assert worker_count() == 1
    monkeypatch.setenv("REALIGN_THREADS", "x")
    with pytest.raises(ValueError):
        worker_count()


def test_default_balanced_grid():
    grid = default_balanced_grid(20)
    g = threshold_gamma() * 400
    assert len(grid) == 8
    assert grid[0] == round(0.4 * g) and grid[-1] == round(1.4 * g)
    ratios = np.diff(np.log(grid))
    assert np.allclose(ratios, ratios.mean(), rtol=0.05)


def test_spectrum_csv_outputs(tmp_path):
    out = tmp_path / "spec.csv"
    res = run_spectrum(ExperimentConfig("spectrum", d=6, s=6, trials=3, seed=1, output_path=str(out)))
    header, rows = read_csv(out)
    assert header[0].startswith("# realign ")
    assert any("config_sha256=" in h for h in header)
    assert header[-1] == "# schema=bin,left,right,count,density,qc_density_mid"
    assert len(rows) == 64
    assert sum(int(r["count"]) for r in rows) == 3 * 36
    _, moments = read_csv(tmp_path / "spec.moments.csv")
    assert [r["k"] for r in moments] == ["1", "2", "3", "4", "ks_distance", "mean"]
    assert float(moments[-2]["empirical"]) == res.ks
    assert len(res.spectrum) == 108


def test_oracle_check_small_grid(tmp_path):
    for d in (2, 3):
        for s in (2, 3):
            res = run_oracle_check(ExperimentConfig("oracle_check", d=d, s=s, trials=20_000, seed=d * 10 + s))
            assert res.ok, res.rows
            assert len(res.rows) == 4 and len(res.cancellation) == 2


def test_oracle_check_json_exact_strings(tmp_path):
    out = tmp_path / "oracle.json"
    run_oracle_check(ExperimentConfig("oracle_check", d=2, s=5, trials=500, output_path=str(out), format="json"))
    doc = json.loads(out.read_text())
    assert doc["meta"]["schema"][0] == "quantity"
    assert doc["meta"]["config"]["d"] == 2
    qq2 = [r for r in doc["rows"] if r["quantity"] == "Tr(QQ*)^p" and r["p"] == 2][0]
    # 2 d^2 + 2 d^2 / s + 1 + 4/s at d = 2, s = 5
    assert qq2["exact"] == "57/5"
    assert isinstance(qq2["flagged"], bool)


def test_oracle_unbalanced_has_no_q_rows():
    res = run_oracle_check(ExperimentConfig("oracle_check", d1=2, d2=3, s=2, trials=200))
    assert {r["quantity"] for r in res.rows} == {"Tr(RR*)^p"}
    assert res.cancellation == []


def test_mc_trace_moments_rejects_unbalanced_centring():
    with pytest.raises(ValueError):
        mc_trace_moments(BipartiteShape(2, 3, 2), 10, 1, 0, centred=True)


def test_moments_rows(tmp_path):
    out = tmp_path / "m.csv"
    res = run_moments(ExperimentConfig("moments", d=4, s=4, trials=200, p_max=3, output_path=str(out)))
    assert [r["catalan"] for r in res.rows] == [1, 2, 5]
    assert res.rows[0]["exact_normalised"] == 1
    assert res.ok
    _, rows = read_csv(out)
    assert rows[1]["exact_normalised"] == "21/8"  # (2*16 + 2*16/4 + 1 + 1) / 16


def test_threshold_balanced_small(tmp_path):
    out = tmp_path / "sweep.csv"
    res = run_threshold_balanced(
        ExperimentConfig("threshold_balanced", d=4, s_grid=(2, 6, 12, 40), trials=40, output_path=str(out))
    )
    assert [p.s for p in res.points] == [2, 6, 12, 40]
    assert res.fraction(2) == 1.0 and res.fraction(40) == 0.0
    assert res.monotone()
    c = res.crossing()
    assert c is not None and 2 <= c <= 40
    assert res.crossing_ratio() == pytest.approx(c / 16)
    _, rows = read_csv(out)
    assert [int(r["s"]) for r in rows] == [2, 6, 12, 40]
    assert rows[0]["sv_mean"] == ""


def test_sweep_coupling_is_nested():
    # grid points take column prefixes of one n x max(s) draw per trial, so dropping
    # interior grid points leaves the remaining points unchanged
    full = run_threshold_balanced(ExperimentConfig("threshold_balanced", d=3, s_grid=(2, 5, 9), trials=5, seed=4))
    part = run_threshold_balanced(ExperimentConfig("threshold_balanced", d=3, s_grid=(2, 9), trials=5, seed=4))
    assert [full.points[0], full.points[2]] == part.points


def test_threshold_unbalanced_reports_singular_values():
    res = run_threshold_unbalanced(ExperimentConfig("threshold_unbalanced", d1=2, d2=30, trials=10))
    assert [p.s for p in res.points] == list(range(1, 9))
    for p in res.points:
        assert p.sv_mean is not None and p.sv_std >= 0
    assert res.fraction(1) == 1.0


def _pt(s, k, n=100):
    return SweepPoint(s=s, detections=k, trials=n, mean_realignment_value=1.0, std_realignment_value=0.0)


def test_crossing_interpolation_and_monotone():
    res = SweepResult(None, [_pt(10, 100), _pt(20, 80), _pt(30, 20), _pt(40, 0)], scale=100.0)
    assert res.crossing() == pytest.approx(25.0)
    assert res.crossing_ratio() == pytest.approx(0.25)
    assert res.monotone()
    bumpy = SweepResult(None, [_pt(10, 50), _pt(20, 90)], scale=1.0)
    assert not bumpy.monotone()
    assert SweepResult(None, [_pt(10, 100), _pt(20, 90)], 1.0).crossing() is None


def test_criteria_compare_json(tmp_path):
    out = tmp_path / "cmp.json"
    res = run_criteria_compare(ExperimentConfig("criteria_compare", d=3, trials=12, output_path=str(out), format="json"))
    doc = json.loads(out.read_text())
    assert doc["summary"] == res.summary
    assert len(doc["trials"]) == 12
    assert res.summary["realignment_only_violations"] == 0


@pytest.mark.parametrize(
    "cfg",
    [
        dict(experiment="spectrum", d=5, s=5, trials=4),
        dict(experiment="moments", d=3, s=3, trials=30),
        dict(experiment="oracle_check", d=2, s=2, trials=300),
        dict(experiment="threshold_balanced", d=3, s_grid=(2, 4, 8), trials=6),
        dict(experiment="threshold_unbalanced", d1=2, d2=20, s_grid=(3, 6), trials=6),
        dict(experiment="criteria_compare", d=3, s=9, trials=6),
    ],
)
@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_rerun_is_byte_identical_across_pool_sizes(tmp_path, monkeypatch, cfg, fmt):
    blobs = []
    for threads in ("1", "3"):
        monkeypatch.setenv("REALIGN_THREADS", threads)
        out = tmp_path / f"t{threads}.{fmt}"
        run(ExperimentConfig(**cfg, seed=7, output_path=str(out), format=fmt))
        blobs.append(out.read_bytes())
    assert blobs[0] == blobs[1]


def test_cli_success(tmp_path, capsys):
    out = tmp_path / "o.json"
    code = main(["oracle", "--d", "2", "--s", "2", "--trials", "400", "--out", str(out), "--format", "json"])
    assert code == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["experiment"] == "oracle_check"
    assert summary["checks"] == {"z_scores": True, "cancellation": True}
    assert out.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["spectrum", "--d", "x"],
        ["spectrum", "--d", "2"],
        ["threshold", "--d", "2", "--s-grid", "3,2"],
        ["spectrum", "--d1", "2", "--d2", "3", "--s", "2"],
    ],
)
def test_cli_usage_errors_exit_1(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_cli_failed_checks_exit_2(capsys):
    # d = s = 2 is far from the quarter-circle regime, so the KS check fails
    assert main(["spectrum", "--d", "2", "--s", "2", "--trials", "3"]) == 2
    assert json.loads(capsys.readouterr().out)["checks"]["ks_distance"] is False


def test_cli_unwritable_output_exit_1(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["compare", "--d", "2", "--trials", "2", "--out", str(blocker / "x.csv")]) == 1
