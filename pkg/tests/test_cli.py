import csv
import json

import numpy as np
import pytest

from degenflow import cli
from degenflow.experiments import run
from degenflow.report import ConfigError, ExperimentConfig, ExperimentReport, emit


def test_parity_demo_end_to_end(tmp_path, capsys):
    out = tmp_path / "parity.json"
    code = cli.main(["--scenario", "parity-demo", "--m", "16", "--sigma", "0.5", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["all_passed"] is True
    assert doc["metrics"]["even_deviation_from_h"] <= 1e-10
    with open(tmp_path / doc["tables"]["trajectory_even"]) as fh:
        rows = list(csv.reader(fh))
    assert len(rows) - 1 == 32
    with open(tmp_path / doc["tables"]["trajectory_odd"]) as fh:
        assert len(list(csv.reader(fh))) - 1 == 34


def test_spectrum_m2(tmp_path):
    out = tmp_path / "s.json"
    assert cli.main(["--scenario", "spectrum", "--m", "2", "--sigma", "0.5", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    with open(tmp_path / doc["tables"]["spectrum"]) as fh:
        mu = [float(r["mu_k"]) for r in csv.DictReader(fh)]
    np.testing.assert_allclose(mu, [0, 0, 5.65685, 5.65685], atol=1e-5)


def test_rerun_is_byte_identical(tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        out = tmp_path / name
        cli.main(["--scenario", "viscosity-limit", "--m", "33", "--sigma", "0.5", "--t-final", "0.1",
                  "--h-step", "0.01", "--seed", "3", "--out", str(out)])
        outs.append(out.read_text().replace(name.split(".")[0] + ".", ""))
    assert outs[0] == outs[1]


@pytest.mark.parametrize(
    "argv",
    [
        ["--scenario", "spectrum", "--m", "4"],
        ["--scenario", "spectrum", "--m", "4", "--sigma", "1.5"],
        ["--scenario", "kernel-exponent", "--m", "32", "--eps", "0.5"],
        ["--scenario", "flows-compare", "--m", "5", "--sigma", "0.5"],
        ["--scenario", "nope", "--m", "4"],
    ],
)
def test_usage_errors_write_nothing(tmp_path, argv):
    out = tmp_path / "x.json"
    with pytest.raises(SystemExit) as exc:
        cli.main(argv + ["--out", str(out)])
    assert exc.value.code == 2
    assert list(tmp_path.iterdir()) == []


def test_failing_check_sets_exit_code(tmp_path):
    # pairwise distinctness of the flow limits does not hold on equal-measure blocks
    code = cli.main(["--scenario", "flows-compare", "--m", "16", "--sigma", "0.5", "--out", str(tmp_path / "f.json")])
    assert code == 1


def test_empty_report_is_valid_json(tmp_path):
    out = tmp_path / "e.json"
    emit(ExperimentReport("spectrum", {}), out)
    doc = json.loads(out.read_text())
    assert doc["metrics"] == {} and doc["all_passed"] is True


def test_non_finite_metric_rejected(tmp_path):
    rep = ExperimentReport("spectrum", {}, metrics={"x": float("nan")})
    with pytest.raises(FloatingPointError):
        emit(rep, tmp_path / "n.json")
    assert list(tmp_path.iterdir()) == []


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig("gamma-report", m=512, sigma=0.5).validate()
    with pytest.raises(ConfigError):
        ExperimentConfig("viscosity-limit", m=33, sigma=0.5).validate()
    cfg = ExperimentConfig("spectrum", m=6, sigma=0.5).validate()
    assert "output_path" not in cfg.as_dict()


def test_run_deterministic():
    cfg = ExperimentConfig("flows-compare", m=8, sigma=0.5, seed=4)
    assert run(cfg).metrics == run(cfg).metrics


def test_unwritable_path(tmp_path):
    target = tmp_path / "file"
    target.write_text("")
    with pytest.raises(OSError):
        emit(ExperimentReport("spectrum", {}), target / "sub" / "r.json")
