"""End-to-end CLI behaviour: determinism, structured errors, file formats."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from approx_sense.cli import main
from approx_sense.dataio import read_sample_csv


def run_cli(*args, capsys=None):
    code = main(list(args))
    out = err = ""
    if capsys is not None:
        captured = capsys.readouterr()
        out, err = captured.out, captured.err
    return code, out, err


def write_json(path, payload):
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


@pytest.fixture()
def train_config(tmp_path):
    return write_json(
        tmp_path / "train.json",
        {
            "schema_version": 1,
            "seed": 7,
            "task": {
                "kind": "synthetic",
                "teacher_weights": [0.5, -0.5],
                "input_law": {"kind": "uniform_box", "halfwidth": 1.0},
                "label_noise_sd": 0.0,
                "m_labelled": 40,
                "m_unlabelled": 60,
            },
            "operator": {"kind": "uniform_quantizer", "step": 0.5, "clamp": 1.0},
            "loss": {"kind": "clipped_absolute", "lipschitz": 1.0},
            "learner": {
                "algorithm": "lambda_erm",
                "lambda": 0.5,
                "domain": {"dim": 2, "halfwidth": 1.0, "mode": "grid", "points_per_axis": 5},
            },
        },
    )


# ---------------------------------------------------------------------------
# generate
# ---------------------------------------------------------------------------


def test_generate_and_reproducibility(tmp_path):
    config = write_json(
        tmp_path / "gen.json",
        {
            "schema_version": 1,
            "seed": 3,
            "task": {
                "kind": "synthetic",
                "teacher_weights": [1.0],
                "input_law": {"kind": "isotropic_gaussian", "sd": 1.0},
                "label_noise_sd": 0.1,
            },
            "m": 25,
            "labelled": True,
        },
    )
    assert run_cli("generate", "--config", config, "--out", str(tmp_path / "a"))[0] == 0
    assert run_cli("generate", "--config", config, "--out", str(tmp_path / "b"))[0] == 0
    a = (tmp_path / "a" / "labelled.csv").read_bytes()
    b = (tmp_path / "b" / "labelled.csv").read_bytes()
    assert a == b
    sample = read_sample_csv(tmp_path / "a" / "labelled.csv")
    assert sample.m == 25 and sample.dim == 1


# ---------------------------------------------------------------------------
# train
# ---------------------------------------------------------------------------


def test_train_recovers_on_grid_teacher(tmp_path, train_config):
    code, _, _ = run_cli("train", "--config", train_config, "--out", str(tmp_path / "out"))
    assert code == 0
    payload = json.loads((tmp_path / "out" / "train.json").read_text())
    assert payload["weights"] == [0.5, -0.5]
    assert payload["approx_weights"] == [0.5, -0.5]
    assert payload["objective_value"] == 0.0


def test_train_rerun_byte_identical(tmp_path, train_config):
    run_cli("train", "--config", train_config, "--out", str(tmp_path / "o1"))
    run_cli("train", "--config", train_config, "--out", str(tmp_path / "o2"))
    assert (tmp_path / "o1" / "train.json").read_bytes() == (
        tmp_path / "o2" / "train.json"
    ).read_bytes()


def test_train_unknown_key_rejected(tmp_path, train_config, capsys):
    config = json.loads((tmp_path / "train.json").read_text())
    config["surprise"] = 1
    bad = write_json(tmp_path / "bad.json", config)
    code, _, err = run_cli("train", "--config", bad, "--out", str(tmp_path / "out"), capsys=capsys)
    assert code == 2
    payload = json.loads(err)
    assert payload["code"] == "config_invalid"
    assert "surprise" in payload["message"]


def test_train_missing_csv_named(tmp_path, capsys):
    config = write_json(
        tmp_path / "csv.json",
        {
            "schema_version": 1,
            "seed": 1,
            "task": {"kind": "csv", "labelled_path": str(tmp_path / "nope.csv")},
            "operator": {"kind": "uniform_quantizer", "step": 0.5, "clamp": 1.0},
            "loss": {"kind": "clipped_absolute"},
            "learner": {
                "algorithm": "analytic_lambda_erm",
                "lambda": 0.1,
                "domain": {"dim": 2, "halfwidth": 1.0},
            },
        },
    )
    code, _, err = run_cli("train", "--config", config, "--out", str(tmp_path / "out"), capsys=capsys)
    assert code == 2
    payload = json.loads(err)
    assert payload["code"] == "missing_input"
    assert "nope.csv" in payload["message"]


def test_train_csv_task_and_all_algorithms(tmp_path):
    # exercise every learner through the CLI on a small csv task
    rng = np.random.default_rng(5)
    inputs = rng.uniform(-1, 1, size=(30, 2))
    targets = inputs @ np.array([0.5, -0.5])
    lab = tmp_path / "lab.csv"
    unlab = tmp_path / "unlab.csv"
    from approx_sense import LabelledSample, UnlabelledSample
    from approx_sense.dataio import write_sample_csv

    write_sample_csv(LabelledSample(inputs=inputs, targets=targets), lab)
    write_sample_csv(UnlabelledSample(inputs=rng.uniform(-1, 1, size=(40, 2))), unlab)
    learners = [
        {"algorithm": "constrained_erm", "t": 0.4},
        {"algorithm": "srm", "thresholds": [0.1, 0.2, 0.4]},
        {"algorithm": "sensitivity_regularized_erm", "sensitivity": "empirical"},
        {"algorithm": "lambda_erm", "lambda": 0.3},
        {"algorithm": "analytic_lambda_erm", "lambda": 0.3, "input_norm_budget": 1.5},
        {"algorithm": "lambda_grid_srm", "lambdas": [0.1, 0.3], "weights": [0.5, 0.5]},
    ]
    for spec in learners:
        spec = dict(spec)
        spec["domain"] = {"dim": 2, "halfwidth": 1.0, "mode": "grid", "points_per_axis": 7}
        config = write_json(
            tmp_path / f"cfg_{spec['algorithm']}.json",
            {
                "schema_version": 1,
                "seed": 2,
                "task": {
                    "kind": "csv",
                    "labelled_path": str(lab),
                    "unlabelled_path": str(unlab),
                },
                "operator": {"kind": "uniform_quantizer", "step": 0.5, "clamp": 1.0},
                "loss": {"kind": "clipped_absolute"},
                "learner": spec,
            },
        )
        out_dir = tmp_path / f"out_{spec['algorithm']}"
        assert run_cli("train", "--config", config, "--out", str(out_dir))[0] == 0
        payload = json.loads((out_dir / "train.json").read_text())
        assert payload["algorithm"] == spec["algorithm"]
        assert len(payload["weights"]) == 2


# ---------------------------------------------------------------------------
# sensitivity
# ---------------------------------------------------------------------------


def test_sensitivity_command_empirical(tmp_path):
    from approx_sense import UnlabelledSample
    from approx_sense.dataio import write_sample_csv

    write_sample_csv(UnlabelledSample(inputs=[[1.0], [-2.0]]), tmp_path / "u.csv")
    config = write_json(
        tmp_path / "sens.json",
        {
            "schema_version": 1,
            "weights": [0.6],
            "operator": {"kind": "uniform_quantizer", "step": 0.5, "clamp": 1.0},
            "sample_path": str(tmp_path / "u.csv"),
            "p": 1.0,
            "kind": "empirical",
        },
    )
    assert run_cli("sensitivity", "--config", config, "--out", str(tmp_path / "out"))[0] == 0
    payload = json.loads((tmp_path / "out" / "sensitivity.json").read_text())
    assert payload["kind"] == "empirical"
    assert payload["value"] == pytest.approx(0.15, abs=1e-15)


def test_sensitivity_command_analytic(tmp_path):
    config = write_json(
        tmp_path / "sens.json",
        {
            "schema_version": 1,
            "weights": [0.25, 0.25, 0.25, 0.25],
            "operator": {"kind": "uniform_quantizer", "step": 0.5, "clamp": 1.0},
            "kind": "analytic_upper",
            "input_norm_budget": 2.0,
        },
    )
    assert run_cli("sensitivity", "--config", config, "--out", str(tmp_path / "out"))[0] == 0
    payload = json.loads((tmp_path / "out" / "sensitivity.json").read_text())
    assert payload["value"] == pytest.approx(1.0, rel=1e-12)


# ---------------------------------------------------------------------------
# rademacher
# ---------------------------------------------------------------------------


def test_rademacher_geometry(tmp_path):
    geom = write_json(tmp_path / "g.json", {"variant": "ellipse", "p": 2.0, "mu": [3.0, 4.0]})
    assert run_cli("rademacher", "--geometry", geom, "--out", str(tmp_path / "out"))[0] == 0
    payload = json.loads((tmp_path / "out" / "rademacher.json").read_text())
    assert payload["value"] == 2.5 and payload["method"] == "closed_form"


def test_rademacher_pointset_zero_and_mc_agreement(tmp_path):
    zeros = tmp_path / "z.csv"
    zeros.write_text("x0,x1,x2\n0,0,0\n0,0,0\n", encoding="utf-8")
    assert run_cli("rademacher", "--pointset", str(zeros), "--out", str(tmp_path / "o1"))[0] == 0
    assert json.loads((tmp_path / "o1" / "rademacher.json").read_text())["value"] == 0.0

    fixture = Path(__file__).parent / "fixtures" / "pointset.csv"
    run_cli("rademacher", "--pointset", str(fixture), "--method", "exact", "--out", str(tmp_path / "oe"))
    run_cli(
        "rademacher",
        "--pointset",
        str(fixture),
        "--method",
        "mc",
        "--n-sigma",
        "4000",
        "--seed",
        "5",
        "--out",
        str(tmp_path / "om"),
    )
    exact = json.loads((tmp_path / "oe" / "rademacher.json").read_text())
    mc = json.loads((tmp_path / "om" / "rademacher.json").read_text())
    assert abs(exact["value"] - mc["value"]) <= 4.0 * mc["standard_error"]


def test_rademacher_cap_error(tmp_path, capsys):
    wide = tmp_path / "wide.csv"
    header = ",".join(f"x{i}" for i in range(23))
    wide.write_text(header + "\n" + ",".join(["0.5"] * 23) + "\n", encoding="utf-8")
    code, _, err = run_cli(
        "rademacher", "--pointset", str(wide), "--out", str(tmp_path / "out"), capsys=capsys
    )
    assert code == 2
    assert json.loads(err)["code"] == "invalid_parameter"


# ---------------------------------------------------------------------------
# bound
# ---------------------------------------------------------------------------


def test_bound_confidence_only_and_csv_roundtrip(tmp_path):
    config = write_json(
        tmp_path / "b.json",
        {
            "schema_version": 1,
            "bound": "uniform_restricted",
            "params": {"emp_err": 0.0, "rad_Ht": 0.0, "rho": 1.0, "m": 50, "delta": 0.05},
        },
    )
    out = tmp_path / "out"
    assert run_cli("bound", "--config", config, "--out", str(out))[0] == 0
    payload = json.loads((out / "bound_uniform_restricted.json").read_text())
    assert payload["value"] == pytest.approx(3.0 * math.sqrt(math.log(40.0) / 100.0), rel=1e-15)
    assert abs(sum(v for _, v in payload["terms"]) - payload["value"]) <= 1e-12
    lines = (out / "bounds.csv").read_text().strip().splitlines()
    assert lines[0] == "name,value,delta,certified"
    name, value, delta, certified = lines[1].split(",")
    assert float(value) == payload["value"]  # 17 significant digits round-trip
    assert certified == "true"


def test_bound_constituent_from_mc_file_flips_certified(tmp_path):
    rad_file = write_json(
        tmp_path / "rad.json",
        {"value": 0.05, "method": "monte_carlo", "m": 10, "standard_error": 0.003},
    )
    config = write_json(
        tmp_path / "b.json",
        {
            "schema_version": 1,
            "bound": "uniform_restricted",
            "params": {"emp_err": 0.1, "rho": 1.0, "m": 50, "delta": 0.05},
            "constituents": {"rad_Ht": rad_file},
        },
    )
    out = tmp_path / "out"
    assert run_cli("bound", "--config", config, "--out", str(out))[0] == 0
    payload = json.loads((out / "bound_uniform_restricted.json").read_text())
    assert payload["certified"] is False
    assert payload["value"] == pytest.approx(
        0.1 + 0.1 + 3.0 * math.sqrt(math.log(40.0) / 100.0), rel=1e-12
    )


def test_bound_missing_constituent_named(tmp_path, capsys):
    config = write_json(
        tmp_path / "b.json",
        {
            "schema_version": 1,
            "bound": "uniform_restricted",
            "params": {"emp_err": 0.1, "rho": 1.0, "m": 50, "delta": 0.05},
        },
    )
    code, _, err = run_cli("bound", "--config", config, "--out", str(tmp_path / "o"), capsys=capsys)
    assert code == 2
    payload = json.loads(err)
    assert payload["code"] == "missing_input" and payload["constituent"] == "rad_Ht"


def test_bound_joint_emits_three_reports(tmp_path):
    config = write_json(
        tmp_path / "b.json",
        {
            "schema_version": 1,
            "bound": "joint",
            "params": {
                "err_min_approx": 0.1,
                "err_star": 0.2,
                "rad_HA": 0.05,
                "rho": 1.0,
                "t": 0.1,
                "m": 50,
                "delta": 0.05,
            },
        },
    )
    out = tmp_path / "out"
    assert run_cli("bound", "--config", config, "--out", str(out))[0] == 0
    names = {p.name for p in out.glob("bound_*.json")}
    assert names == {
        "bound_joint_vs_best_approx.json",
        "bound_joint_approx_deployment.json",
        "bound_joint_full_precision.json",
    }
    assert len((out / "bounds.csv").read_text().strip().splitlines()) == 4


# ---------------------------------------------------------------------------
# validate
# ---------------------------------------------------------------------------


def test_validate_deterministic_and_thread_independent(tmp_path):
    args = ["validate", "--suite", "crude_sandwich", "--trials", "8", "--seed", "4"]
    run_cli(*args, "--out", str(tmp_path / "v1"))
    run_cli(*args, "--out", str(tmp_path / "v2"))
    run_cli(*args, "--threads", "3", "--out", str(tmp_path / "v3"))
    b1 = (tmp_path / "v1" / "validate_crude_sandwich.json").read_bytes()
    assert b1 == (tmp_path / "v2" / "validate_crude_sandwich.json").read_bytes()
    assert b1 == (tmp_path / "v3" / "validate_crude_sandwich.json").read_bytes()
    payload = json.loads(b1)
    assert payload["passed"] is True and payload["violations"] == 0


def test_validate_unknown_suite(tmp_path, capsys):
    code, _, err = run_cli(
        "validate", "--suite", "mystery", "--out", str(tmp_path / "v"), capsys=capsys
    )
    assert code == 2
    assert json.loads(err)["code"] == "unknown_suite"


def test_threads_env_fallback(tmp_path, monkeypatch):
    monkeypatch.setenv("APPROX_SENSE_THREADS", "2")
    args = ["validate", "--suite", "stochastic_unbiased", "--seed", "1"]
    assert run_cli(*args, "--out", str(tmp_path / "v"))[0] == 0
    payload = json.loads((tmp_path / "v" / "validate_stochastic_unbiased.json").read_text())
    assert payload["passed"] is True
