import json

import pandas as pd
import pytest

from kms import constants
from kms.__main__ import main
from kms.config import model_from_dict, parse_config_dict
from kms.parser import get_parser


def small_config(**model_changes):
    model = {
        "p": 1,
        "knots": [0.0, 1.0],
        "t_star": 1.0,
        "a": {"type": "bumps", "amplitudes": [0.5]},
        "f": {"type": "section3", "gamma": 1.0},
    }
    model.update(model_changes)
    return {
        "schema_version": 1,
        "domain": {"dimension": 1, "lengths": ["pi"], "cells": [64]},
        "model": model,
        "scan": {"n_samples": 16, "delta_factor": 0.001},
    }


AFFINE_MODEL = {
    "knots": [0.0, 2.0],
    "a": {"type": "bumps", "amplitudes": [1.0]},
    "f": {"type": "affine"},
}

VETOED_MODEL = {
    "knots": [0.0, 0.5, 1.0],
    "a": {"type": "bumps", "amplitudes": [0.5, 0.5]},
    "f": {"type": "logistic", "rate": 1.0},
}


def read_json(json_path):
    with json_path.open() as fp:
        return json.load(fp)


def test_eigen(tmp_path, write_config, capsys):
    out = tmp_path / "out"
    status = main(["eigen", "--config", str(write_config(small_config())), "--out", str(out), "--write-fields"])
    assert status == constants.EXIT_OK

    eigen = read_json(out / constants.EIGEN_JSON)
    assert eigen["schema_version"] == constants.SCHEMA_VERSION
    assert eigen["lambda1"] == pytest.approx(1.0, abs=1e-3)
    assert json.loads(capsys.readouterr().out) == eigen

    fields = pd.read_csv(out / constants.FIELDS_SUBDIR / constants.E1_CSV)
    assert list(fields.columns) == ["x", "value"]
    assert (out / constants.FIELDS_SUBDIR / constants.PHI1_CSV).exists()

    assert eigen["embedding_trials"]["seed"] == 0
    assert eigen["embedding_trials"]["holds"]
    assert eigen["embedding_trials"]["max_ratio"] <= eigen["C1"]

    manifest = read_json(out / constants.MANIFEST_JSON)
    assert manifest["subcommand"] == "eigen"
    assert manifest["status"] == constants.EXIT_OK
    assert manifest["tool_version"]
    assert parse_config_dict(manifest["config"]) == parse_config_dict(small_config())


def test_eigen_is_deterministic(tmp_path, write_config):
    config_path = str(write_config(small_config()))
    for name in ("first", "second"):
        assert main(["eigen", "--config", config_path, "--out", str(tmp_path / name)]) == constants.EXIT_OK
    first = (tmp_path / "first" / constants.EIGEN_JSON).read_bytes()
    assert first == (tmp_path / "second" / constants.EIGEN_JSON).read_bytes()


def test_eigen_uses_config_seed(tmp_path, write_config):
    config = {**small_config(), "seed": 11}
    out = tmp_path / "out"
    assert main(["eigen", "--config", str(write_config(config)), "--out", str(out)]) == constants.EXIT_OK
    assert read_json(out / constants.EIGEN_JSON)["embedding_trials"]["seed"] == 11
    assert read_json(out / constants.MANIFEST_JSON)["seed"] == 11


def test_dry_run_writes_nothing(tmp_path, write_config):
    out = tmp_path / "out"
    status = main(["eigen", "--config", str(write_config(small_config())), "--out", str(out), "--dry-run"])
    assert status == constants.EXIT_OK
    assert not out.exists()


def test_check_reports_failing_hypotheses(tmp_path, write_config):
    out = tmp_path / "out"
    config_path = write_config(small_config(**VETOED_MODEL))
    assert main(["check", "--config", str(config_path), "--out", str(out)]) == constants.EXIT_OK

    hypotheses = read_json(out / constants.HYPOTHESES_JSON)
    assert hypotheses["all_hold"] is False
    assert hypotheses["verdicts"]["H4"]["holds"] is False
    assert hypotheses["verdicts"]["H3"]["holds"] is True
    profile = pd.read_csv(out / constants.COEFFICIENT_PROFILE_CSV)
    assert list(profile.columns) == ["t", "a", "a_times_t"]


def test_check_affine_writes_infinite_gamma(tmp_path, write_config):
    out = tmp_path / "out"
    assert main(["check", "--config", str(write_config(small_config(**AFFINE_MODEL))), "--out", str(out)]) == 0
    hypotheses = read_json(out / constants.HYPOTHESES_JSON)
    assert hypotheses["gamma"] == "inf"


def test_example(tmp_path, write_config):
    out = tmp_path / "out"
    assert main(["example", "--config", str(write_config(small_config())), "--out", str(out)]) == 0
    example = read_json(out / constants.MODEL_JSON)
    assert set(example["constants"]) == {"A", "M", "eta", "c"}
    assert example["model"]["f"]["c"] == example["constants"]["c"]
    assert read_json(out / constants.HYPOTHESES_JSON)["all_hold"] is True

    model = model_from_dict(example["model"])
    assert model.f.c == example["constants"]["c"]


def test_example_needs_generator_request(tmp_path, write_config):
    config_path = write_config(small_config(**AFFINE_MODEL))
    assert main(["example", "--config", str(config_path), "--out", str(tmp_path / "out")]) == constants.EXIT_CONFIG_ERROR


def test_solve_local(tmp_path, write_config):
    out = tmp_path / "out"
    config_path = write_config(small_config(**AFFINE_MODEL))
    assert main(["solve-local", "--config", str(config_path), "--alpha", "1.0", "--out", str(out)]) == 0
    result = read_json(out / constants.SOLVE_LOCAL_JSON)
    assert result["k"] == 1
    assert result["P"] == pytest.approx(1.30729, abs=1e-2)
    assert result["energy"] < 0
    assert (out / constants.FIELDS_SUBDIR / constants.U_ALPHA_CSV).exists()


@pytest.mark.parametrize("alpha_args", [[], ["--alpha", "2.5"], ["--alpha", "2.0"]])
def test_solve_local_bad_alpha(tmp_path, write_config, alpha_args):
    config_path = write_config(small_config(**AFFINE_MODEL))
    status = main(["solve-local", "--config", str(config_path), "--out", str(tmp_path / "out"), *alpha_args])
    assert status == constants.EXIT_CONFIG_ERROR


def test_scan(tmp_path, write_config):
    out = tmp_path / "out"
    assert main(["scan", "--config", str(write_config(small_config())), "--k", "1", "--out", str(out)]) == 0
    curve = pd.read_csv(out / constants.SCAN_CSV_TEMPLATE.format(k=1))
    assert list(curve.columns) == list(constants.CURVE_COLUMNS)
    assert len(curve) == 16
    assert curve["alpha"].is_monotonic_increasing


def test_scan_bad_k(tmp_path, write_config):
    config_path = str(write_config(small_config()))
    for k_args in ([], ["--k", "2"]):
        assert main(["scan", "--config", config_path, "--out", str(tmp_path / "out"), *k_args]) == 2


def test_scan_without_admissible_alphas_fails_cleanly(tmp_path, write_config, caplog):
    config = small_config()
    # a(alpha) >= 2 max a rules out every alpha
    config["scan"]["a_min_factor"] = 2.0
    out = tmp_path / "out"
    status = main(["scan", "--config", str(write_config(config)), "--out", str(out), "--k", "1"])
    assert status == constants.EXIT_FAILURE
    assert "Fewer than 2 alpha values" in caplog.text
    assert read_json(out / constants.MANIFEST_JSON)["status"] == constants.EXIT_FAILURE


def test_k_help_names_only_scan():
    (k_action,) = [action for action in get_parser()._actions if action.dest == "k"]
    assert k_action.help.endswith("(scan)")


def test_solve_vetoed(tmp_path, write_config):
    out = tmp_path / "out"
    status = main(["solve", "--config", str(write_config(small_config(**VETOED_MODEL))), "--out", str(out)])
    assert status == constants.EXIT_HYPOTHESIS_VETO
    assert read_json(out / constants.HYPOTHESES_JSON)["all_hold"] is False
    assert not (out / constants.THEOREM_JSON).exists()
    assert read_json(out / constants.MANIFEST_JSON)["status"] == constants.EXIT_HYPOTHESIS_VETO


def test_config_errors(tmp_path, write_config):
    config = small_config()
    config["domain"]["shape"] = "disk"
    assert main(["eigen", "--config", str(write_config(config)), "--out", str(tmp_path / "out")]) == 2
    assert main(["eigen", "--config", str(tmp_path / "missing.json")]) == 2


def test_bad_threads_env_var(tmp_path, write_config, monkeypatch):
    monkeypatch.setenv(constants.THREADS_ENV_VAR, "zero")
    status = main(["eigen", "--config", str(write_config(small_config())), "--out", str(tmp_path / "out")])
    assert status == constants.EXIT_CONFIG_ERROR


def test_unknown_subcommand(write_config):
    with pytest.raises(SystemExit):
        main(["prove", "--config", str(write_config(small_config()))])


@pytest.mark.slow
def test_solve_end_to_end(tmp_path, write_config, monkeypatch):
    config = small_config()
    config["domain"]["cells"] = [128]
    config_path = str(write_config(config))

    theorems = []
    for threads in ("1", "3"):
        monkeypatch.setenv(constants.THREADS_ENV_VAR, threads)
        out = tmp_path / f"threads-{threads}"
        assert main(["solve", "--config", config_path, "--out", str(out)]) == constants.EXIT_OK
        theorems.append((out / constants.THEOREM_JSON).read_bytes())
        assert (out / constants.FIELDS_SUBDIR / constants.SOLUTION_CSV_TEMPLATE.format(k=1, i=1)).exists()
        assert (out / constants.SCAN_CSV_TEMPLATE.format(k=1)).exists()

    assert theorems[0] == theorems[1]
    theorem = json.loads(theorems[0])
    assert [entry["label"] for entry in theorem["chain"]] == ["t_0", "m_1,1", "m_1,2", "t_1"]
    assert theorem["chain_margin"] > 0
    assert len(theorem["bumps"][0]["fixed_points"]) == 2
