"""Dispatch of kms subcommands and writing of their artifacts"""
from __future__ import annotations

import dataclasses
import json
import logging
import math
import os
import pathlib
import time

import numpy as np

from . import __version__, constants
from .config import RunConfig, build_model, config_to_dict
from .dirs import mkdirs
from .discretization import Mesh, build_mesh, integrate_power, write_field_csv
from .errors import ConfigError, FixedPointError
from .fixed_point_engine import assemble_theorem, curve_frame, scan_curve
from .local_solver import LocalProblem, monotone_solve
from .model import (
    check_hypotheses,
    coefficient_profile,
    example_constants,
    model_to_dict,
)
from .spectral import compute_eigen_pack, eigen_summary, embedding_trials


logger = logging.getLogger(__name__)


def jsonable(obj):
    """Convert to plain JSON types; non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(key): jsonable(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(value) for value in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(obj, pathlib.PurePath):
        return str(obj)
    return obj


def write_json(payload: dict, json_path: pathlib.Path, dry_run: bool = False) -> dict:
    payload = {"schema_version": constants.SCHEMA_VERSION, **jsonable(payload)}
    logger.info(f"Writing {json_path}")
    if not dry_run:
        with json_path.open("w") as fp:
            json.dump(payload, fp, indent=4)
            fp.write("\n")
    return payload


def _write_field(mesh: Mesh, u, csv_path: pathlib.Path, dry_run: bool) -> None:
    logger.info(f"Writing field {csv_path}")
    if not dry_run:
        write_field_csv(mesh, u, csv_path)


def _write_frame(df, csv_path: pathlib.Path, dry_run: bool) -> None:
    logger.info(f"Writing {csv_path}")
    if not dry_run:
        df.to_csv(csv_path, index=False)


def threads_from_env() -> int | None:
    """Number of worker threads from KMS_THREADS, None when unset."""
    value = os.environ.get(constants.THREADS_ENV_VAR)
    if value is None or value == "":
        return None
    try:
        n_threads = int(value)
    except ValueError:
        n_threads = 0
    if n_threads < 1:
        raise ConfigError(
            f"{constants.THREADS_ENV_VAR}: expected a positive integer, got {value!r}"
        )
    return n_threads


def _print(payload: dict) -> None:
    print(json.dumps(payload, indent=4))


def _bump_of(config: RunConfig, alpha: float) -> int:
    t_list = config.model.knots.t_list
    for k in range(1, len(t_list)):
        if t_list[k - 1] < alpha < t_list[k]:
            return k
    raise ConfigError(f"--alpha: {alpha} is not inside any bump of the knots {t_list}")


def _run_eigen(config, mesh, eig, dirs, write_fields, dry_run):
    summary = {
        **eigen_summary(eig),
        "embedding_trials": embedding_trials(mesh, eig.C1, config.seed),
    }
    payload = write_json(summary, dirs["output_dir"] / constants.EIGEN_JSON, dry_run)
    if write_fields:
        _write_field(mesh, eig.phi1, dirs["fields_dir"] / constants.PHI1_CSV, dry_run)
        _write_field(mesh, eig.e1, dirs["fields_dir"] / constants.E1_CSV, dry_run)
    _print(payload)
    return constants.EXIT_OK


def _run_check(config, mesh, eig, dirs, dry_run):
    model = build_model(config.model, eig)
    report = check_hypotheses(model, eig)
    payload = write_json(
        report.to_dict(), dirs["output_dir"] / constants.HYPOTHESES_JSON, dry_run
    )
    _write_frame(
        coefficient_profile(model), dirs["output_dir"] / constants.COEFFICIENT_PROFILE_CSV, dry_run
    )
    _print(payload)
    return constants.EXIT_OK


def _run_example(config, mesh, eig, dirs, dry_run):
    model_config = config.model
    if model_config.example_gamma is None:
        raise ConfigError(
            "model.f: the example subcommand needs {'type': 'section3', 'gamma': ...} without 'c'"
        )
    example = example_constants(
        model_config.knots, model_config.a, model_config.example_gamma, eig, model_config.p
    )
    model = build_model(model_config, eig)
    report = check_hypotheses(model, eig)
    payload = write_json(
        {"model": model_to_dict(model), "constants": dataclasses.asdict(example)},
        dirs["output_dir"] / constants.MODEL_JSON,
        dry_run,
    )
    write_json(report.to_dict(), dirs["output_dir"] / constants.HYPOTHESES_JSON, dry_run)
    _print(payload)
    return constants.EXIT_OK


def _run_solve_local(config, mesh, eig, dirs, alpha, dry_run):
    if alpha is None:
        raise ConfigError("--alpha: required by the solve-local subcommand")
    k = _bump_of(config, alpha)
    model = build_model(config.model, eig)
    problem = LocalProblem.from_model(model, mesh, eig, alpha)
    solution = monotone_solve(
        problem,
        side="sub",
        tol=config.scan.local_tol,
        max_iter=config.scan.max_iter,
        inner_solver=config.scan.inner_solver,
    )
    payload = write_json(
        {
            "alpha": solution.alpha,
            "k": k,
            "a_alpha": solution.a_alpha,
            "energy": solution.energy,
            "sup_residual": solution.sup_residual,
            "P": integrate_power(mesh, solution.u, model.p),
            "iterations": solution.iterations,
        },
        dirs["output_dir"] / constants.SOLVE_LOCAL_JSON,
        dry_run,
    )
    _write_field(mesh, solution.u, dirs["fields_dir"] / constants.U_ALPHA_CSV, dry_run)
    _print(payload)
    return constants.EXIT_OK


def _run_scan(config, mesh, eig, dirs, k, n_workers, dry_run):
    if k is None:
        raise ConfigError("--k: required by the scan subcommand")
    model = build_model(config.model, eig)
    if not 1 <= k <= model.knots.K:
        raise ConfigError(f"--k: must be in 1..{model.knots.K}, got {k}")
    curve = scan_curve(model, mesh, eig, k, config=config.scan, n_workers=n_workers, progress=True)
    _write_frame(
        curve_frame(curve), dirs["output_dir"] / constants.SCAN_CSV_TEMPLATE.format(k=k), dry_run
    )
    return constants.EXIT_OK


def _run_solve(config, mesh, eig, dirs, force, n_workers, dry_run):
    model = build_model(config.model, eig)
    report = check_hypotheses(model, eig)
    if not report.all_hold and not force:
        write_json(report.to_dict(), dirs["output_dir"] / constants.HYPOTHESES_JSON, dry_run)
        logger.error(
            f"Hypotheses {report.failing} fail; not solving. Use --force to solve anyway"
        )
        return constants.EXIT_HYPOTHESIS_VETO
    try:
        theorem = assemble_theorem(
            model, mesh, eig, config.scan, hypotheses=report, force=force,
            n_workers=n_workers, progress=True,
        )
    except FixedPointError as e:
        if e.curve:
            _write_frame(
                curve_frame(e.curve, validate=False),
                dirs["output_dir"] / constants.FAILED_SCAN_CSV_TEMPLATE.format(k=e.k),
                dry_run,
            )
        raise

    payload = write_json(theorem.to_dict(), dirs["output_dir"] / constants.THEOREM_JSON, dry_run)
    for bump in theorem.bumps:
        _write_frame(
            curve_frame(bump.curve),
            dirs["output_dir"] / constants.SCAN_CSV_TEMPLATE.format(k=bump.k),
            dry_run,
        )
        for point in bump.fixed_points:
            _write_field(
                mesh,
                point.u,
                dirs["fields_dir"] / constants.SOLUTION_CSV_TEMPLATE.format(k=bump.k, i=point.index_in_bump),
                dry_run,
            )
    _print({"chain": payload["chain"], "chain_margin": payload["chain_margin"]})
    return constants.EXIT_OK


def run(
    subcommand: str,
    config: RunConfig,
    alpha: float | None = None,
    k: int | None = None,
    out: str | pathlib.Path | None = None,
    force: bool = False,
    write_fields: bool = False,
    dry_run: bool = False,
) -> int:
    """Run one subcommand and return its exit status.

    Numerical failures propagate as exceptions; the manifest is written
    either way.
    """
    if subcommand not in constants.SUBCOMMANDS:
        raise ValueError(f"subcommand must be one of {constants.SUBCOMMANDS}, got: {subcommand}")
    start = time.perf_counter()
    force = force or config.force
    output_dir = pathlib.Path(out) if out is not None else config.output_dir
    logger.info(
        f"Running subcommand '{subcommand}'.\n"
        f"Output dir: {output_dir}\n"
        f"Dry run: {dry_run}\n"
    )
    n_workers = threads_from_env()
    dirs = mkdirs(output_dir, dry_run)

    status = constants.EXIT_FAILURE
    try:
        mesh = build_mesh(config.domain)
        eig = compute_eigen_pack(mesh, config.model.p, tol=config.eigen_tol)
        if subcommand == "eigen":
            status = _run_eigen(config, mesh, eig, dirs, write_fields, dry_run)
        elif subcommand == "check":
            status = _run_check(config, mesh, eig, dirs, dry_run)
        elif subcommand == "example":
            status = _run_example(config, mesh, eig, dirs, dry_run)
        elif subcommand == "solve-local":
            status = _run_solve_local(config, mesh, eig, dirs, alpha, dry_run)
        elif subcommand == "scan":
            status = _run_scan(config, mesh, eig, dirs, k, n_workers, dry_run)
        elif subcommand == "solve":
            status = _run_solve(config, mesh, eig, dirs, force, n_workers, dry_run)
    finally:
        write_json(
            {
                "subcommand": subcommand,
                "status": status,
                "tool_version": __version__,
                "config": config_to_dict(config),
                "arguments": {"alpha": alpha, "k": k, "force": force, "write_fields": write_fields},
                "seed": config.seed,
                "threads": n_workers,
                "wall_time_seconds": time.perf_counter() - start,
            },
            dirs["output_dir"] / constants.MANIFEST_JSON,
            dry_run,
        )
    return status
