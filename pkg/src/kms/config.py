"""Run configuration: JSON file -> frozen dataclasses, and back."""
from __future__ import annotations

import dataclasses
import json
import math
import pathlib
import re

from . import constants
from .discretization import DomainSpec
from .errors import ConfigError
from .fixed_point_engine import ScanConfig
from .model import (
    AffineNonlinearity,
    BumpCoefficient,
    CoefficientA,
    Knots,
    LogisticNonlinearity,
    ModelSpec,
    Nonlinearity,
    Section3Nonlinearity,
    TableCoefficient,
    TableNonlinearity,
    generate_example,
)
from .spectral import EigenPack


@dataclasses.dataclass(frozen=True)
class ModelConfig:
    """Model block of a run configuration.

    Exactly one of ``f`` and ``example_gamma`` is set; ``example_gamma``
    asks for the explicit example family to be generated from the
    eigen data of the mesh.
    """
    p: float
    knots: Knots
    a: CoefficientA
    f: Nonlinearity | None = None
    example_gamma: float | None = None

    def __post_init__(self):
        if (self.f is None) == (self.example_gamma is None):
            raise ValueError("Set exactly one of f and example_gamma")


@dataclasses.dataclass(frozen=True)
class RunConfig:
    domain: DomainSpec
    model: ModelConfig
    scan: ScanConfig = ScanConfig()
    eigen_tol: float = constants.EIGEN_TOL
    output_dir: pathlib.Path = constants.DEFAULT_OUTPUT_DIR
    force: bool = False
    seed: int = 0
    schema_version: int = constants.SCHEMA_VERSION


def build_model(model_config: ModelConfig, eig: EigenPack) -> ModelSpec:
    """Resolve a model block to a ModelSpec, generating the example if requested."""
    if model_config.f is not None:
        return ModelSpec(p=model_config.p, knots=model_config.knots, a=model_config.a, f=model_config.f)
    return generate_example(
        model_config.knots, model_config.a, model_config.example_gamma, eig, model_config.p
    )


# ---- parsing helpers -------------------------------------------------------
def _check_keys(block, path: str, required: tuple, optional: tuple = ()) -> None:
    if not isinstance(block, dict):
        raise ConfigError(f"{path}: expected an object, got {type(block).__name__}")
    unknown = sorted(set(block) - set(required) - set(optional))
    if unknown:
        raise ConfigError(
            f"{path}: unknown key(s) {unknown}; allowed keys are {sorted(required + optional)}"
        )
    missing = [key for key in required if key not in block]
    if missing:
        raise ConfigError(f"{path}: missing required key(s) {missing}")


def _join(path: str, key) -> str:
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else key


def _number(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}: expected a number, got {value!r}")
    if not math.isfinite(value):
        raise ConfigError(f"{path}: expected a finite number, got {value!r}")
    return float(value)


def _integer(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}: expected an integer, got {value!r}")
    return value


def _boolean(value, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(f"{path}: expected true or false, got {value!r}")
    return value


def _list(value, path: str) -> list:
    if not isinstance(value, list):
        raise ConfigError(f"{path}: expected a list, got {value!r}")
    return value


_PI_RE = re.compile(r"^\s*(?:(?P<factor>[0-9.eE+-]+)\s*\*\s*)?pi\s*$")


def _length(value, path: str) -> float:
    """A number, 'pi' or '<number>*pi'."""
    if isinstance(value, str):
        match = _PI_RE.match(value)
        if match is None:
            raise ConfigError(f"{path}: expected a number, 'pi' or '<number>*pi', got {value!r}")
        factor = match.group("factor")
        try:
            return (float(factor) if factor else 1.0) * math.pi
        except ValueError:
            raise ConfigError(f"{path}: cannot read factor {factor!r}") from None
    return _number(value, path)


def _points(value, path: str) -> tuple[tuple[float, float], ...]:
    points = []
    for i, pair in enumerate(_list(value, path)):
        pair_path = _join(path, i)
        if not isinstance(pair, list) or len(pair) != 2:
            raise ConfigError(f"{pair_path}: expected a [t, value] pair, got {pair!r}")
        points.append((_number(pair[0], pair_path), _number(pair[1], pair_path)))
    return tuple(points)


def _built(factory, path: str, **kwargs):
    """Call a constructor, re-raising its ValueError under ``path``."""
    try:
        return factory(**kwargs)
    except ConfigError:
        raise
    except ValueError as e:
        raise ConfigError(f"{path}: {e}") from None


# ---- blocks ----------------------------------------------------------------
def _parse_domain(block, path: str) -> DomainSpec:
    _check_keys(block, path, required=("dimension", "lengths", "cells"))
    lengths = _list(block["lengths"], _join(path, "lengths"))
    cells = _list(block["cells"], _join(path, "cells"))
    return _built(
        DomainSpec,
        path,
        dimension=_integer(block["dimension"], _join(path, "dimension")),
        lengths=tuple(_length(v, _join(_join(path, "lengths"), i)) for i, v in enumerate(lengths)),
        cells=tuple(_integer(v, _join(_join(path, "cells"), i)) for i, v in enumerate(cells)),
    )


def _parse_a(block, path: str, knots: Knots) -> CoefficientA:
    if not isinstance(block, dict) or "type" not in block:
        raise ConfigError(f"{path}: expected an object with a 'type' key")
    kind = block["type"]
    if kind == "bumps":
        _check_keys(block, path, required=("type", "amplitudes"))
        amplitudes = _list(block["amplitudes"], _join(path, "amplitudes"))
        return _built(
            BumpCoefficient,
            path,
            knots=knots.t_list,
            amplitudes=tuple(
                _number(v, _join(_join(path, "amplitudes"), i)) for i, v in enumerate(amplitudes)
            ),
        )
    if kind == "table":
        _check_keys(block, path, required=("type", "points"))
        return _built(TableCoefficient, path, points=_points(block["points"], _join(path, "points")))
    raise ConfigError(f"{_join(path, 'type')}: unknown coefficient type {kind!r}; expected 'bumps' or 'table'")


def _parse_f(block, path: str, t_star: float) -> tuple[Nonlinearity | None, float | None]:
    """Returns (f, example_gamma)"""
    if not isinstance(block, dict) or "type" not in block:
        raise ConfigError(f"{path}: expected an object with a 'type' key")
    kind = block["type"]
    if kind == "section3":
        _check_keys(block, path, required=("type", "gamma"), optional=("c",))
        gamma = _number(block["gamma"], _join(path, "gamma"))
        if "c" not in block:
            if not gamma > 0:
                raise ConfigError(f"{_join(path, 'gamma')}: must be positive, got {gamma}")
            return None, gamma
        c = _number(block["c"], _join(path, "c"))
        return _built(Section3Nonlinearity, path, gamma=gamma, c=c, t_star=t_star), None
    if kind == "affine":
        _check_keys(block, path, required=("type",))
        return AffineNonlinearity(t_star=t_star), None
    if kind == "logistic":
        _check_keys(block, path, required=("type", "rate"))
        rate = _number(block["rate"], _join(path, "rate"))
        return _built(LogisticNonlinearity, path, rate=rate, t_star=t_star), None
    if kind == "table":
        _check_keys(block, path, required=("type", "points"))
        points = _points(block["points"], _join(path, "points"))
        return _built(TableNonlinearity, path, points=points, t_star=t_star), None
    raise ConfigError(
        f"{_join(path, 'type')}: unknown nonlinearity type {kind!r}; "
        "expected 'section3', 'affine', 'logistic' or 'table'"
    )


def _parse_model(block, path: str) -> ModelConfig:
    _check_keys(block, path, required=("p", "knots", "t_star", "a", "f"))
    knots_path = _join(path, "knots")
    t_list = tuple(
        _number(v, _join(knots_path, i)) for i, v in enumerate(_list(block["knots"], knots_path))
    )
    t_star = _number(block["t_star"], _join(path, "t_star"))
    try:
        knots = Knots(t_list=t_list, t_star=t_star)
    except ValueError as e:
        raise ConfigError(f"{knots_path}: (H0) requires 0 = t_0 < t_1 < ... < t_K; {e}") from None
    p = _number(block["p"], _join(path, "p"))
    if not p >= 1:
        raise ConfigError(f"{_join(path, 'p')}: must be >= 1, got {p}")
    a = _parse_a(block["a"], _join(path, "a"), knots)
    f, example_gamma = _parse_f(block["f"], _join(path, "f"), t_star)
    return ModelConfig(p=p, knots=knots, a=a, f=f, example_gamma=example_gamma)


_SCAN_NUMBERS = ("delta_factor", "a_min_factor", "local_tol", "refine_tol", "nonlocal_tol")
_SCAN_INTEGERS = ("n_samples", "max_iter", "max_bisection_steps")


def model_from_dict(model_dict: dict) -> ModelSpec:
    """Inverse of :func:`kms.model.model_to_dict`.

    Unlike a config model block, ``f`` must describe a fixed nonlinearity.
    """
    model_config = _parse_model(model_dict, "model")
    if model_config.f is None:
        raise ConfigError("model.f: a fixed model needs 'c' for the 'section3' type")
    return ModelSpec(p=model_config.p, knots=model_config.knots, a=model_config.a, f=model_config.f)


def _parse_scan(block, path: str) -> ScanConfig:
    field_names = tuple(field.name for field in dataclasses.fields(ScanConfig))
    _check_keys(block, path, required=(), optional=field_names)
    kwargs = {}
    for key, value in block.items():
        key_path = _join(path, key)
        if key in _SCAN_NUMBERS:
            kwargs[key] = None if value is None and key in ("refine_tol", "nonlocal_tol") else _number(value, key_path)
        elif key in _SCAN_INTEGERS:
            kwargs[key] = _integer(value, key_path)
        elif key == "certify":
            kwargs[key] = _boolean(value, key_path)
        elif key == "inner_solver":
            if value not in constants.INNER_SOLVERS:
                raise ConfigError(f"{key_path}: expected one of {constants.INNER_SOLVERS}, got {value!r}")
            kwargs[key] = value
    return _built(ScanConfig, path, **kwargs)


def parse_config_dict(config: dict) -> RunConfig:
    """Validate a configuration object and build a RunConfig."""
    _check_keys(
        config,
        "config",
        required=("domain", "model"),
        optional=("schema_version", "scan", "eigen_tol", "output_dir", "force", "seed"),
    )
    schema_version = _integer(config.get("schema_version", constants.SCHEMA_VERSION), "schema_version")
    if schema_version != constants.SCHEMA_VERSION:
        raise ConfigError(
            f"schema_version: expected {constants.SCHEMA_VERSION}, got {schema_version}"
        )
    eigen_tol = _number(config.get("eigen_tol", constants.EIGEN_TOL), "eigen_tol")
    if not eigen_tol > 0:
        raise ConfigError(f"eigen_tol: must be positive, got {eigen_tol}")
    output_dir = config.get("output_dir", str(constants.DEFAULT_OUTPUT_DIR))
    if not isinstance(output_dir, str):
        raise ConfigError(f"output_dir: expected a path string, got {output_dir!r}")
    return RunConfig(
        domain=_parse_domain(config["domain"], "domain"),
        model=_parse_model(config["model"], "model"),
        scan=_parse_scan(config.get("scan", {}), "scan"),
        eigen_tol=eigen_tol,
        output_dir=pathlib.Path(output_dir),
        force=_boolean(config.get("force", False), "force"),
        seed=_integer(config.get("seed", 0), "seed"),
        schema_version=schema_version,
    )


def parse_config(config_path: str | pathlib.Path) -> RunConfig:
    config_path = pathlib.Path(config_path)
    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")
    with config_path.open("r") as fp:
        try:
            config = json.load(fp)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config: {config_path} is not valid JSON: {e}") from None
    return parse_config_dict(config)


def config_to_dict(config: RunConfig) -> dict:
    """Inverse of :func:`parse_config_dict`."""
    model = config.model
    if model.f is not None:
        f = model.f.to_dict()
    else:
        f = {"type": "section3", "gamma": model.example_gamma}
    return {
        "schema_version": config.schema_version,
        "domain": {
            "dimension": config.domain.dimension,
            "lengths": list(config.domain.lengths),
            "cells": list(config.domain.cells),
        },
        "model": {
            "p": model.p,
            "knots": list(model.knots.t_list),
            "t_star": model.knots.t_star,
            "a": model.a.to_dict(),
            "f": f,
        },
        "scan": dataclasses.asdict(config.scan),
        "eigen_tol": config.eigen_tol,
        "output_dir": str(config.output_dir),
        "force": config.force,
        "seed": config.seed,
    }
