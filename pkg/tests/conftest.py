import json
import logging
import math
import pathlib

import pytest

from kms.discretization import DomainSpec, build_mesh
from kms.model import (
    AffineNonlinearity,
    BumpCoefficient,
    Knots,
    LogisticNonlinearity,
    ModelSpec,
    generate_example,
)
from kms.spectral import compute_eigen_pack


CONFIGS_DIR = pathlib.Path(__file__).parent.parent / "data" / "configs"


@pytest.fixture(autouse=True)
def reset_kms_logger():
    """The CLI adds a stderr handler once per process; drop it between tests"""
    yield
    logger = logging.getLogger("kms")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)


@pytest.fixture(scope="session")
def configs_dir():
    return CONFIGS_DIR


def interval_mesh(length, cells):
    return build_mesh(DomainSpec(dimension=1, lengths=(length,), cells=(cells,)))


@pytest.fixture(scope="session")
def mesh_pi():
    return interval_mesh(math.pi, 512)


@pytest.fixture(scope="session")
def eig_pi(mesh_pi):
    return compute_eigen_pack(mesh_pi, p=1)


@pytest.fixture(scope="session")
def mesh_pi_128():
    return interval_mesh(math.pi, 128)


@pytest.fixture(scope="session")
def eig_pi_128(mesh_pi_128):
    return compute_eigen_pack(mesh_pi_128, p=1)


@pytest.fixture(scope="session")
def affine_model():
    """a(1) = 1 and f(t) = 1 - t: -u'' = 1 - u has a closed-form solution on (0, pi)"""
    knots = Knots(t_list=(0.0, 2.0), t_star=1.0)
    return ModelSpec(
        p=1,
        knots=knots,
        a=BumpCoefficient(knots=knots.t_list, amplitudes=(1.0,)),
        f=AffineNonlinearity(t_star=1.0),
    )


def logistic_model(amplitudes=(0.5, 0.5), knots=(0.0, 0.5, 1.0), rate=1.0, p=1):
    """f(t) = t (1 - t), gamma = 1"""
    knots = Knots(t_list=knots, t_star=1.0)
    return ModelSpec(
        p=p,
        knots=knots,
        a=BumpCoefficient(knots=knots.t_list, amplitudes=amplitudes),
        f=LogisticNonlinearity(rate=rate, t_star=1.0),
    )


def example_model(eig, knots=(0.0, 0.5, 1.0), amplitudes=(0.5, 0.5), gamma=1.0, t_star=1.0):
    knots = Knots(t_list=knots, t_star=t_star)
    a = BumpCoefficient(knots=knots.t_list, amplitudes=amplitudes)
    return generate_example(knots, a, gamma, eig, p=1)


@pytest.fixture(scope="session")
def example_k2(eig_pi):
    return example_model(eig_pi)


@pytest.fixture(scope="session")
def example_k2_128(eig_pi_128):
    return example_model(eig_pi_128)


@pytest.fixture
def write_config(tmp_path):
    """Write a config dict to a JSON file and return its path"""
    def _write_config(config, name="config.json"):
        config_path = tmp_path / name
        with config_path.open("w") as fp:
            json.dump(config, fp, indent=4)
        return config_path
    return _write_config
