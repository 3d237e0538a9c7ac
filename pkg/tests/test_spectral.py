import math

import numpy as np
import pytest

from kms.discretization import (
    DomainSpec,
    build_mesh,
    grad_norm_sq,
    integrate_power,
    neg_laplacian,
    sup_norm,
)
from kms.spectral import (
    compute_eigen_pack,
    eigen_summary,
    embedding_ratio,
    embedding_trials,
    normalize,
    principal_eigenpair,
    sobolev_c1,
    torsion_function,
)

from .conftest import interval_mesh


def test_eigen_pack_interval_pi(mesh_pi, eig_pi):
    assert eig_pi.lambda1 == pytest.approx(1.0, abs=1e-3)
    assert np.all(eig_pi.e1 > 0)
    assert sup_norm(eig_pi.e1) == pytest.approx(1.0, abs=1e-12)
    assert grad_norm_sq(mesh_pi, eig_pi.phi1) == pytest.approx(1.0, abs=1e-10)
    ratio = eig_pi.phi1 / eig_pi.e1
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-8)
    assert eig_pi.volume == pytest.approx(math.pi)
    assert eig_pi.int_e1_pow_p == pytest.approx(2.0, abs=1e-3)
    assert eig_pi.int_e1_sq == pytest.approx(math.pi / 2, abs=1e-3)


def test_eigenpair_residual(mesh_pi, eig_pi):
    residual = neg_laplacian(mesh_pi, eig_pi.e1) - eig_pi.lambda1 * eig_pi.e1
    assert sup_norm(residual) <= 1e-9 * eig_pi.lambda1


def test_eigenvalue_unit_interval():
    mesh = interval_mesh(1.0, 512)
    lam, v = principal_eigenpair(mesh)
    assert lam == pytest.approx(math.pi**2, rel=1e-2)
    assert np.all(v > 0)


def test_eigenvalue_unit_square():
    mesh = build_mesh(DomainSpec(dimension=2, lengths=(1.0, 1.0), cells=(128, 128)))
    lam, _ = principal_eigenpair(mesh, tol=1e-8)
    assert lam == pytest.approx(2 * math.pi**2, rel=5e-2)


def test_eigenvalue_is_minimal_rayleigh_quotient():
    mesh = interval_mesh(math.pi, 64)
    lam, _ = principal_eigenpair(mesh)
    rng = np.random.default_rng(42)
    for _ in range(100):
        u = rng.standard_normal(mesh.n)
        quotient = grad_norm_sq(mesh, u) / integrate_power(mesh, u, 2)
        assert quotient >= lam * (1 - 1e-10)


def test_eigenvalue_converges_second_order():
    lambdas = [principal_eigenpair(interval_mesh(math.pi, cells))[0] for cells in (16, 32, 64)]
    ratio = (lambdas[0] - lambdas[1]) / (lambdas[1] - lambdas[2])
    assert 3.5 <= ratio <= 4.5


def test_normalize(mesh_pi):
    u = np.sin(mesh_pi.coords[:, 0])
    np.testing.assert_allclose(normalize(mesh_pi, 2 * u, "sup_norm"), u / sup_norm(u))
    once = normalize(mesh_pi, u, "grad_norm")
    np.testing.assert_allclose(normalize(mesh_pi, once, "grad_norm"), once, rtol=1e-12)
    np.testing.assert_allclose(once, u * math.sqrt(2 / math.pi), rtol=1e-4)


def test_normalize_rejects(mesh_pi):
    with pytest.raises(ValueError):
        normalize(mesh_pi, np.zeros(mesh_pi.n), "sup_norm")
    with pytest.raises(ValueError):
        normalize(mesh_pi, np.ones(mesh_pi.n), "l2")


def test_torsion_function_unit_interval():
    mesh = interval_mesh(1.0, 512)
    w = torsion_function(mesh)
    x = mesh.coords[:, 0]
    np.testing.assert_allclose(w, x * (1 - x) / 2, atol=1e-9)


def test_torsion_function_interval_pi(mesh_pi):
    assert sup_norm(torsion_function(mesh_pi)) == pytest.approx(math.pi**2 / 8, rel=1e-5)


@pytest.mark.parametrize(
    "length, expected",
    [
        (1.0, 12**-0.5),
        (math.pi, math.sqrt(math.pi**3 / 12)),
    ],
)
def test_sobolev_c1_interval(length, expected):
    assert sobolev_c1(interval_mesh(length, 512)) == pytest.approx(expected, rel=1e-4)


def test_sobolev_c1_converges_second_order():
    c1s = [sobolev_c1(interval_mesh(1.0, cells)) for cells in (16, 32, 64)]
    ratio = (c1s[0] - c1s[1]) / (c1s[1] - c1s[2])
    assert 3.5 <= ratio <= 4.5


def test_embedding_ratio_bounded_and_attained():
    mesh = interval_mesh(math.pi, 64)
    c1 = sobolev_c1(mesh)
    rng = np.random.default_rng(7)
    for _ in range(1000):
        u = rng.standard_normal(mesh.n)
        assert embedding_ratio(mesh, u) <= c1 * (1 + 1e-8)
    assert embedding_ratio(mesh, torsion_function(mesh)) == pytest.approx(c1, rel=1e-8)


def test_embedding_ratio_square():
    mesh = build_mesh(DomainSpec(dimension=2, lengths=(1.0, 2.0), cells=(16, 16)))
    c1 = sobolev_c1(mesh)
    rng = np.random.default_rng(3)
    for _ in range(200):
        assert embedding_ratio(mesh, rng.random(mesh.n)) <= c1 * (1 + 1e-8)


def test_embedding_trials_are_seeded():
    mesh = interval_mesh(math.pi, 64)
    c1 = sobolev_c1(mesh)
    first = embedding_trials(mesh, c1, seed=5, n_trials=50)
    assert first == embedding_trials(mesh, c1, seed=5, n_trials=50)
    assert first["max_ratio"] != embedding_trials(mesh, c1, seed=6, n_trials=50)["max_ratio"]
    assert first["seed"] == 5
    assert first["holds"]
    assert 0 < first["max_ratio"] <= c1
    # an understated constant is caught
    assert not embedding_trials(mesh, 0.5 * first["max_ratio"], seed=5, n_trials=50)["holds"]


def test_eigen_summary(eig_pi):
    summary = eigen_summary(eig_pi)
    assert set(summary) == {"lambda1", "C1", "volume", "p", "int_e1_pow_p"}
    assert summary["lambda1"] == eig_pi.lambda1


def test_compute_eigen_pack_power():
    mesh = interval_mesh(math.pi, 128)
    eig = compute_eigen_pack(mesh, p=2)
    assert eig.p == 2
    assert eig.int_e1_pow_p == pytest.approx(eig.int_e1_sq)
