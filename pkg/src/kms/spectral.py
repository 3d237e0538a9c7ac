"""Principal Dirichlet eigenpair and the L1-H1_0 embedding constant"""
from __future__ import annotations

import dataclasses
import logging
import math
from typing import Literal

import numpy as np

from . import constants
from .discretization import (
    Field,
    Mesh,
    cg_solve,
    grad_norm_sq,
    integrate_power,
    solve_dirichlet,
    sup_norm,
)
from .errors import SolverError


logger = logging.getLogger(__name__)


NormalizeMode = Literal["grad_norm", "sup_norm"]


@dataclasses.dataclass(frozen=True, eq=False)
class EigenPack:
    """Spectral data of a mesh, for a given exponent p.

    Attributes
    ----------
    lambda1 : float
        Principal eigenvalue of -Delta_h.
    phi1 : numpy.ndarray
        Principal eigenfunction with unit gradient norm.
    e1 : numpy.ndarray
        Principal eigenfunction with unit sup norm.
    C1 : float
        Best constant in |u|_1 <= C1 ||u||.
    volume : float
        |Omega|.
    p : float
        Exponent of the nonlocal term.
    int_e1_pow_p : float
        Integral of e1**p.
    int_e1_sq : float
        Integral of e1**2.
    """
    lambda1: float
    phi1: Field
    e1: Field
    C1: float
    volume: float
    p: float
    int_e1_pow_p: float
    int_e1_sq: float

    def require_exponent(self, p: float) -> None:
        """Raise ValueError unless this pack was computed for exponent ``p``."""
        if p != self.p:
            raise ValueError(
                f"eigen pack was computed for p={self.p}, but the model uses p={p}"
            )


def principal_eigenpair(
    mesh: Mesh,
    tol: float = constants.EIGEN_TOL,
    cg_rtol: float = constants.CG_RTOL,
    max_iter: int = constants.EIGEN_MAX_ITER,
) -> tuple[float, Field]:
    """Inverse power iteration on -Delta_h, starting from a constant vector.

    Returns the Rayleigh quotient and a positive eigenvector with unit sup norm.
    Stops when ||A v - lambda v||_inf <= tol * lambda * ||v||_inf.
    """
    matrix = mesh.matrix
    v = np.ones(mesh.n)
    lam = None
    for iteration in range(1, max_iter + 1):
        x0 = None if lam is None else v / lam
        w = cg_solve(matrix, v, rtol=cg_rtol, x0=x0)
        v = w / sup_norm(w)
        av = matrix @ v
        lam = float(v @ av / (v @ v))
        residual = sup_norm(av - lam * v)
        logger.debug(
            f"inverse iteration {iteration}: lambda={lam:.15g}, residual={residual:.3e}"
        )
        if residual <= tol * lam * sup_norm(v):
            break
    else:
        raise SolverError(
            f"Inverse power iteration did not reach tol={tol} in {max_iter} iterations"
        )

    if np.any(v <= 0):
        raise SolverError(
            "Principal eigenvector is not strictly positive at all interior nodes"
        )
    logger.info(f"Principal eigenvalue lambda1={lam:.12g} after {iteration} iterations")
    return lam, v


def normalize(mesh: Mesh, v: Field, mode: NormalizeMode) -> Field:
    """Scale ``v`` to unit gradient norm or unit sup norm."""
    v = np.asarray(v, dtype=float)
    if mode == "grad_norm":
        scale = math.sqrt(grad_norm_sq(mesh, v))
    elif mode == "sup_norm":
        scale = sup_norm(v)
    else:
        raise ValueError(f"Unknown normalization mode: {mode}")
    if scale == 0:
        raise ValueError("Cannot normalize the zero field")
    return v / scale


def torsion_function(mesh: Mesh, cg_rtol: float = constants.CG_RTOL) -> Field:
    """Solution of -Delta_h w = 1."""
    w = solve_dirichlet(mesh, np.ones(mesh.n), rtol=cg_rtol)
    if np.any(w <= 0):
        raise SolverError("Torsion function is not strictly positive")
    return w


def sobolev_c1(mesh: Mesh, cg_rtol: float = constants.CG_RTOL) -> float:
    """C1 = (integral of the torsion function) ** 1/2"""
    return math.sqrt(integrate_power(mesh, torsion_function(mesh, cg_rtol), 1))


def embedding_ratio(mesh: Mesh, u: Field) -> float:
    """|u|_1 / ||u||, bounded above by C1."""
    return integrate_power(mesh, np.abs(u), 1) / math.sqrt(grad_norm_sq(mesh, u))


def embedding_trials(mesh: Mesh, c1: float, seed: int,
                     n_trials: int = constants.N_EMBEDDING_TRIALS) -> dict:
    """Largest |u|_1 / ||u|| over seeded random nonnegative fields, checked against C1."""
    rng = np.random.default_rng(seed)
    max_ratio = max(embedding_ratio(mesh, rng.random(mesh.n)) for _ in range(n_trials))
    holds = max_ratio <= c1 * (1 + constants.EMBEDDING_RTOL)
    if not holds:
        logger.warning(f"Random field beats the embedding constant: {max_ratio:.12g} > C1={c1:.12g}")
    return {"seed": seed, "n_trials": n_trials, "max_ratio": max_ratio, "holds": holds}


def compute_eigen_pack(
    mesh: Mesh,
    p: float,
    tol: float = constants.EIGEN_TOL,
    cg_rtol: float = constants.CG_RTOL,
) -> EigenPack:
    lambda1, v = principal_eigenpair(mesh, tol=tol, cg_rtol=cg_rtol)
    e1 = normalize(mesh, v, "sup_norm")
    phi1 = normalize(mesh, v, "grad_norm")
    c1 = sobolev_c1(mesh, cg_rtol)
    logger.info(f"Embedding constant C1={c1:.12g}")
    return EigenPack(
        lambda1=lambda1,
        phi1=phi1,
        e1=e1,
        C1=c1,
        volume=mesh.volume,
        p=p,
        int_e1_pow_p=integrate_power(mesh, e1, p),
        int_e1_sq=integrate_power(mesh, e1, 2),
    )


def eigen_summary(eig: EigenPack) -> dict:
    return {
        "lambda1": eig.lambda1,
        "C1": eig.C1,
        "volume": eig.volume,
        "p": eig.p,
        "int_e1_pow_p": eig.int_e1_pow_p,
    }
