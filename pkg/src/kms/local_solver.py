"""Monotone iteration for the frozen local problem -a(alpha) Delta u = f_star(u)"""
from __future__ import annotations

import dataclasses
import logging
import math
from typing import Literal

import numpy as np
import scipy.sparse
import scipy.sparse.linalg

from . import constants
from .discretization import Field, Mesh, cg_solve, grad_norm_sq, sup_norm
from .errors import (
    DegenerateCoefficientError,
    HypothesisError,
    MonotonicityError,
    SolverError,
)
from .model import (
    ModelSpec,
    eval_Fstar,
    eval_fstar,
    gamma_value,
    max_coefficient,
    psi_inverse,
)
from .spectral import EigenPack


logger = logging.getLogger(__name__)


Side = Literal["sub", "super"]


@dataclasses.dataclass(frozen=True, eq=False)
class LocalProblem:
    """The problem -a(alpha) Delta_h u = f_star(u) for a fixed alpha."""
    alpha: float
    a_alpha: float
    model: ModelSpec
    mesh: Mesh
    eig: EigenPack

    @classmethod
    def from_model(cls, model: ModelSpec, mesh: Mesh, eig: EigenPack,
                   alpha: float, a_min: float | None = None) -> LocalProblem:
        """Freeze the coefficient at ``alpha``.

        ``a_min`` defaults to a fixed fraction of max a; pass it in when
        building many problems for the same model.
        """
        eig.require_exponent(model.p)
        if a_min is None:
            a_min = constants.A_MIN_FACTOR * max_coefficient(model)
        a_alpha = float(model.a(alpha))
        if not a_alpha > 0 or a_alpha < a_min:
            raise DegenerateCoefficientError(
                f"a({alpha}) = {a_alpha:.3e} is below the floor a_min = {a_min:.3e}"
            )
        return cls(alpha=float(alpha), a_alpha=a_alpha, model=model, mesh=mesh, eig=eig)


@dataclasses.dataclass(frozen=True, eq=False)
class LocalSolution:
    """Result of :func:`monotone_solve`.

    Attributes
    ----------
    alpha : float
    a_alpha : float
    u : numpy.ndarray
    energy : float
        Discrete energy 1/2 a ||u||^2 - int F_star(u).
    sup_residual : float
        ||-a Delta_h u - f_star(u)||_inf.
    iterations : int
    side : str
        'sub' or 'super'.
    increment : float
        Sup norm of the last increment.
    """
    alpha: float
    a_alpha: float
    u: Field
    energy: float
    sup_residual: float
    iterations: int
    side: str
    increment: float


def shift_for(model: ModelSpec) -> float:
    """SHIFT_FACTOR times the sampled Lipschitz constant of f_star on [0, t_star]."""
    ts = np.linspace(0.0, model.t_star, constants.SHIFT_SAMPLES + 1)
    slopes = np.abs(np.diff(eval_fstar(model, ts))) / np.diff(ts)
    return constants.SHIFT_FACTOR * float(np.max(slopes))


def energy(problem: LocalProblem, u: Field) -> float:
    mesh = problem.mesh
    return (
        0.5 * problem.a_alpha * grad_norm_sq(mesh, u)
        - float(np.sum(eval_Fstar(problem.model, u))) * mesh.cell_volume
    )


def residual(problem: LocalProblem, u: Field) -> float:
    return sup_norm(
        problem.a_alpha * (problem.mesh.matrix @ u) - eval_fstar(problem.model, u)
    )


def subsolution_init(problem: LocalProblem) -> Field:
    """z = psi_inverse(lambda1 a(alpha)) e1, a nodal subsolution."""
    model, eig = problem.model, problem.eig
    s = eig.lambda1 * problem.a_alpha
    gamma = gamma_value(model.f)
    if not s < gamma:
        raise HypothesisError(
            "H3", f"lambda1 a(alpha) = {s:.12g} must be below gamma = {gamma:.12g} (alpha={problem.alpha})"
        )
    z = psi_inverse(model, s, gamma) * eig.e1
    defect = float(np.max(
        problem.a_alpha * (problem.mesh.matrix @ z) - eval_fstar(model, z)
    ))
    if defect > constants.SUBSOLUTION_SLACK:
        raise SolverError(
            f"Initial field is not a subsolution at alpha={problem.alpha}: defect {defect:.3e}"
        )
    return z


def _inner_solver(operator, inner_solver: str, cg_rtol: float):
    if inner_solver == "splu":
        factor = scipy.sparse.linalg.splu(operator.tocsc())
        return lambda rhs, x0: factor.solve(rhs)
    if inner_solver == "cg":
        return lambda rhs, x0: cg_solve(operator, rhs, rtol=cg_rtol, x0=x0)
    raise ValueError(
        f"inner_solver must be one of {constants.INNER_SOLVERS}, got: {inner_solver}"
    )


def monotone_solve(
    problem: LocalProblem,
    side: Side = "sub",
    tol: float = constants.LOCAL_TOL,
    max_iter: int = constants.LOCAL_MAX_ITER,
    inner_solver: str = constants.DEFAULT_INNER_SOLVER,
    cg_rtol: float = constants.CG_RTOL,
) -> LocalSolution:
    """Shifted monotone iteration u <- (a A + sigma I)^-1 (f_star(u) + sigma u).

    From the subsolution z (``side='sub'``, increasing iterates) or from the
    constant t_star (``side='super'``, decreasing iterates). Stops once the
    increment and the contraction estimate rho/(1-rho) * increment are both
    below ``tol``.
    """
    model, mesh = problem.model, problem.mesh
    sigma = shift_for(model)
    operator = problem.a_alpha * mesh.matrix + sigma * scipy.sparse.identity(mesh.n, format="csr")
    solve = _inner_solver(operator, inner_solver, cg_rtol)

    if side == "sub":
        u = subsolution_init(problem)
        direction = 1.0
    elif side == "super":
        u = np.full(mesh.n, model.t_star)
        direction = -1.0
    else:
        raise ValueError(f"side must be 'sub' or 'super', got: {side}")

    slack = constants.MONOTONE_SLACK * max(1.0, model.t_star)
    previous_step = None
    for iteration in range(1, max_iter + 1):
        u_new = solve(eval_fstar(model, u) + sigma * u, u)
        increment = u_new - u
        wrong_way = float(np.max(-direction * increment))
        if wrong_way > slack:
            raise MonotonicityError(
                f"{side}-side iterate {iteration} at alpha={problem.alpha} moved the wrong way "
                f"by {wrong_way:.3e} (shift sigma={sigma:.6g})"
            )
        step = sup_norm(increment)
        u = u_new
        logger.debug(f"alpha={problem.alpha}, {side} iterate {iteration}: increment {step:.3e}")
        if side == "super" and iteration % constants.ENERGY_LOG_EVERY == 0:
            logger.debug(f"super-side energy at iterate {iteration}: {energy(problem, u):.15g}")

        if step <= tol:
            if step <= 1e-3 * tol:
                break
            if previous_step:
                rho = step / previous_step
                if rho < 1 and rho / (1.0 - rho) * step <= tol:
                    break
        previous_step = step
    else:
        raise SolverError(
            f"Monotone iteration at alpha={problem.alpha} ({side} side) did not converge "
            f"within {max_iter} iterations; last increment {step:.3e}"
        )

    if np.any(u <= 0) or np.any(u > model.t_star + slack):
        raise SolverError(
            f"Solution at alpha={problem.alpha} left the box (0, t_star]: "
            f"min {u.min():.3e}, max {u.max():.6g}"
        )
    solution_energy = energy(problem, u)
    if solution_energy >= 0:
        logger.warning(
            f"Energy at alpha={problem.alpha} is not negative: {solution_energy:.3e}"
        )
    return LocalSolution(
        alpha=problem.alpha,
        a_alpha=problem.a_alpha,
        u=u,
        energy=solution_energy,
        sup_residual=residual(problem, u),
        iterations=iteration,
        side=side,
        increment=step,
    )


def certify_energy_bound(problem: LocalProblem, u: Field, eps: float | None = None) -> bool:
    """Check energy(u) <= -1/2 eps psi_inverse(lambda1 a + eps)^2 int e1^2.

    With the default eps = (gamma - lambda1 a)/2 the check is vacuous when
    gamma is infinite.
    """
    eig = problem.eig
    gamma = gamma_value(problem.model.f)
    s = eig.lambda1 * problem.a_alpha
    if eps is None:
        if math.isinf(gamma):
            return True
        eps = 0.5 * (gamma - s)
    if not (eps > 0 and s + eps < gamma):
        raise ValueError(
            f"eps must lie in (0, gamma - lambda1 a) = (0, {gamma - s:.6g}), got: {eps}"
        )
    zeta = psi_inverse(problem.model, s + eps, gamma)
    bound = -0.5 * eps * zeta**2 * eig.int_e1_sq
    return energy(problem, u) <= bound + constants.CERTIFICATE_SLACK


def certify_norm_bound(problem: LocalProblem, u: Field) -> bool:
    """a ||u||^2 <= 2 F_star(t_star) |Omega|, which follows from negative energy."""
    model = problem.model
    bound = 2.0 * eval_Fstar(model, model.t_star) * problem.mesh.volume
    return problem.a_alpha * grad_norm_sq(problem.mesh, u) <= bound + constants.CERTIFICATE_SLACK


def small_amplitude_slope(problem: LocalProblem, t: float = 1e-4) -> float:
    """energy(t phi1) / t^2; negative means the zero state is not a minimizer."""
    return energy(problem, t * problem.eig.phi1) / t**2
