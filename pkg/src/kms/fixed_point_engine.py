"""Scan the mass map P_k(alpha), locate its fixed points and assemble
the ordered family of solutions of the nonlocal problem."""
from __future__ import annotations

import dataclasses
import functools
import logging
import math
import sys
from typing import Callable

import dask
import numpy as np
import pandas as pd
import pandera as pa
from dask.diagnostics import ProgressBar
from tqdm import tqdm

from . import constants
from .discretization import (
    Field,
    Mesh,
    grad_norm_sq,
    integrate_power,
    solve_dirichlet,
    sup_norm,
)
from .errors import (
    FixedPointError,
    HypothesisError,
    OrderingError,
    SolverError,
)
from .local_solver import (
    LocalProblem,
    LocalSolution,
    certify_energy_bound,
    certify_norm_bound,
    monotone_solve,
    small_amplitude_slope,
    subsolution_init,
)
from .model import (
    HypothesisReport,
    ModelSpec,
    check_hypotheses,
    eval_fstar,
    gamma_value,
    max_coefficient,
    max_fstar,
    psi_inverse,
)
from .spectral import EigenPack


logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ScanConfig:
    """Parameters of the scan and of the bisection refinement.

    Attributes
    ----------
    n_samples : int
        Number of alpha values per bump, at least 16.
    delta_factor : float
        Endpoint margin as a fraction of the bump width, below 1/4.
    a_min_factor : float
        Floor on a(alpha) as a fraction of max a.
    local_tol : float
        Tolerance of the monotone iteration.
    refine_tol : float, optional
        Bisection tolerance on alpha and on |P - alpha|. Default 1e-8 t_K.
    nonlocal_tol : float, optional
        Bound on the residual of the nonlocal equation. Default 1e-6 max f.
    max_iter : int
        Iteration cap of the monotone iteration.
    inner_solver : str
        'splu' or 'cg'.
    certify : bool
        Whether to certify the bounds at every scanned point.
    max_bisection_steps : int
    """
    n_samples: int = constants.N_SAMPLES
    delta_factor: float = constants.DELTA_FACTOR
    a_min_factor: float = constants.A_MIN_FACTOR
    local_tol: float = constants.LOCAL_TOL
    refine_tol: float | None = None
    nonlocal_tol: float | None = None
    max_iter: int = constants.LOCAL_MAX_ITER
    inner_solver: str = constants.DEFAULT_INNER_SOLVER
    certify: bool = True
    max_bisection_steps: int = constants.MAX_BISECTION_STEPS

    def __post_init__(self):
        if self.n_samples < constants.MIN_N_SAMPLES:
            raise ValueError(
                f"n_samples must be >= {constants.MIN_N_SAMPLES}, got: {self.n_samples}"
            )
        if not 0 < self.delta_factor < 0.25:
            raise ValueError(f"delta_factor must lie in (0, 1/4), got: {self.delta_factor}")
        if self.inner_solver not in constants.INNER_SOLVERS:
            raise ValueError(
                f"inner_solver must be one of {constants.INNER_SOLVERS}, got: {self.inner_solver}"
            )
        for name in ("a_min_factor", "local_tol", "refine_tol", "nonlocal_tol"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"{name} must be positive, got: {value}")
        if self.max_iter < 1 or self.max_bisection_steps < 1:
            raise ValueError("max_iter and max_bisection_steps must be positive")


@dataclasses.dataclass(frozen=True)
class Thresholds:
    """Model-dependent values derived once from a ScanConfig."""
    a_min: float
    refine_tol: float
    nonlocal_tol: float
    max_f: float
    gamma: float


def resolve_thresholds(model: ModelSpec, config: ScanConfig) -> Thresholds:
    max_f = max_fstar(model)
    refine_tol = config.refine_tol
    if refine_tol is None:
        refine_tol = constants.REFINE_TOL_FACTOR * model.knots.t_K
    nonlocal_tol = config.nonlocal_tol
    if nonlocal_tol is None:
        nonlocal_tol = constants.NONLOCAL_TOL_FACTOR * max_f
    return Thresholds(
        a_min=config.a_min_factor * max_coefficient(model),
        refine_tol=refine_tol,
        nonlocal_tol=nonlocal_tol,
        max_f=max_f,
        gamma=gamma_value(model.f),
    )


@dataclasses.dataclass(frozen=True, eq=False)
class CurvePoint:
    alpha: float
    P: float
    g: float
    a_alpha: float
    lower_bound: float
    upper_bound: float
    solution: LocalSolution | None = dataclasses.field(default=None, repr=False)


@dataclasses.dataclass(frozen=True, eq=False)
class FixedPoint:
    """A solution of the nonlocal problem found in bump k.

    ``label`` is 'alpha_1' for the first crossing, 'alpha_2' for the last,
    'extra' for any crossing in between.
    """
    k: int
    alpha_star: float
    u: Field
    mass: float
    index_in_bump: int
    label: str
    bracket: tuple[float, float]
    defect: float
    nonlocal_residual: float
    energy: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "label": self.label,
            "index_in_bump": self.index_in_bump,
            "alpha_star": self.alpha_star,
            "mass": self.mass,
            "bracket": list(self.bracket),
            "defect": self.defect,
            "nonlocal_residual": self.nonlocal_residual,
            "energy": self.energy,
            "sup_norm": sup_norm(self.u),
        }


@dataclasses.dataclass(frozen=True)
class PointCertificate:
    """Inequalities certified at one scanned alpha."""
    alpha: float
    mass_lower_bound: bool
    mass_upper_bound: bool
    identity_gap: float
    auxiliary_norm_bound: bool
    subsolution_ordering: bool
    energy_bound: bool
    norm_bound: bool
    small_amplitude_slope: float

    @property
    def all_hold(self) -> bool:
        return (
            self.mass_lower_bound
            and self.mass_upper_bound
            and self.identity_gap <= constants.CLAIM2_GAP_TOL
            and self.auxiliary_norm_bound
            and self.subsolution_ordering
            and self.energy_bound
            and self.norm_bound
            and self.small_amplitude_slope < 0
        )


@dataclasses.dataclass(frozen=True)
class Claim2Diagnostic:
    """Cross-check of P against (1/a) int f_star(u) w, with -Delta w = u^(p-1)."""
    gap: float
    w_norm: float
    w_norm_bound: float

    @property
    def holds(self) -> bool:
        return self.gap <= constants.CLAIM2_GAP_TOL and self.w_norm <= self.w_norm_bound * (1 + 1e-10)


@dataclasses.dataclass(frozen=True)
class RefinementCheck:
    """Largest gap between a coarse scan's interpolant and a finer scan,
    against the interpolation error bound H**2 / 8 max |P''|."""
    discrepancy: float
    bound: float

    @property
    def holds(self) -> bool:
        return (
            self.discrepancy
            <= constants.CONTINUITY_SAFETY_FACTOR * self.bound + constants.CERTIFICATE_SLACK
        )


@dataclasses.dataclass(frozen=True, eq=False)
class BumpResult:
    k: int
    interval: tuple[float, float]
    curve: list[CurvePoint]
    fixed_points: list[FixedPoint]
    certificates: list[PointCertificate]


@dataclasses.dataclass(frozen=True, eq=False)
class TheoremReport:
    bumps: list[BumpResult]
    chain: list[tuple[str, float]]
    chain_margin: float
    hypotheses: HypothesisReport
    forced: bool

    @property
    def fixed_points(self) -> list[FixedPoint]:
        return [point for bump in self.bumps for point in bump.fixed_points]

    def certificate_summary(self) -> dict:
        certificates = [c for bump in self.bumps for c in bump.certificates]
        summary = {"checked": len(certificates)}
        for name in (
            "mass_lower_bound",
            "mass_upper_bound",
            "auxiliary_norm_bound",
            "subsolution_ordering",
            "energy_bound",
            "norm_bound",
        ):
            summary[name] = sum(not getattr(c, name) for c in certificates)
        summary["identity_gap_max"] = max((c.identity_gap for c in certificates), default=0.0)
        summary["small_amplitude_slope_max"] = max(
            (c.small_amplitude_slope for c in certificates), default=-math.inf
        )
        summary["all_hold"] = all(c.all_hold for c in certificates)
        return summary

    def to_dict(self) -> dict:
        return {
            "forced": self.forced,
            "hypotheses": self.hypotheses.to_dict(),
            "bumps": [
                {
                    "k": bump.k,
                    "interval": list(bump.interval),
                    "n_scanned": len(bump.curve),
                    "fixed_points": [point.to_dict() for point in bump.fixed_points],
                }
                for bump in self.bumps
            ],
            "chain": [{"label": label, "value": value} for label, value in self.chain],
            "chain_margin": self.chain_margin,
            "certificates": self.certificate_summary(),
        }


def _compute(todo: list, n_workers: int | None, progress: bool) -> list:
    """Compute dask delayed objects, results in submission order."""
    if progress:
        with ProgressBar(out=sys.stderr):
            return list(dask.compute(*todo, scheduler="threads", num_workers=n_workers))
    return list(dask.compute(*todo, scheduler="threads", num_workers=n_workers))


def eval_P(
    model: ModelSpec,
    mesh: Mesh,
    eig: EigenPack,
    k: int,
    alpha: float,
    config: ScanConfig = ScanConfig(),
    thresholds: Thresholds | None = None,
) -> CurvePoint:
    """P_k(alpha) from the sub-side solve, with its lower and upper bounds."""
    lo, hi = model.knots.interval(k)
    if not lo < alpha < hi:
        raise ValueError(f"alpha={alpha} is not inside bump {k} = ({lo}, {hi})")
    if thresholds is None:
        thresholds = resolve_thresholds(model, config)

    problem = LocalProblem.from_model(model, mesh, eig, alpha, a_min=thresholds.a_min)
    solution = monotone_solve(
        problem,
        side="sub",
        tol=config.local_tol,
        max_iter=config.max_iter,
        inner_solver=config.inner_solver,
    )
    P = integrate_power(mesh, solution.u, model.p)
    a_alpha = problem.a_alpha
    lower_bound = (
        psi_inverse(model, eig.lambda1 * a_alpha, thresholds.gamma) ** model.p
        * eig.int_e1_pow_p
    )
    upper_bound = (
        thresholds.max_f * eig.C1 * model.t_star ** (model.p - 1) * math.sqrt(eig.volume)
        / (a_alpha * math.sqrt(eig.lambda1))
    )
    return CurvePoint(
        alpha=float(alpha),
        P=P,
        g=P - alpha,
        a_alpha=a_alpha,
        lower_bound=lower_bound,
        upper_bound=upper_bound,
        solution=solution,
    )


def scan_curve(
    model: ModelSpec,
    mesh: Mesh,
    eig: EigenPack,
    k: int,
    n_samples: int | None = None,
    delta: float | None = None,
    config: ScanConfig = ScanConfig(),
    n_workers: int | None = None,
    progress: bool = False,
) -> list[CurvePoint]:
    """Evaluate P_k on a uniform grid of [t_{k-1} + delta, t_k - delta]."""
    lo, hi = model.knots.interval(k)
    width = hi - lo
    if n_samples is None:
        n_samples = config.n_samples
    if n_samples < constants.MIN_N_SAMPLES:
        raise ValueError(
            f"n_samples must be >= {constants.MIN_N_SAMPLES}, got: {n_samples}"
        )
    if delta is None:
        delta = config.delta_factor * width
    if not 0 < delta < width / 4:
        raise ValueError(f"delta must lie in (0, {width / 4}), got: {delta}")

    thresholds = resolve_thresholds(model, config)
    alphas = np.linspace(lo + delta, hi - delta, n_samples)
    valid = [float(alpha) for alpha in alphas if model.a(alpha) >= thresholds.a_min]
    if len(valid) < n_samples:
        logger.info(f"Skipping {n_samples - len(valid)} alpha values with a(alpha) < a_min")
    if len(valid) < 2:
        raise ValueError(
            f"Fewer than 2 alpha values in bump {k} have a(alpha) >= a_min = {thresholds.a_min:.3e}"
        )

    logger.info(f"Scanning bump {k} = ({lo}, {hi}) at {len(valid)} values of alpha")
    todo = [
        dask.delayed(eval_P)(model, mesh, eig, k, alpha, config, thresholds)
        for alpha in valid
    ]
    curve = _compute(todo, n_workers, progress)
    return sorted(curve, key=lambda point: point.alpha)


CURVE_SCHEMA = pa.DataFrameSchema(
    {
        "alpha": pa.Column(float, pa.Check.gt(0)),
        "P": pa.Column(float, pa.Check.gt(0)),
        "g": pa.Column(float),
        "a_alpha": pa.Column(float, pa.Check.gt(0)),
        "lower_bound": pa.Column(float, pa.Check.gt(0)),
        "upper_bound": pa.Column(float, pa.Check.gt(0)),
    },
    checks=[
        pa.Check(
            lambda df: df["alpha"].is_monotonic_increasing and df["alpha"].is_unique,
            error="alpha is not strictly increasing",
        ),
        pa.Check(
            lambda df: df["P"] >= df["lower_bound"] - constants.CERTIFICATE_SLACK,
            error="P is below its lower bound",
        ),
    ],
    strict=True,
    ordered=True,
)


def curve_frame(curve: list[CurvePoint], validate: bool = True) -> pd.DataFrame:
    df = pd.DataFrame.from_records(
        [
            {column: getattr(point, column) for column in constants.CURVE_COLUMNS}
            for point in curve
        ],
        columns=list(constants.CURVE_COLUMNS),
    )
    if validate:
        df = CURVE_SCHEMA.validate(df)
    return df


def refinement_check(coarse: list[CurvePoint], fine: list[CurvePoint]) -> RefinementCheck:
    """Check that refining a scan moves the interpolant of P by no more than
    its curvature allows. A smoke test for continuity, not a certificate."""
    coarse_alpha = np.array([point.alpha for point in coarse])
    coarse_P = np.array([point.P for point in coarse])
    fine_alpha = np.array([point.alpha for point in fine])
    fine_P = np.array([point.P for point in fine])
    if coarse_alpha.size < 2 or fine_alpha.size < 3:
        raise ValueError("need at least 2 coarse and 3 fine points")
    if fine_alpha[0] > coarse_alpha[0] or fine_alpha[-1] < coarse_alpha[-1]:
        raise ValueError(
            f"fine scan ({fine_alpha[0]}, {fine_alpha[-1]}) does not cover "
            f"the coarse scan ({coarse_alpha[0]}, {coarse_alpha[-1]})"
        )

    inside = (fine_alpha >= coarse_alpha[0]) & (fine_alpha <= coarse_alpha[-1])
    interpolant = np.interp(fine_alpha[inside], coarse_alpha, coarse_P)
    discrepancy = float(np.max(np.abs(interpolant - fine_P[inside])))

    slopes = np.diff(fine_P) / np.diff(fine_alpha)
    curvature = 2 * np.diff(slopes) / (fine_alpha[2:] - fine_alpha[:-2])
    spacing = float(np.max(np.diff(coarse_alpha)))
    bound = spacing**2 / 8 * float(np.max(np.abs(curvature)))

    check = RefinementCheck(discrepancy=discrepancy, bound=bound)
    logger.info(
        f"Scan refinement: interpolant moved by {discrepancy:.3e}, curvature bound {bound:.3e}"
    )
    return check


def nonlocal_residual(model: ModelSpec, mesh: Mesh, u: Field) -> float:
    """||a(int u^p) (-Delta_h u) - f_star(u)||_inf"""
    mass = integrate_power(mesh, u, model.p)
    return sup_norm(float(model.a(mass)) * (mesh.matrix @ u) - eval_fstar(model, u))


def _refine_bracket(
    left: CurvePoint,
    right: CurvePoint,
    refine_tol: float,
    evaluate: Callable[[float], CurvePoint],
    residual_of: Callable[[CurvePoint], float],
    nonlocal_tol: float,
    max_steps: int,
) -> tuple[CurvePoint, tuple[float, float]]:
    """Bisection on g = P - alpha between two points of opposite sign."""
    lo, hi = left, right
    bracket = (lo.alpha, hi.alpha)

    def converged(point: CurvePoint) -> bool:
        return abs(point.g) <= refine_tol and residual_of(point) <= nonlocal_tol

    for _ in range(max_steps):
        best = min((lo, hi), key=lambda point: abs(point.g))
        bracket = (lo.alpha, hi.alpha)
        if hi.alpha - lo.alpha <= refine_tol and converged(best):
            return best, bracket
        mid_alpha = 0.5 * (lo.alpha + hi.alpha)
        if mid_alpha in (lo.alpha, hi.alpha):
            logger.warning(
                f"Bisection reached floating-point resolution at alpha={best.alpha!r} "
                f"with |g| = {abs(best.g):.3e}"
            )
            return best, bracket
        mid = evaluate(mid_alpha)
        if mid.g == 0:
            lo = hi = mid
        elif math.copysign(1.0, mid.g) == math.copysign(1.0, lo.g):
            lo = mid
        else:
            hi = mid
    best = min((lo, hi), key=lambda point: abs(point.g))
    logger.warning(
        f"Bisection stopped after {max_steps} steps at alpha={best.alpha!r} with |g| = {abs(best.g):.3e}"
    )
    return best, (lo.alpha, hi.alpha)


def find_fixed_points(
    curve: list[CurvePoint],
    refine_tol: float,
    evaluate: Callable[[float], CurvePoint],
    residual_of: Callable[[CurvePoint], float] | None = None,
    nonlocal_tol: float = math.inf,
    k: int = 0,
    max_steps: int = constants.MAX_BISECTION_STEPS,
    n_workers: int | None = None,
) -> list[FixedPoint]:
    """Bracket every sign change of g along ``curve`` and refine it by bisection.

    ``evaluate`` re-solves the local problem at a new alpha. Points without
    a solution attached (synthetic curves) are reported with an empty field.
    """
    if len(curve) < 2:
        raise ValueError(f"Need at least 2 curve points, got {len(curve)}")
    if residual_of is None:
        residual_of = lambda point: 0.0  # noqa: E731

    brackets = []
    for left, right in zip(curve[:-1], curve[1:]):
        if left.g == 0:
            brackets.append((left, left))
        elif left.g * right.g < 0:
            brackets.append((left, right))
    if curve[-1].g == 0:
        brackets.append((curve[-1], curve[-1]))

    if len(brackets) < 2:
        raise FixedPointError(
            f"Found {len(brackets)} sign change(s) of P - alpha in bump {k}, expected at least 2. "
            f"g ranges over [{min(p.g for p in curve):.6g}, {max(p.g for p in curve):.6g}] "
            f"on alpha in [{curve[0].alpha:.6g}, {curve[-1].alpha:.6g}]; "
            "refine the mesh, reduce delta, or check the hypotheses",
            k=k,
            curve=curve,
        )

    todo = [
        dask.delayed(_refine_bracket)(
            left, right, refine_tol, evaluate, residual_of, nonlocal_tol, max_steps
        )
        for left, right in brackets
    ]
    refined = _compute(todo, n_workers, progress=False)

    fixed_points = []
    for index, (point, bracket) in enumerate(refined, start=1):
        if index == 1:
            label = "alpha_1"
        elif index == len(refined):
            label = "alpha_2"
        else:
            label = "extra"
        solution = point.solution
        fixed_points.append(
            FixedPoint(
                k=k,
                alpha_star=point.alpha,
                u=solution.u if solution is not None else np.empty(0),
                mass=point.P,
                index_in_bump=index,
                label=label,
                bracket=bracket,
                defect=abs(point.g),
                nonlocal_residual=residual_of(point),
                energy=solution.energy if solution is not None else math.nan,
            )
        )
        logger.info(
            f"Fixed point {label} in bump {k}: alpha*={point.alpha:.12g}, |g|={abs(point.g):.3e}"
        )
    return fixed_points


def claim2_diagnostic(
    model: ModelSpec, mesh: Mesh, eig: EigenPack, k: int, sol: LocalSolution
) -> Claim2Diagnostic:
    """Recompute P as (1/a) int f_star(u) w with -Delta_h w = u^(p-1),
    and bound ||w|| by lambda1^(-1/2) t_star^(p-1) |Omega|^(1/2)."""
    lo, hi = model.knots.interval(k)
    if not lo < sol.alpha < hi:
        raise ValueError(f"Solution alpha={sol.alpha} is not inside bump {k}")
    u = sol.u
    w = solve_dirichlet(mesh, u ** (model.p - 1))
    direct = integrate_power(mesh, u, model.p)
    identity = float(np.sum(eval_fstar(model, u) * w)) * mesh.cell_volume / sol.a_alpha
    return Claim2Diagnostic(
        gap=abs(direct - identity) / direct,
        w_norm=math.sqrt(grad_norm_sq(mesh, w)),
        w_norm_bound=(
            model.t_star ** (model.p - 1) * math.sqrt(eig.volume) / math.sqrt(eig.lambda1)
        ),
    )


def certify_point(
    model: ModelSpec, mesh: Mesh, eig: EigenPack, k: int, point: CurvePoint
) -> PointCertificate:
    solution = point.solution
    if solution is None:
        raise ValueError(f"Curve point at alpha={point.alpha} carries no solution")
    problem = LocalProblem(
        alpha=point.alpha, a_alpha=point.a_alpha, model=model, mesh=mesh, eig=eig
    )
    z = subsolution_init(problem)
    diagnostic = claim2_diagnostic(model, mesh, eig, k, solution)
    return PointCertificate(
        alpha=point.alpha,
        mass_lower_bound=point.P >= point.lower_bound - constants.CERTIFICATE_SLACK,
        mass_upper_bound=point.P <= point.upper_bound * (1 + 1e-6),
        identity_gap=diagnostic.gap,
        auxiliary_norm_bound=diagnostic.w_norm <= diagnostic.w_norm_bound * (1 + 1e-10),
        subsolution_ordering=bool(
            np.all(solution.u >= z - constants.CERTIFICATE_SLACK * model.t_star)
        ),
        energy_bound=certify_energy_bound(problem, solution.u),
        norm_bound=certify_norm_bound(problem, solution.u),
        small_amplitude_slope=small_amplitude_slope(problem),
    )


def ordering_chain(model: ModelSpec, bumps: list[BumpResult]) -> tuple[list[tuple[str, float]], float]:
    """0 < m_{1,1} < m_{1,2} < t_1 < ... < m_{K,1} < m_{K,2} < t_K"""
    chain = [("t_0", model.knots.t_list[0])]
    for bump in bumps:
        first, last = bump.fixed_points[0], bump.fixed_points[-1]
        chain.append((f"m_{bump.k},1", first.mass))
        chain.append((f"m_{bump.k},2", last.mass))
        chain.append((f"t_{bump.k}", model.knots.t_list[bump.k]))
    gaps = [b[1] - a[1] for a, b in zip(chain[:-1], chain[1:])]
    margin = min(gaps)
    if margin <= 0:
        i = int(np.argmin(gaps))
        raise OrderingError(
            f"Masses do not interleave with the knots: {chain[i][0]}={chain[i][1]:.12g} "
            f"is not below {chain[i + 1][0]}={chain[i + 1][1]:.12g}"
        )
    return chain, margin


def assemble_theorem(
    model: ModelSpec,
    mesh: Mesh,
    eig: EigenPack,
    config: ScanConfig = ScanConfig(),
    hypotheses: HypothesisReport | None = None,
    force: bool = False,
    n_workers: int | None = None,
    progress: bool = False,
) -> TheoremReport:
    """Scan and refine every bump, verify the nonlocal residuals and the ordering chain."""
    if hypotheses is None:
        hypotheses = check_hypotheses(model, eig)
    if not hypotheses.all_hold:
        if not force:
            name = hypotheses.failing[0]
            raise HypothesisError(
                name,
                f"{hypotheses.verdict(name).detail}. Refusing to solve without force",
            )
        logger.warning(f"Hypotheses {hypotheses.failing} fail; continuing because force is set")

    thresholds = resolve_thresholds(model, config)
    residual_of = lambda point: nonlocal_residual(model, mesh, point.solution.u)  # noqa: E731

    bumps = []
    for k in tqdm(range(1, model.knots.K + 1), desc="bumps", disable=not progress):
        curve = scan_curve(
            model, mesh, eig, k, config=config, n_workers=n_workers, progress=progress
        )
        evaluate = functools.partial(
            eval_P, model, mesh, eig, k, config=config, thresholds=thresholds
        )
        try:
            fixed_points = find_fixed_points(
                curve,
                thresholds.refine_tol,
                evaluate,
                residual_of=residual_of,
                nonlocal_tol=thresholds.nonlocal_tol,
                k=k,
                max_steps=config.max_bisection_steps,
                n_workers=n_workers,
            )
        except FixedPointError as e:
            e.margins = {v.name: v.margin for v in hypotheses.verdicts}
            raise

        for point in fixed_points:
            if point.nonlocal_residual > thresholds.nonlocal_tol:
                raise SolverError(
                    f"Fixed point {point.label} in bump {k} at alpha*={point.alpha_star:.12g} has "
                    f"nonlocal residual {point.nonlocal_residual:.3e} > {thresholds.nonlocal_tol:.3e}"
                )

        certificates = []
        if config.certify:
            todo = [dask.delayed(certify_point)(model, mesh, eig, k, point) for point in curve]
            certificates = _compute(todo, n_workers, progress=False)
            failed = [c.alpha for c in certificates if not c.all_hold]
            if failed:
                logger.warning(f"Certificates fail in bump {k} at alpha = {failed}")

        bumps.append(
            BumpResult(
                k=k,
                interval=model.knots.interval(k),
                curve=curve,
                fixed_points=fixed_points,
                certificates=certificates,
            )
        )

    chain, margin = ordering_chain(model, bumps)
    logger.info(f"Ordering chain holds with margin {margin:.6g}")
    return TheoremReport(
        bumps=bumps,
        chain=chain,
        chain_margin=margin,
        hypotheses=hypotheses,
        forced=force and not hypotheses.all_hold,
    )
