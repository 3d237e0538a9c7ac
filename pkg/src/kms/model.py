"""Coefficient a, nonlinearity f and its truncation, the hypotheses
(H0)-(H4), and the generator of explicit examples."""
from __future__ import annotations

import abc
import dataclasses
import logging
import math
from typing import Callable

import numpy as np
import pandas as pd
import scipy.integrate
import scipy.optimize

from . import constants
from .errors import HypothesisError, SolverError
from .spectral import EigenPack


logger = logging.getLogger(__name__)


def _as_output(t, out: np.ndarray):
    """Return a float for scalar input, an array otherwise."""
    if np.ndim(t) == 0:
        return float(out)
    return out


# ---- knots -----------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class Knots:
    """Zeros 0 = t_0 < t_1 < ... < t_K of the coefficient, and t_star."""
    t_list: tuple[float, ...]
    t_star: float

    def __post_init__(self):
        if len(self.t_list) < 2:
            raise ValueError(
                f"Need at least two knots (K >= 1), got: {self.t_list}"
            )
        if self.t_list[0] != 0:
            raise ValueError(f"First knot must be 0, got: {self.t_list[0]}")
        if any(b <= a for a, b in zip(self.t_list[:-1], self.t_list[1:])):
            raise ValueError(
                f"Knots must be strictly increasing, got: {self.t_list}"
            )
        if not self.t_star > 0:
            raise ValueError(f"t_star must be positive, got: {self.t_star}")

    @property
    def K(self) -> int:
        return len(self.t_list) - 1

    @property
    def t_K(self) -> float:
        return self.t_list[-1]

    def interval(self, k: int) -> tuple[float, float]:
        """Bump k, 1-based: (t_{k-1}, t_k)."""
        if not 1 <= k <= self.K:
            raise ValueError(f"Bump index k must be in 1..{self.K}, got: {k}")
        return self.t_list[k - 1], self.t_list[k]


# ---- coefficient a ---------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class BumpCoefficient:
    """a(t) = A_k sin(pi (t - t_{k-1}) / (t_k - t_{k-1})) on each bump, 0 elsewhere."""
    knots: tuple[float, ...]
    amplitudes: tuple[float, ...]

    def __post_init__(self):
        if len(self.amplitudes) != len(self.knots) - 1:
            raise ValueError(
                f"Need one amplitude per bump ({len(self.knots) - 1}), got: {self.amplitudes}"
            )

    def __call__(self, t):
        t_arr = np.asarray(t, dtype=float)
        out = np.zeros_like(t_arr)
        for lo, hi, amplitude in zip(self.knots[:-1], self.knots[1:], self.amplitudes):
            mask = (t_arr > lo) & (t_arr < hi)
            out = np.where(
                mask, amplitude * np.sin(np.pi * (t_arr - lo) / (hi - lo)), out
            )
        return _as_output(t, out)

    def to_dict(self) -> dict:
        return {"type": "bumps", "amplitudes": list(self.amplitudes)}


@dataclasses.dataclass(frozen=True)
class TableCoefficient:
    """Piecewise linear a through (t, a) pairs, 0 outside the table."""
    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        ts = [point[0] for point in self.points]
        if len(ts) < 2 or any(b <= a for a, b in zip(ts[:-1], ts[1:])):
            raise ValueError(
                "Coefficient table needs at least two points with strictly increasing t"
            )

    def __call__(self, t):
        ts, values = zip(*self.points)
        out = np.interp(np.asarray(t, dtype=float), ts, values, left=0.0, right=0.0)
        return _as_output(t, out)

    def to_dict(self) -> dict:
        return {"type": "table", "points": [list(point) for point in self.points]}


CoefficientA = BumpCoefficient | TableCoefficient


# ---- nonlinearity f --------------------------------------------------------
class Nonlinearity(abc.ABC):
    """f on [0, t_star], together with its antiderivative vanishing at 0."""
    t_star: float
    is_c1: bool = True

    @abc.abstractmethod
    def value(self, t):
        """f(t) for t in [0, t_star] (vectorized)"""

    @abc.abstractmethod
    def antiderivative(self, t):
        """Integral of f from 0 to t, t in [0, t_star] (vectorized)"""

    @property
    def closed_form_gamma(self) -> float | None:
        return None

    @abc.abstractmethod
    def to_dict(self) -> dict:
        ...


@dataclasses.dataclass(frozen=True)
class Section3Nonlinearity(Nonlinearity):
    """f(t) = gamma t (1 - t/t_star) / (1 + c t)"""
    gamma: float
    c: float
    t_star: float

    def __post_init__(self):
        if not (self.gamma > 0 and math.isfinite(self.gamma)):
            raise ValueError(f"gamma must be positive and finite, got: {self.gamma}")
        if self.c < 0:
            raise ValueError(f"c must be non-negative, got: {self.c}")

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return self.gamma * t * (1.0 - t / self.t_star) / (1.0 + self.c * t)

    def antiderivative(self, t):
        s = np.asarray(t, dtype=float)
        if self.c == 0:
            return self.gamma * (s**2 / 2.0 - s**3 / (3.0 * self.t_star))
        # t (t_star - t) = (1 + c t)(alpha t + beta) - beta
        alpha = -1.0 / self.c
        beta = (self.t_star + 1.0 / self.c) / self.c
        integral = alpha * s**2 / 2.0 + beta * s - (beta / self.c) * np.log1p(self.c * s)
        return (self.gamma / self.t_star) * integral

    @property
    def closed_form_gamma(self) -> float:
        return self.gamma

    def psi_inverse_closed_form(self, s):
        return (self.gamma - s) / (self.gamma / self.t_star + s * self.c)

    def to_dict(self) -> dict:
        return {"type": "section3", "gamma": self.gamma, "c": self.c}


@dataclasses.dataclass(frozen=True)
class AffineNonlinearity(Nonlinearity):
    """f(t) = t_star - t"""
    t_star: float

    def value(self, t):
        return self.t_star - np.asarray(t, dtype=float)

    def antiderivative(self, t):
        s = np.asarray(t, dtype=float)
        return self.t_star * s - s**2 / 2.0

    @property
    def closed_form_gamma(self) -> float:
        return math.inf

    def to_dict(self) -> dict:
        return {"type": "affine"}


@dataclasses.dataclass(frozen=True)
class LogisticNonlinearity(Nonlinearity):
    """f(t) = rate t (t_star - t)"""
    rate: float
    t_star: float

    def __post_init__(self):
        if not self.rate > 0:
            raise ValueError(f"rate must be positive, got: {self.rate}")

    def value(self, t):
        t = np.asarray(t, dtype=float)
        return self.rate * t * (self.t_star - t)

    def antiderivative(self, t):
        s = np.asarray(t, dtype=float)
        return self.rate * (self.t_star * s**2 / 2.0 - s**3 / 3.0)

    @property
    def closed_form_gamma(self) -> float:
        return self.rate * self.t_star

    def to_dict(self) -> dict:
        return {"type": "logistic", "rate": self.rate}


@dataclasses.dataclass(frozen=True)
class TableNonlinearity(Nonlinearity):
    """Piecewise linear f through (t, f) pairs covering [0, t_star]."""
    points: tuple[tuple[float, float], ...]
    t_star: float
    is_c1 = False

    def __post_init__(self):
        ts = [point[0] for point in self.points]
        if len(ts) < 2 or any(b <= a for a, b in zip(ts[:-1], ts[1:])):
            raise ValueError(
                "Nonlinearity table needs at least two points with strictly increasing t"
            )
        if ts[0] != 0 or ts[-1] < self.t_star:
            raise ValueError(
                f"Nonlinearity table must cover [0, t_star] = [0, {self.t_star}], "
                f"got t from {ts[0]} to {ts[-1]}"
            )

    def value(self, t):
        ts, values = zip(*self.points)
        return np.interp(np.asarray(t, dtype=float), ts, values)

    def antiderivative(self, t):
        ts, values = (np.asarray(column, dtype=float) for column in zip(*self.points))
        cumulative = np.concatenate(
            ([0.0], np.cumsum(np.diff(ts) * (values[:-1] + values[1:]) / 2.0))
        )
        s = np.asarray(t, dtype=float)
        i = np.clip(np.searchsorted(ts, s, side="right") - 1, 0, len(ts) - 2)
        return cumulative[i] + (s - ts[i]) * (values[i] + self.value(s)) / 2.0

    def to_dict(self) -> dict:
        return {"type": "table", "points": [list(point) for point in self.points]}


@dataclasses.dataclass(frozen=True)
class CallableNonlinearity(Nonlinearity):
    """Arbitrary vectorized callable; antiderivative by adaptive quadrature."""
    func: Callable
    t_star: float
    gamma: float | None = None

    def value(self, t):
        return np.asarray(self.func(np.asarray(t, dtype=float)), dtype=float)

    def antiderivative(self, t):
        def _integral(s):
            integral, _ = scipy.integrate.quad(
                lambda x: float(self.func(x)), 0.0, s,
                epsrel=constants.QUAD_RTOL, epsabs=0.0, limit=200,
            )
            return integral
        return np.vectorize(_integral, otypes=[float])(np.asarray(t, dtype=float))

    @property
    def closed_form_gamma(self) -> float | None:
        return self.gamma

    def to_dict(self) -> dict:
        raise TypeError("A callable nonlinearity cannot be serialized")


@dataclasses.dataclass(frozen=True)
class ModelSpec:
    p: float
    knots: Knots
    a: CoefficientA
    f: Nonlinearity

    def __post_init__(self):
        if not self.p >= 1:
            raise ValueError(f"p must be >= 1, got: {self.p}")
        if self.f.t_star != self.knots.t_star:
            raise ValueError(
                f"Nonlinearity t_star={self.f.t_star} does not match knots t_star={self.knots.t_star}"
            )
        if isinstance(self.a, BumpCoefficient) and tuple(self.a.knots) != tuple(self.knots.t_list):
            raise ValueError(
                f"Bump coefficient knots {self.a.knots} do not match model knots {self.knots.t_list}"
            )

    @property
    def t_star(self) -> float:
        return self.knots.t_star


def model_to_dict(model: ModelSpec) -> dict:
    return {
        "p": model.p,
        "knots": list(model.knots.t_list),
        "t_star": model.knots.t_star,
        "a": model.a.to_dict(),
        "f": model.f.to_dict(),
    }


# ---- truncation f_star, F_star, gamma, psi ---------------------------------
def _fstar(f: Nonlinearity, t):
    t_arr = np.asarray(t, dtype=float)
    out = np.where(t_arr >= f.t_star, 0.0, f.value(np.clip(t_arr, 0.0, f.t_star)))
    return _as_output(t, out)


def _Fstar(f: Nonlinearity, t):
    t_arr = np.asarray(t, dtype=float)
    f0 = float(f.value(0.0))
    inside = f.antiderivative(np.clip(t_arr, 0.0, f.t_star))
    out = np.where(t_arr < 0, f0 * t_arr, inside)
    return _as_output(t, out)


def eval_fstar(model: ModelSpec, t):
    """f(0) for t <= 0, f(t) on (0, t_star), 0 for t >= t_star."""
    return _fstar(model.f, t)


def eval_Fstar(model: ModelSpec, t):
    """Antiderivative of f_star vanishing at 0; constant beyond t_star."""
    return _Fstar(model.f, t)


def gamma_of(f: Nonlinearity) -> float:
    """gamma = lim_{t -> 0+} f(t)/t, +inf when f(0) > 0.

    Richardson extrapolation of f(t)/t over t = t_star 2**-j.
    """
    f0 = float(f.value(0.0))
    if f0 > 0:
        return math.inf
    if f0 < 0:
        raise HypothesisError("H0", f"f(0) must be non-negative, got: {f0}")

    exponents = np.asarray(constants.GAMMA_RICHARDSON_EXPONENTS, dtype=float)
    ts = f.t_star * 2.0**-exponents
    level = np.asarray(f.value(ts), dtype=float) / ts
    for m in range(1, 4):
        factor = 2.0**m
        level = (factor * level[1:] - level[:-1]) / (factor - 1.0)
    gamma = float(level[-1])
    change = abs(level[-1] - level[-2])
    if not math.isfinite(gamma) or change > constants.GAMMA_RICHARDSON_RTOL * max(1.0, abs(gamma)):
        raise SolverError(
            f"Extrapolation of f(t)/t as t -> 0+ did not settle: last estimates "
            f"{level[-2]:.12g}, {level[-1]:.12g}"
        )
    return gamma


def gamma_value(f: Nonlinearity) -> float:
    """Closed-form gamma when the family has one, otherwise extrapolated."""
    if f.closed_form_gamma is not None:
        return f.closed_form_gamma
    return gamma_of(f)


def _psi(f: Nonlinearity, t):
    return np.asarray(_fstar(f, t)) / np.asarray(t, dtype=float)


def _psi_inverse(f: Nonlinearity, s: float, gamma: float | None = None) -> float:
    if gamma is None:
        gamma = gamma_value(f)
    if not 0 < s < gamma:
        raise ValueError(f"psi_inverse is defined on (0, gamma) = (0, {gamma}), got s={s}")

    lo = f.t_star * 2.0**-20
    while _psi(f, lo) <= s:
        lo *= 2.0**-20
        if lo < f.t_star * 1e-280:
            raise ValueError(f"s={s} is too close to gamma={gamma} to invert psi")
    return float(
        scipy.optimize.bisect(
            lambda t: float(_psi(f, t)) - s,
            lo,
            f.t_star,
            xtol=constants.PSI_INVERSE_XTOL_FACTOR * f.t_star,
            maxiter=500,
        )
    )


def psi_inverse(model: ModelSpec, s: float, gamma: float | None = None) -> float:
    """Inverse of the decreasing map t -> f_star(t)/t on (0, t_star)."""
    return _psi_inverse(model.f, s, gamma)


def interval_max(func: Callable, lo: float, hi: float,
                 n_samples: int = constants.INTERVAL_MAX_SAMPLES) -> tuple[float, float]:
    """Maximum of ``func`` on [lo, hi]: dense scan then bounded golden-section refinement.

    Returns (argmax, max). Never below the best sample.
    """
    ts = np.linspace(lo, hi, n_samples)
    values = np.asarray(func(ts), dtype=float)
    i = int(np.argmax(values))
    left, right = ts[max(i - 1, 0)], ts[min(i + 1, n_samples - 1)]
    result = scipy.optimize.minimize_scalar(
        lambda t: -float(func(t)),
        bounds=(left, right),
        method="bounded",
        options={"xatol": 1e-12 * max(1.0, hi - lo)},
    )
    if result.success and -result.fun > values[i]:
        return float(result.x), float(-result.fun)
    return float(ts[i]), float(values[i])


def max_coefficient(model: ModelSpec) -> float:
    """max of a on [0, t_K]"""
    return interval_max(model.a, 0.0, model.knots.t_K)[1]


def max_fstar(model: ModelSpec) -> float:
    """max of f_star on [0, t_star]"""
    return interval_max(lambda t: _fstar(model.f, t), 0.0, model.t_star)[1]


# ---- hypotheses ------------------------------------------------------------
@dataclasses.dataclass(frozen=True)
class HypothesisVerdict:
    name: str
    holds: bool
    margin: float
    detail: str


@dataclasses.dataclass(frozen=True)
class HypothesisReport:
    """Verdicts for (H0)-(H4) plus the reference levels of the coefficient.

    Attributes
    ----------
    verdicts : tuple of HypothesisVerdict
    gamma : float
    gamma_over_lambda1 : float
        (H3) asks max a < gamma_over_lambda1.
    theta : float
        (H4) asks max of a(t) t over each bump > theta.
    max_a : float
    max_f : float
    flags : tuple of str
        Advisory notes that are not verdicts.
    """
    verdicts: tuple[HypothesisVerdict, ...]
    gamma: float
    gamma_over_lambda1: float
    theta: float
    max_a: float
    max_f: float
    flags: tuple[str, ...] = ()

    @property
    def all_hold(self) -> bool:
        return all(verdict.holds for verdict in self.verdicts)

    @property
    def failing(self) -> list[str]:
        return [verdict.name for verdict in self.verdicts if not verdict.holds]

    def verdict(self, name: str) -> HypothesisVerdict:
        for verdict in self.verdicts:
            if verdict.name == name:
                return verdict
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "all_hold": self.all_hold,
            "verdicts": {
                verdict.name: {
                    "holds": verdict.holds,
                    "margin": verdict.margin,
                    "detail": verdict.detail,
                }
                for verdict in self.verdicts
            },
            "gamma": self.gamma,
            "gamma_over_lambda1": self.gamma_over_lambda1,
            "theta": self.theta,
            "max_a": self.max_a,
            "max_f": self.max_f,
            "flags": list(self.flags),
        }


def _interior_samples(lo: float, hi: float, n: int = constants.MONOTONICITY_SAMPLES) -> np.ndarray:
    return np.linspace(lo, hi, n + 2)[1:-1]


def _coefficient_vanishing(knots: Knots, a: CoefficientA) -> tuple[float, float]:
    """(largest |a| at a knot, smallest a sampled inside the bumps)"""
    at_knots = max(abs(float(a(t))) for t in knots.t_list)
    inside = min(
        float(np.min(a(_interior_samples(*knots.interval(k)))))
        for k in range(1, knots.K + 1)
    )
    return at_knots, inside


def _check_h0(model: ModelSpec) -> HypothesisVerdict:
    at_knots, a_inside = _coefficient_vanishing(model.knots, model.a)
    f_inside = float(np.min(model.f.value(_interior_samples(0.0, model.t_star))))
    f_at_t_star = abs(float(model.f.value(model.t_star)))
    margin = min(a_inside, f_inside)
    problems = []
    if at_knots > constants.KNOT_ZERO_ATOL:
        problems.append(f"a does not vanish at the knots (max |a(t_k)| = {at_knots:.3e})")
    if a_inside <= 0:
        problems.append(f"a is not positive inside every bump (min = {a_inside:.3e})")
    if f_inside <= 0:
        problems.append(f"f is not positive on (0, t_star) (min = {f_inside:.3e})")
    if f_at_t_star > constants.KNOT_ZERO_ATOL:
        problems.append(f"f(t_star) = {f_at_t_star:.3e} is not 0")
    return HypothesisVerdict(
        name="H0",
        holds=not problems,
        margin=margin,
        detail="; ".join(problems) or "a vanishes exactly at the knots; a > 0 on each bump; f > 0 on (0, t_star)",
    )


def _check_h1(model: ModelSpec) -> HypothesisVerdict:
    ts = _interior_samples(0.0, model.t_star)
    ratio = model.f.value(ts) / ts
    margin = float(np.min(-np.diff(ratio)))
    return HypothesisVerdict(
        name="H1",
        holds=margin > 0,
        margin=margin,
        detail=f"smallest decrease of f(t)/t between {ts.size} samples: {margin:.3e}",
    )


def _check_h2(model: ModelSpec, eig: EigenPack) -> HypothesisVerdict:
    bound = model.t_star**model.p * eig.int_e1_pow_p
    margin = bound - model.knots.t_K
    return HypothesisVerdict(
        name="H2",
        holds=margin > 0,
        margin=margin,
        detail=f"t_K = {model.knots.t_K} vs t_star^p * int e1^p = {bound:.12g}",
    )


def _check_h3(max_a: float, gamma_over_lambda1: float) -> HypothesisVerdict:
    margin = gamma_over_lambda1 - max_a
    return HypothesisVerdict(
        name="H3",
        holds=margin > 0,
        margin=margin,
        detail=f"max a = {max_a:.12g} vs gamma / lambda1 = {gamma_over_lambda1:.12g}",
    )


def _bump_peaks(knots: Knots, a: CoefficientA) -> list[float]:
    """max of a(t) t over each bump"""
    return [
        interval_max(lambda t: a(t) * np.asarray(t), *knots.interval(k))[1]
        for k in range(1, knots.K + 1)
    ]


def _check_h4(model: ModelSpec, eig: EigenPack, theta: float) -> HypothesisVerdict:
    peaks = _bump_peaks(model.knots, model.a)
    factor = math.sqrt(eig.lambda1) / (eig.C1 * math.sqrt(eig.volume))
    margins = [factor * (peak - theta) for peak in peaks]
    margin = min(margins)
    return HypothesisVerdict(
        name="H4",
        holds=margin > 0,
        margin=margin,
        detail="max a(t) t per bump: " + ", ".join(f"{peak:.6g}" for peak in peaks)
        + f"; threshold theta = {theta:.6g}",
    )


def check_hypotheses(model: ModelSpec, eig: EigenPack) -> HypothesisReport:
    """Check (H0)-(H4) numerically. Advisory: failures are verdicts, not errors."""
    eig.require_exponent(model.p)
    flags = []
    if not model.f.is_c1:
        flags.append("f is piecewise linear: Lipschitz but not C1")

    max_a = max_coefficient(model)
    max_f = max_fstar(model)
    theta = (
        eig.C1 / math.sqrt(eig.lambda1) * model.t_star ** (model.p - 1)
        * math.sqrt(eig.volume) * max_f
    )

    try:
        gamma = gamma_value(model.f)
    except (SolverError, HypothesisError) as e:
        logger.warning(f"Could not determine gamma: {e}")
        gamma = math.nan
        flags.append(f"gamma could not be determined: {e}")
    if math.isinf(gamma):
        flags.append("f(0) > 0 so gamma is infinite and (H3) holds trivially")
    gamma_over_lambda1 = gamma / eig.lambda1

    verdicts = (
        _check_h0(model),
        _check_h1(model),
        _check_h2(model, eig),
        _check_h3(max_a, gamma_over_lambda1),
        _check_h4(model, eig, theta),
    )
    report = HypothesisReport(
        verdicts=verdicts,
        gamma=gamma,
        gamma_over_lambda1=gamma_over_lambda1,
        theta=theta,
        max_a=max_a,
        max_f=max_f,
        flags=tuple(flags),
    )
    for verdict in verdicts:
        logger.info(
            f"({verdict.name}) {'holds' if verdict.holds else 'FAILS'}, margin {verdict.margin:.6g}"
        )
    return report


# ---- explicit examples -----------------------------------------------------
@dataclasses.dataclass(frozen=True)
class ExampleConstants:
    """Constants of the explicit example family.

    A is the smallest bump peak of a(t) t, M the bound that max f must stay
    under, eta the tuning parameter with f(1/eta) = 1/eta**2, and c the
    resulting denominator coefficient.
    """
    A: float
    M: float
    eta: float
    c: float


def example_constants(knots: Knots, a: CoefficientA, gamma: float,
                      eig: EigenPack, p: float) -> ExampleConstants:
    if not (gamma > 0 and math.isfinite(gamma)):
        raise ValueError(f"gamma must be positive and finite, got: {gamma}")
    eig.require_exponent(p)
    t_star = knots.t_star

    h2_bound = t_star**p * eig.int_e1_pow_p
    if not knots.t_K < h2_bound:
        raise HypothesisError(
            "H2", f"t_K = {knots.t_K} must be below t_star^p * int e1^p = {h2_bound:.12g}"
        )
    at_knots, a_inside = _coefficient_vanishing(knots, a)
    if at_knots > constants.KNOT_ZERO_ATOL or a_inside <= 0:
        raise HypothesisError(
            "H0",
            f"a must vanish at the knots and be positive inside each bump "
            f"(max |a(t_k)| = {at_knots:.3e}, min inside = {a_inside:.3e})",
        )
    max_a = interval_max(a, 0.0, knots.t_K)[1]
    if not max_a < gamma / eig.lambda1:
        raise HypothesisError(
            "H3", f"max a = {max_a:.12g} must be below gamma / lambda1 = {gamma / eig.lambda1:.12g}"
        )

    A = min(_bump_peaks(knots, a))
    M = (
        math.sqrt(eig.lambda1) * A
        / (eig.C1 * math.sqrt(eig.volume) * t_star ** (p - 1))
    )
    eta = constants.EXAMPLE_SAFETY_FACTOR * max(
        gamma / M, t_star / M, 1.0 / t_star + 1.0 / gamma
    )
    c = eta**2 * gamma - (gamma / t_star + 1.0) * eta
    return ExampleConstants(A=A, M=M, eta=eta, c=c)


def generate_example(knots: Knots, a: CoefficientA, gamma: float,
                     eig: EigenPack, p: float | None = None) -> ModelSpec:
    """Build f(t) = gamma t (1 - t/t_star) / (1 + c t) so that (H0)-(H4) hold."""
    if p is None:
        p = eig.p
    example = example_constants(knots, a, gamma, eig, p)
    logger.info(
        f"Example constants: A={example.A:.6g}, M={example.M:.6g}, "
        f"eta={example.eta:.6g}, c={example.c:.6g}"
    )
    model = ModelSpec(
        p=p,
        knots=knots,
        a=a,
        f=Section3Nonlinearity(gamma=gamma, c=example.c, t_star=knots.t_star),
    )
    report = check_hypotheses(model, eig)
    if not report.all_hold:
        name = report.failing[0]
        raise HypothesisError(
            name, f"generated example fails its own check: {report.verdict(name).detail}"
        )
    return model


def coefficient_profile(model: ModelSpec, n: int = 1001) -> pd.DataFrame:
    """a(t) and a(t) t sampled on [0, t_K]."""
    ts = np.linspace(0.0, model.knots.t_K, n)
    a_values = np.asarray(model.a(ts))
    return pd.DataFrame({"t": ts, "a": a_values, "a_times_t": a_values * ts})
