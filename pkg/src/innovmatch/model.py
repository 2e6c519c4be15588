"""Model primitives: parameters, policy instruments, matching technology.

Everything here is an immutable value or a pure function. Validation
returns a list of violations instead of raising, so callers can report
every problem with a config at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable


class ModelError(ValueError):
    """Input outside the domain of a model operation."""


class NumericalError(RuntimeError):
    """A numerical procedure could not produce an answer (bracket, convergence)."""


@dataclass(frozen=True)
class ModelParams:
    """Structural primitives. Defaults are the baseline calibration."""

    y: float = 1.0       # output per filled job
    b: float = 0.0       # unemployment benefit (validated, enters no formula)
    c: float = 1.0       # vacancy cost per period
    r: float = 0.5       # net interest rate
    delta: float = 0.5   # separation probability
    alpha: float = 0.5   # matching elasticity on unemployment

    @property
    def beta(self) -> float:
        return 1.0 / (1.0 + self.r)


@dataclass(frozen=True)
class PolicyRegime:
    gamma: float = 0.5   # mandated wage share of net output
    tau_f: float = 0.0   # tax on firm flow profit
    tau_w: float = 0.0   # tax on wages


@dataclass(frozen=True)
class CurveFamily:
    """Level and slope of an efficiency family, both as ``f(scale, eta)``.

    ``max_domain`` is the largest eta for which the family is increasing
    and concave at every positive scale.
    """

    level: Callable[[float, float], float]
    derivative: Callable[[float, float], float]
    max_domain: float = math.inf


_FAMILIES: dict[str, CurveFamily] = {
    "quadratic": CurveFamily(
        level=lambda s, eta: s * (eta - 0.5 * eta * eta),
        derivative=lambda s, eta: s * (1.0 - eta),
        max_domain=1.0,
    ),
}


def register_family(kind: str, family: CurveFamily) -> None:
    """Make a new efficiency family available under ``kind``.

    The family should pass :func:`curve_shape_violations` on its domain;
    nothing here enforces that at registration time.
    """
    _FAMILIES[kind] = family


def get_family(kind: str) -> CurveFamily:
    try:
        return _FAMILIES[kind]
    except KeyError:
        raise ModelError(f"unknown efficiency family {kind!r}") from None


def family_names() -> list[str]:
    return sorted(_FAMILIES)


@dataclass(frozen=True)
class EfficiencyCurve:
    kind: str = "quadratic"
    scale: float = 1.0
    domain_max: float = 1.0

    @property
    def family(self) -> CurveFamily:
        return get_family(self.kind)


@dataclass(frozen=True)
class MatchingOutcome:
    p: float
    q: float
    rate_overflow: bool = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "rate_overflow", self.p > 1.0 or self.q > 1.0)


@dataclass(frozen=True)
class Violation:
    constraint: str
    value: float | str

    def __str__(self) -> str:
        return f"{self.constraint} violated (got {self.value})"


@dataclass(frozen=True)
class Verdict:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def messages(self) -> list[str]:
        return [str(v) for v in self.violations]


def validate_params(
    params: ModelParams, curve: EfficiencyCurve, policy: PolicyRegime
) -> Verdict:
    """Check every parameter restriction; never raises."""
    out: list[Violation] = []

    def need(ok: bool, constraint: str, value) -> None:
        if not ok:
            out.append(Violation(constraint, value))

    p = params
    need(p.y > p.b, "y > b", f"y={p.y}, b={p.b}")
    need(p.b >= 0, "b >= 0", p.b)
    need(p.c > 0, "c > 0", p.c)
    need(p.r > 0, "r > 0", p.r)
    need(0 < p.delta < 1, "0 < delta < 1", p.delta)
    need(0 < p.alpha < 1, "0 < alpha < 1", p.alpha)

    if curve.kind not in _FAMILIES:
        out.append(Violation("known efficiency kind", curve.kind))
    else:
        fam = curve.family
        need(curve.scale > 0, "scale > 0", curve.scale)
        need(curve.domain_max > 0, "domain_max > 0", curve.domain_max)
        need(
            curve.domain_max <= fam.max_domain,
            f"domain_max <= {fam.max_domain:g} for {curve.kind}",
            curve.domain_max,
        )

    need(0 < policy.gamma < 1, "0 < gamma < 1", policy.gamma)
    need(0 <= policy.tau_f < 1, "0 <= tau_f < 1", policy.tau_f)
    need(0 <= policy.tau_w < 1, "0 <= tau_w < 1", policy.tau_w)
    return Verdict(tuple(out))


def matches(u: float, v: float, A: float, alpha: float) -> float:
    """Cobb-Douglas match mass ``A u^alpha v^(1-alpha)``."""
    if u < 0 or v < 0 or A < 0:
        raise ModelError(f"matches needs u, v, A >= 0 (got u={u}, v={v}, A={A})")
    if u == 0 or v == 0:
        return 0.0
    return A * u**alpha * v ** (1.0 - alpha)


def finding_and_filling_rates(theta: float, A: float, alpha: float) -> MatchingOutcome:
    if theta <= 0:
        raise ModelError(f"tightness must be positive (got {theta})")
    if A < 0:
        raise ModelError(f"efficiency must be nonnegative (got {A})")
    q = A * theta ** (-alpha)
    return MatchingOutcome(p=theta * q, q=q)


def _check_eta(curve: EfficiencyCurve, eta: float) -> None:
    if not 0.0 <= eta <= curve.domain_max:
        raise ModelError(f"eta={eta} outside [0, {curve.domain_max}]")


def efficiency(curve: EfficiencyCurve, eta: float) -> float:
    _check_eta(curve, eta)
    return curve.family.level(curve.scale, eta)


def efficiency_derivative(curve: EfficiencyCurve, eta: float) -> float:
    _check_eta(curve, eta)
    return curve.family.derivative(curve.scale, eta)


def default_curve(params: ModelParams, kind: str = "quadratic", scale: float = 1.0) -> EfficiencyCurve:
    """Curve on the widest admissible domain, ``min(y, family max)``."""
    return EfficiencyCurve(kind, scale, min(params.y, get_family(kind).max_domain))


def curve_shape_violations(curve: EfficiencyCurve, n: int = 1000, h: float = 1e-5) -> list[str]:
    """Finite-difference probe of A >= 0, A' > 0, A'' <= 0 on an interior grid."""
    lo, hi = h, curve.domain_max - h
    bad = []
    for i in range(n):
        eta = lo + (hi - lo) * (i + 0.5) / n
        a = efficiency(curve, eta)
        a_lo, a_hi = efficiency(curve, eta - h), efficiency(curve, eta + h)
        slope = (a_hi - a_lo) / (2 * h)
        curv = (a_hi - 2 * a + a_lo) / (h * h)
        if a < 0:
            bad.append(f"A({eta:.6g}) < 0")
        if slope <= 0:
            bad.append(f"A'({eta:.6g}) <= 0")
        # second differences carry ~eps/h^2 of rounding noise
        if curv > 1e-4 * max(1.0, abs(a)):
            bad.append(f"A''({eta:.6g}) > 0")
    return bad
