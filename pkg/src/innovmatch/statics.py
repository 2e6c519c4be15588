"""Comparative statics: the research-cost threshold, analytic derivatives, sweeps."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .equilibrium import EquilibriumReport, solve_equilibrium, solve_tightness, surplus_factor
from .model import (
    EfficiencyCurve,
    ModelError,
    ModelParams,
    NumericalError,
    PolicyRegime,
    efficiency,
    efficiency_derivative,
)

SWEEP_VARIABLES = ("eta", "gamma", "tau_f")


@dataclass(frozen=True)
class ThresholdResult:
    eta_hat: float
    g_at_root: float
    bracket: tuple[float, float]
    iterations: int


@dataclass(frozen=True)
class SweepTable:
    variable: str
    grid: tuple[float, ...]
    rows: tuple[EquilibriumReport | None, ...]
    fixed: dict = field(default_factory=dict)
    errors: tuple[str | None, ...] = ()

    def column(self, name: str) -> np.ndarray:
        """One report field across the grid; NaN where a point failed or is absent."""
        vals = [getattr(r, name) if r is not None else None for r in self.rows]
        return np.array([np.nan if v is None else float(v) for v in vals])


def threshold_function(curve: EfficiencyCurve, params: ModelParams, eta: float) -> float:
    """``A'(eta)(y - eta) - (1 - alpha) A(eta)``; du*/d eta has the opposite sign."""
    top = min(params.y, curve.domain_max)
    if not 0.0 <= eta <= top:
        raise ModelError(f"eta={eta} outside [0, {top}]")
    return efficiency_derivative(curve, eta) * (params.y - eta) - (
        1.0 - params.alpha
    ) * efficiency(curve, eta)


def find_threshold(
    curve: EfficiencyCurve,
    params: ModelParams,
    xtol: float = 1e-12,
    max_iter: int = 200,
) -> ThresholdResult:
    """Bisection for the root of :func:`threshold_function`.

    The function is strictly decreasing for any increasing concave curve,
    so a sign change on the full domain isolates the unique root.
    """
    lo, hi = 0.0, min(params.y, curve.domain_max)
    g_lo = threshold_function(curve, params, lo)
    g_hi = threshold_function(curve, params, hi)
    if not (g_lo > 0 > g_hi):
        raise NumericalError(
            f"no sign change: g({lo})={g_lo:.6g}, g({hi})={g_hi:.6g}"
        )
    bracket = (lo, hi)
    it = 0
    while hi - lo >= xtol and it < max_iter:
        mid = 0.5 * (lo + hi)
        g_mid = threshold_function(curve, params, mid)
        it += 1
        if g_mid == 0.0:
            lo = hi = mid
            break
        if g_mid > 0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    return ThresholdResult(root, threshold_function(curve, params, root), bracket, it)


def _pieces(params, curve, policy, eta):
    if eta <= 0.0 or eta >= min(params.y, curve.domain_max):
        raise ModelError(f"eta={eta} is not an interior point")
    if policy.gamma >= 1.0 or policy.tau_f >= 1.0:
        raise ModelError("gamma and tau_f must be below 1")
    A = efficiency(curve, eta)
    if solve_tightness(params, curve, policy, eta) == 0.0:
        raise ModelError("degenerate point: theta* = 0")
    a = params.alpha
    k = surplus_factor(params, policy) ** ((1.0 - a) / a)
    base = A * (params.y - eta) ** (1.0 - a)
    s = k * base ** (1.0 / a)
    return A, a, k, base, s


def du_deta_analytic(
    params: ModelParams, curve: EfficiencyCurve, policy: PolicyRegime, eta: float
) -> float:
    A, a, k, base, s = _pieces(params, curve, policy, eta)
    d = params.delta
    net = params.y - eta
    g = efficiency_derivative(curve, eta) * net - (1.0 - a) * A
    return -d * k * (1.0 / a) * base ** (1.0 / a - 1.0) / (d + s) ** 2 * net ** (-a) * g


def du_dgamma_analytic(
    params: ModelParams, curve: EfficiencyCurve, policy: PolicyRegime, eta: float
) -> float:
    _, a, _, _, s = _pieces(params, curve, policy, eta)
    d = params.delta
    return d * (1.0 - a) / a * s / (d + s) ** 2 / (1.0 - policy.gamma)


def du_dtauf_analytic(
    params: ModelParams, curve: EfficiencyCurve, policy: PolicyRegime, eta: float
) -> float:
    _, a, _, _, s = _pieces(params, curve, policy, eta)
    d = params.delta
    return d * (1.0 - a) / a * s / (d + s) ** 2 / (1.0 - policy.tau_f)


def finite_difference(
    f: Callable[[float], float], x: float, lo: float, hi: float, h: float = 1e-6
) -> float:
    """Central difference, one-sided within ``10 h`` of either bound."""
    if x - lo < 10 * h:
        return (-3 * f(x) + 4 * f(x + h) - f(x + 2 * h)) / (2 * h)
    if hi - x < 10 * h:
        return (3 * f(x) - 4 * f(x - h) + f(x - 2 * h)) / (2 * h)
    return (f(x + h) - f(x - h)) / (2 * h)


def linear_grid(start: float, stop: float, steps: int) -> tuple[float, ...]:
    """``steps + 1`` evenly spaced points, both endpoints included."""
    if steps < 0:
        raise ModelError("steps must be >= 0")
    if steps == 0:
        return (float(start),)
    return tuple(float(x) for x in np.linspace(start, stop, steps + 1))


def _point(variable, x, policy, eta):
    if variable == "eta":
        return policy, x
    if variable == "gamma":
        return replace(policy, gamma=x), eta
    return replace(policy, tau_f=x), eta


def sweep(
    variable: str,
    grid: Sequence[float],
    params: ModelParams,
    curve: EfficiencyCurve,
    policy: PolicyRegime,
    eta: float | None = None,
    max_workers: int | None = None,
) -> SweepTable:
    """Solve the equilibrium at each grid value of ``variable``.

    Failures at individual points are recorded in ``errors`` and leave a
    ``None`` row; the rest of the sweep still runs.
    """
    if variable not in SWEEP_VARIABLES:
        raise ModelError(f"cannot sweep {variable!r}; choose one of {SWEEP_VARIABLES}")
    grid = tuple(float(x) for x in grid)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ModelError("sweep grid must be strictly increasing")
    if variable != "eta" and eta is None:
        raise ModelError(f"a {variable} sweep needs a fixed eta")

    def solve_at(x: float) -> tuple[EquilibriumReport | None, str | None]:
        pol, e = _point(variable, x, policy, eta)
        try:
            return solve_equilibrium(params, curve, pol, e), None
        except (ModelError, ArithmeticError) as exc:
            return None, str(exc)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as ex:
            out = list(ex.map(solve_at, grid))
    else:
        out = [solve_at(x) for x in grid]

    fixed = {
        "params": params,
        "curve": curve,
        "policy": policy,
        "eta": None if variable == "eta" else eta,
    }
    return SweepTable(
        variable=variable,
        grid=grid,
        rows=tuple(r for r, _ in out),
        fixed=fixed,
        errors=tuple(e for _, e in out),
    )
