"""Closed-form steady state under the mandated wage rule and firm-profit tax.

Tightness comes from combining job creation with ``w = gamma (y - eta)``;
unemployment from the Beveridge curve. The firm Bellman equations are
only used afterwards, as a check on the closed form.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, replace

from .model import (
    EfficiencyCurve,
    ModelError,
    ModelParams,
    PolicyRegime,
    efficiency,
    finding_and_filling_rates,
    validate_params,
)


@dataclass(frozen=True)
class EquilibriumReport:
    eta: float
    gamma: float
    tau_f: float
    tau_w: float
    efficiency: float
    theta_star: float
    p_star: float
    q_star: float | None
    u_star: float
    v_star: float
    wage: float
    wage_net: float
    J_F: float | None
    bellman_residual_F: float | None
    free_entry_residual: float | None
    rate_overflow: bool
    b: float = 0.0

    @property
    def degenerate(self) -> bool:
        return self.theta_star == 0.0

    def to_dict(self) -> dict:
        return asdict(self)

    def perturbed(self, **changes) -> "EquilibriumReport":
        return replace(self, **changes)


def _check_point(params: ModelParams, curve: EfficiencyCurve, eta: float) -> None:
    if eta >= params.y:
        raise ModelError(f"eta={eta} must be below y={params.y} (net output nonpositive)")
    if not 0.0 <= eta <= curve.domain_max:
        raise ModelError(f"eta={eta} outside [0, {curve.domain_max}]")


def surplus_factor(params: ModelParams, policy: PolicyRegime) -> float:
    """(1 - tau_f)(1 - gamma) / ((r + delta) c); the only place the instruments enter."""
    return (1.0 - policy.tau_f) * (1.0 - policy.gamma) / ((params.r + params.delta) * params.c)


def solve_tightness(
    params: ModelParams, curve: EfficiencyCurve, policy: PolicyRegime, eta: float
) -> float:
    _check_point(params, curve, eta)
    A = efficiency(curve, eta)
    if A == 0.0:
        return 0.0
    return (surplus_factor(params, policy) * A * (params.y - eta)) ** (1.0 / params.alpha)


def _closed_form_u(k: float, A: float, net: float, delta: float, alpha: float) -> float:
    s = k ** ((1.0 - alpha) / alpha) * (A * net ** (1.0 - alpha)) ** (1.0 / alpha)
    return delta / (delta + s)


def solve_unemployment(
    params: ModelParams, curve: EfficiencyCurve, policy: PolicyRegime, eta: float
) -> float:
    """Steady-state unemployment in closed form, taxes included."""
    _check_point(params, curve, eta)
    A = efficiency(curve, eta)
    return _closed_form_u(
        surplus_factor(params, policy), A, params.y - eta, params.delta, params.alpha
    )


def unemployment_untaxed(
    params: ModelParams, curve: EfficiencyCurve, gamma: float, eta: float
) -> float:
    """The no-tax closed form, written without any tax factor."""
    _check_point(params, curve, eta)
    A = efficiency(curve, eta)
    k = (1.0 - gamma) / ((params.r + params.delta) * params.c)
    return _closed_form_u(k, A, params.y - eta, params.delta, params.alpha)


def mandated_wage(params: ModelParams, policy: PolicyRegime, eta: float) -> float:
    if eta >= params.y:
        raise ModelError(f"eta={eta} must be below y={params.y}")
    return policy.gamma * (params.y - eta)


def solve_equilibrium(
    params: ModelParams, curve: EfficiencyCurve, policy: PolicyRegime, eta: float
) -> EquilibriumReport:
    verdict = validate_params(params, curve, policy)
    if not verdict.ok:
        raise ModelError("; ".join(verdict.messages()))

    theta = solve_tightness(params, curve, policy, eta)
    u = solve_unemployment(params, curve, policy, eta)
    A = efficiency(curve, eta)
    w = mandated_wage(params, policy, eta)
    common = dict(
        eta=eta,
        gamma=policy.gamma,
        tau_f=policy.tau_f,
        tau_w=policy.tau_w,
        efficiency=A,
        theta_star=theta,
        u_star=u,
        v_star=theta * u,
        wage=w,
        wage_net=(1.0 - policy.tau_w) * w,
        b=params.b,
    )
    if theta == 0.0:
        return EquilibriumReport(
            p_star=0.0,
            q_star=None,
            J_F=None,
            bellman_residual_F=None,
            free_entry_residual=None,
            rate_overflow=False,
            **common,
        )

    rates = finding_and_filling_rates(theta, A, params.alpha)
    beta = params.beta
    J_F = params.c / (beta * rates.q)
    J_V = 0.0
    flow = (1.0 - policy.tau_f) * (params.y - eta - w)
    res_F = J_F - (flow + beta * (params.delta * J_V + (1.0 - params.delta) * J_F))
    res_V = J_V - (-params.c + beta * (rates.q * J_F + (1.0 - rates.q) * J_V))
    return EquilibriumReport(
        p_star=rates.p,
        q_star=rates.q,
        J_F=J_F,
        bellman_residual_F=res_F,
        free_entry_residual=res_V,
        rate_overflow=rates.rate_overflow,
        **common,
    )


def verify_free_entry(report: EquilibriumReport, params: ModelParams) -> tuple[float, float]:
    """Residuals (filled, vacant) of both firm Bellman equations at J_V = 0.

    Rebuilt from the report's tightness, efficiency level, policy and J_F
    alone, so a perturbed report shows up as nonzero residuals.
    """
    if report.theta_star <= 0 or report.J_F is None:
        raise ModelError("degenerate report (theta* = 0) has no firm values to check")
    beta = 1.0 / (1.0 + params.r)
    q = report.efficiency / report.theta_star**params.alpha
    net = params.y - report.eta
    profit = (1.0 - report.tau_f) * (net - report.gamma * net)
    J = report.J_F
    filled = J - profit - beta * (1.0 - params.delta) * J
    vacant = params.c - beta * q * J
    return filled, vacant
