"""Search-and-matching labor market with innovation-dependent matching efficiency.

Steady states under a mandated wage rule and a firm-profit tax, the
research-cost threshold, comparative statics, and simulation checks.
"""

from .dynamics import (
    LakeTrajectory,
    SimConfig,
    SimResult,
    iterate_to_steady_state,
    lake_step,
    simulate,
)
from .equilibrium import (
    EquilibriumReport,
    mandated_wage,
    solve_equilibrium,
    solve_tightness,
    solve_unemployment,
    verify_free_entry,
)
from .model import (
    CurveFamily,
    EfficiencyCurve,
    MatchingOutcome,
    ModelError,
    ModelParams,
    NumericalError,
    PolicyRegime,
    Verdict,
    efficiency,
    efficiency_derivative,
    finding_and_filling_rates,
    matches,
    register_family,
    validate_params,
)
from .statics import (
    SweepTable,
    ThresholdResult,
    du_deta_analytic,
    du_dgamma_analytic,
    du_dtauf_analytic,
    find_threshold,
    sweep,
    threshold_function,
)

__version__ = "0.1.0"

__all__ = [
    "LakeTrajectory",
    "SimConfig",
    "SimResult",
    "iterate_to_steady_state",
    "lake_step",
    "simulate",
    "EquilibriumReport",
    "mandated_wage",
    "solve_equilibrium",
    "solve_tightness",
    "solve_unemployment",
    "verify_free_entry",
    "CurveFamily",
    "EfficiencyCurve",
    "MatchingOutcome",
    "ModelError",
    "ModelParams",
    "NumericalError",
    "PolicyRegime",
    "Verdict",
    "efficiency",
    "efficiency_derivative",
    "finding_and_filling_rates",
    "matches",
    "register_family",
    "validate_params",
    "SweepTable",
    "ThresholdResult",
    "du_deta_analytic",
    "du_dgamma_analytic",
    "du_dtauf_analytic",
    "find_threshold",
    "sweep",
    "threshold_function",
]
