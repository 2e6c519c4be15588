"""Two independent checks on the steady state: lake iteration and agent simulation.

Tightness is held at its analytic value in both. The simulator draws one
Bernoulli per worker per period from a dedicated stream per replication,
so results do not depend on how replications are scheduled on threads.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import stats

from .equilibrium import solve_tightness
from .model import (
    EfficiencyCurve,
    ModelError,
    ModelParams,
    PolicyRegime,
    efficiency,
    finding_and_filling_rates,
)


class LakeStep(NamedTuple):
    u: float
    flagged: bool   # p was clamped or the raw update left [0, 1]


@dataclass(frozen=True)
class LakeTrajectory:
    u_path: tuple[float, ...]
    converged: bool
    periods_to_tolerance: int
    fixed_theta: float
    flagged_steps: int = 0

    @property
    def limit(self) -> float:
        return self.u_path[-1]

    def to_dict(self) -> dict:
        d = asdict(self)
        d["u_path"] = list(self.u_path)
        return d


def _finding_rate(theta: float, A: float, alpha: float) -> float:
    if theta == 0.0:
        return 0.0
    return finding_and_filling_rates(theta, A, alpha).p


def lake_step(u: float, theta: float, A: float, alpha: float, delta: float) -> LakeStep:
    p = _finding_rate(theta, A, alpha)
    flagged = p > 1.0
    p = min(p, 1.0)
    nxt = u + delta * (1.0 - u) - p * u
    if nxt < 0.0 or nxt > 1.0:
        flagged = True
        nxt = min(max(nxt, 0.0), 1.0)
    return LakeStep(nxt, flagged)


def lake_limit(theta: float, A: float, alpha: float, delta: float) -> float:
    p = min(_finding_rate(theta, A, alpha), 1.0)
    return delta / (delta + p)


def iterate_to_steady_state(
    u0: float,
    theta: float,
    A: float,
    alpha: float,
    delta: float,
    tol: float = 1e-12,
    max_periods: int = 100_000,
) -> LakeTrajectory:
    if not 0.0 <= u0 <= 1.0:
        raise ModelError(f"u0={u0} outside [0, 1]")
    if tol <= 0:
        raise ModelError("tol must be positive")
    path = [u0]
    flagged = 0
    u = u0
    for t in range(1, max_periods + 1):
        step = lake_step(u, theta, A, alpha, delta)
        flagged += step.flagged
        path.append(step.u)
        if abs(step.u - u) < tol:
            return LakeTrajectory(tuple(path), True, t, theta, flagged)
        u = step.u
    return LakeTrajectory(tuple(path), False, max_periods, theta, flagged)


@dataclass(frozen=True)
class SimConfig:
    workers: int = 10_000
    periods: int = 2_000
    burn_in: int = 500
    replications: int = 20
    seed: int = 42
    params: ModelParams = field(default_factory=ModelParams)
    curve: EfficiencyCurve = field(default_factory=EfficiencyCurve)
    policy: PolicyRegime = field(default_factory=PolicyRegime)
    eta: float = 0.5
    initial_u: float = 1.0   # share of workers unemployed at t = 0
    record_path: bool = False

    def problems(self) -> list[str]:
        out = []
        if self.workers < 1:
            out.append(f"workers >= 1 (got {self.workers})")
        if not 0 <= self.burn_in < self.periods:
            out.append(f"periods > burn_in >= 0 (got periods={self.periods}, burn_in={self.burn_in})")
        if self.replications < 1:
            out.append(f"replications >= 1 (got {self.replications})")
        if not 0.0 <= self.initial_u <= 1.0:
            out.append(f"0 <= initial_u <= 1 (got {self.initial_u})")
        return out


@dataclass(frozen=True)
class SimResult:
    u_mean: float
    u_ci_halfwidth: float
    u_std_error: float
    clamped_rate_events: int
    replication_means: tuple[float, ...]
    theta: float
    finding_rate: float   # after clamping
    path: tuple[float, ...] | None = None   # per-period mean across replications

    def to_dict(self) -> dict:
        d = asdict(self)
        d["replication_means"] = list(self.replication_means)
        if self.path is not None:
            d["path"] = list(self.path)
        return d


def _replicate(
    seq: np.random.SeedSequence, n: int, periods: int, burn_in: int,
    n_unemployed: int, p: float, delta: float,
) -> tuple[float, np.ndarray]:
    rng = np.random.Generator(np.random.PCG64(seq))
    unemployed = np.zeros(n, dtype=bool)
    unemployed[:n_unemployed] = True
    path = np.empty(periods)
    for t in range(periods):
        draw = rng.random(n)
        # both flows act on start-of-period states
        unemployed = np.where(unemployed, draw >= p, draw < delta)
        path[t] = np.count_nonzero(unemployed) / n
    return float(path[burn_in:].mean()), path


def simulate(config: SimConfig, max_workers: int | None = None) -> SimResult:
    """Agent-based run of the matching process at the analytic tightness."""
    bad = config.problems()
    if bad:
        raise ModelError("invalid simulation config: " + "; ".join(bad))
    cfg = config
    theta = solve_tightness(cfg.params, cfg.curve, cfg.policy, cfg.eta)
    if theta <= 0.0:
        raise ModelError("simulation needs theta* > 0 (degenerate equilibrium)")
    raw_p = _finding_rate(theta, efficiency(cfg.curve, cfg.eta), cfg.params.alpha)
    p = min(raw_p, 1.0)
    clamped = cfg.periods * cfg.replications if raw_p > 1.0 else 0
    if clamped:
        msg = f"job-finding rate {raw_p:.6g} > 1 clamped to 1 in {clamped} periods"
        warnings.warn(msg, RuntimeWarning, stacklevel=2)

    n_u0 = int(round(cfg.initial_u * cfg.workers))
    seqs = np.random.SeedSequence(cfg.seed).spawn(cfg.replications)
    args = (cfg.workers, cfg.periods, cfg.burn_in, n_u0, p, cfg.params.delta)
    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers) as ex:
            out = list(ex.map(lambda s: _replicate(s, *args), seqs))
    else:
        out = [_replicate(s, *args) for s in seqs]

    means = np.array([m for m, _ in out])
    R = len(means)
    u_mean = float(means.mean())
    if R > 1:
        se = float(means.std(ddof=1) / math.sqrt(R))
        half = float(stats.t.ppf(0.975, R - 1) * se)
    else:
        se = half = 0.0
    path = None
    if cfg.record_path:
        path = tuple(float(x) for x in np.mean([pth for _, pth in out], axis=0))
    return SimResult(u_mean, half, se, clamped, tuple(means.tolist()), theta, p, path)
