"""Acceptance gate: eight criteria, each with its tolerance and runtime bound.

Expected values come from exact rational arithmetic (alpha = 1/2 makes the
closed form rational) or from the closed-form threshold root, never from
the code under test. A one-line verdict per criterion is printed in the
pytest terminal summary.
"""

import math
import time
from dataclasses import replace

import numpy as np
import pytest

from conftest import exact_half_alpha, fd_derivatives
from innovmatch import (
    EfficiencyCurve,
    ModelParams,
    PolicyRegime,
    SimConfig,
    du_deta_analytic,
    du_dgamma_analytic,
    du_dtauf_analytic,
    efficiency,
    find_threshold,
    iterate_to_steady_state,
    simulate,
    solve_equilibrium,
    solve_tightness,
    solve_unemployment,
    sweep,
    threshold_function,
    verify_free_entry,
)
from innovmatch.equilibrium import unemployment_untaxed
from innovmatch.statics import linear_grid

RESULTS: dict[int, tuple[bool, str]] = {}

FIG1 = ModelParams(y=1.0, b=0.0, c=1.0, r=0.5, delta=0.5, alpha=0.5)
CURVE = EfficiencyCurve("quadratic", 1.0, 1.0)
POLICY = PolicyRegime(gamma=0.5, tau_f=0.0, tau_w=0.0)
ETA_HAT = (2.5 - math.sqrt(1.25)) / 2.5


class Criterion:
    def __init__(self, number: int, title: str, budget: float):
        self.number, self.title, self.budget = number, title, budget
        self.notes: list[str] = []

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self.t0
        ok = exc_type is None and elapsed < self.budget
        detail = "; ".join(self.notes)
        if exc_type is not None:
            detail = f"{detail}; {exc_type.__name__}: {exc}".strip("; ")
        RESULTS[self.number] = (ok, f"{self.title} [{elapsed:.2f}s / {self.budget:g}s] {detail}")
        if exc_type is None:
            assert elapsed < self.budget, f"runtime {elapsed:.2f}s over {self.budget}s"
        return False


def random_policy_points(n, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        y = rng.uniform(0.5, 2.0)
        params = ModelParams(y=y, c=rng.uniform(0.2, 2), r=rng.uniform(0.02, 0.5),
                             delta=rng.uniform(0.05, 0.9), alpha=rng.uniform(0.3, 0.7))
        top = min(y, 1.0)
        curve = EfficiencyCurve("quadratic", rng.uniform(0.5, 2), top)
        policy = PolicyRegime(rng.uniform(0.05, 0.95), rng.uniform(0, 0.9), 0.0)
        yield params, curve, policy, rng.uniform(0.05, 0.95) * top


def test_1_threshold_reproduction():
    with Criterion(1, "threshold eta_hat and A(eta_hat)", 1.0) as c:
        res = find_threshold(CURVE, FIG1)
        a_hat = efficiency(CURVE, res.eta_hat)
        c.notes.append(f"eta_hat={res.eta_hat:.10f} A={a_hat:.10f}")
        assert abs(res.eta_hat - ETA_HAT) < 1e-7
        assert abs(a_hat - 0.4) < 1e-6


def test_2_equilibrium_point():
    theta, p, u = (float(x) for x in exact_half_alpha("1/2"))
    with Criterion(2, "equilibrium at eta=0.5", 1.0) as c:
        rep = solve_equilibrium(FIG1, CURVE, POLICY, 0.5)
        res_f, res_v = verify_free_entry(rep, FIG1)
        c.notes.append(f"theta={rep.theta_star!r} u={rep.u_star:.9f} J_F={rep.J_F!r}")
        assert theta == 0.0087890625
        assert rep.theta_star == pytest.approx(theta, rel=1e-14)
        assert abs(rep.u_star - u) < 1e-6
        assert rep.J_F == pytest.approx(0.375, rel=1e-14)
        for r in (rep.bellman_residual_F, rep.free_entry_residual, res_f, res_v):
            assert abs(r) < 1e-12


def test_3_eta_sweep_u_shape():
    with Criterion(3, "eta sweep falls then rises, argmin nearest eta_hat", 1.0) as c:
        grid = linear_grid(0.01, 0.99, 98)
        u = sweep("eta", grid, FIG1, CURVE, POLICY).column("u_star")
        k = int(np.argmin(u))
        nearest = int(np.argmin(np.abs(np.array(grid) - ETA_HAT)))
        c.notes.append(f"{len(grid)} points, argmin eta={grid[k]:.2f}")
        assert len(grid) == 99
        assert np.all(np.diff(u[: k + 1]) < 0) and np.all(np.diff(u[k:]) > 0)
        assert k == nearest


def test_4_wage_share_ordering():
    expected = [float(exact_half_alpha("1/2", gamma=g)[2]) for g in ("1/10", "1/2", "9/10")]
    with Criterion(4, "u* at gamma = 0.1, 0.5, 0.9", 1.0) as c:
        got = [solve_unemployment(FIG1, CURVE, replace(POLICY, gamma=g), 0.5) for g in (0.1, 0.5, 0.9)]
        c.notes.append("u=" + ", ".join(f"{x:.6f}" for x in got))
        for g, e in zip(got, expected):
            assert abs(g - e) < 1e-6
        assert got[0] < got[1] < got[2]


def test_5_profit_tax_ordering():
    expected = [float(exact_half_alpha("1/2", tau_f=t)[2]) for t in ("0", "1/2", "9/10")]
    with Criterion(5, "u* at tau_f = 0, 0.5, 0.9", 1.0) as c:
        got = [solve_unemployment(FIG1, CURVE, replace(POLICY, tau_f=t), 0.5) for t in (0.0, 0.5, 0.9)]
        c.notes.append("u=" + ", ".join(f"{x:.6f}" for x in got))
        for g, e in zip(got, expected):
            assert abs(g - e) < 1e-6
        assert got[0] < got[1] < got[2]


def test_6_derivative_oracles():
    with Criterion(6, "analytic derivatives vs central differences, 200 points", 5.0) as c:
        worst = 0.0
        n = 0
        for params, curve, policy, eta in random_policy_points(200, seed=20261015):
            an = (du_deta_analytic(params, curve, policy, eta),
                  du_dgamma_analytic(params, curve, policy, eta),
                  du_dtauf_analytic(params, curve, policy, eta))
            fd = fd_derivatives(params, curve, policy, eta, h=1e-6)
            for a, f in zip(an, fd):
                worst = max(worst, abs(a - f) / abs(a))
            assert np.sign(an[0]) == -np.sign(threshold_function(curve, params, eta))
            n += 1
        c.notes.append(f"{n} points, worst rel err {worst:.2e}")
        assert n == 200
        assert worst < 1e-6


def test_7_monte_carlo_and_lake():
    u_star = float(exact_half_alpha("1/2")[2])
    with Criterion(7, "simulation within 3 SE; lake limit from u0 in {0, 1}", 30.0) as c:
        res = simulate(SimConfig(workers=10_000, periods=2_000, burn_in=500,
                                 replications=20, seed=42, eta=0.5))
        z = (res.u_mean - u_star) / res.u_std_error
        theta = solve_tightness(FIG1, CURVE, POLICY, 0.5)
        A = efficiency(CURVE, 0.5)
        limits = [iterate_to_steady_state(u0, theta, A, 0.5, 0.5, tol=1e-10).limit for u0 in (0.0, 1.0)]
        c.notes.append(f"u_mean={res.u_mean:.6f} se={res.u_std_error:.2e} z={z:+.2f}")
        assert abs(z) < 3
        for lim in limits:
            assert abs(lim - u_star) < 1e-8
        assert abs(limits[0] - limits[1]) < 1e-8


def test_8_equivalence_and_neutrality():
    with Criterion(8, "tax-free equivalence, wage-tax neutrality, instrument symmetry", 5.0) as c:
        rng = np.random.default_rng(8)
        worst = 0.0
        for _ in range(1000):
            y = rng.uniform(0.3, 3.0)
            params = ModelParams(y=y, c=rng.uniform(0.05, 5), r=rng.uniform(0.005, 1),
                                 delta=rng.uniform(0.01, 0.99), alpha=rng.uniform(0.05, 0.95))
            top = min(y, 1.0)
            curve = EfficiencyCurve("quadratic", rng.uniform(0.1, 10), top)
            gamma = rng.uniform(0.01, 0.99)
            eta = rng.uniform(0.001, 0.999) * top
            taxed = solve_unemployment(params, curve, PolicyRegime(gamma, 0.0, 0.0), eta)
            base = unemployment_untaxed(params, curve, gamma, eta)
            worst = max(worst, abs(taxed - base) / base)

            a, b = rng.uniform(0.01, 0.99, size=2)
            one = solve_unemployment(params, curve, PolicyRegime(gamma=a, tau_f=b), eta)
            two = solve_unemployment(params, curve, PolicyRegime(gamma=b, tau_f=a), eta)
            assert one == two

            ref = solve_equilibrium(params, curve, PolicyRegime(gamma, 0.3, 0.0), eta)
            for tw in (0.25, 0.9):
                alt = solve_equilibrium(params, curve, PolicyRegime(gamma, 0.3, tw), eta)
                assert (alt.u_star, alt.theta_star, alt.wage) == (ref.u_star, ref.theta_star, ref.wage)
        c.notes.append(f"worst tax-free rel diff {worst:.1e}")
        assert worst < 1e-15


def report_lines() -> list[str]:
    lines = []
    for n in range(1, 9):
        if n not in RESULTS:
            lines.append(f"criterion {n}: NOT RUN")
            continue
        ok, text = RESULTS[n]
        lines.append(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {text}")
    return lines
