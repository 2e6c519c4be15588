from fractions import Fraction

import pytest

from innovmatch import EfficiencyCurve, ModelParams, PolicyRegime


@pytest.fixture
def params():
    return ModelParams(y=1.0, b=0.0, c=1.0, r=0.5, delta=0.5, alpha=0.5)


@pytest.fixture
def curve():
    return EfficiencyCurve("quadratic", 1.0, 1.0)


@pytest.fixture
def policy():
    return PolicyRegime(gamma=0.5, tau_f=0.0, tau_w=0.0)


def exact_half_alpha(eta, gamma="1/2", tau_f="0", y=1, c=1, r="1/2", delta="1/2", scale=1):
    """Exact (theta, p, u) for alpha = 1/2 and the quadratic curve.

    With alpha = 1/2 every step of the closed form is rational:
    theta = (K A (y - eta))^2 and p = A sqrt(theta) = K A^2 (y - eta).
    """
    F = Fraction
    eta, gamma, tau_f = F(eta), F(gamma), F(tau_f)
    y, c, r, delta, scale = F(y), F(c), F(r), F(delta), F(scale)
    A = scale * (eta - eta * eta / 2)
    k = (1 - tau_f) * (1 - gamma) / ((r + delta) * c)
    root = k * A * (y - eta)
    theta = root * root
    p = A * root
    return theta, p, delta / (delta + p)


def mp_point(params, curve, policy, eta):
    """The same model point with every number as an mpmath float.

    The closed form is plain arithmetic, so the library evaluates it in
    extended precision when handed mpf inputs; finite differences then
    carry no double-precision cancellation.
    """
    from dataclasses import astuple, replace
    from mpmath import mpf

    from innovmatch import ModelParams, PolicyRegime

    P = ModelParams(*(mpf(x) for x in astuple(params)))
    C = replace(curve, scale=mpf(curve.scale), domain_max=mpf(curve.domain_max))
    pol = PolicyRegime(*(mpf(x) for x in astuple(policy)))
    return P, C, pol, mpf(eta)


def fd_derivatives(params, curve, policy, eta, h=1e-6, dps=30):
    """Central differences of the closed-form u* in eta, gamma and tau_f."""
    from dataclasses import replace
    from mpmath import mp, mpf

    from innovmatch import solve_unemployment
    from innovmatch.statics import finite_difference

    with mp.workdps(dps):
        P, C, pol, e = mp_point(params, curve, policy, eta)
        hh = mpf(h)
        top = min(P.y, C.domain_max)
        d_eta = finite_difference(lambda x: solve_unemployment(P, C, pol, x), e, 0, top, hh)
        d_gam = finite_difference(
            lambda g: solve_unemployment(P, C, replace(pol, gamma=g), e), pol.gamma, 0, 1, hh)
        d_tau = finite_difference(
            lambda t: solve_unemployment(P, C, replace(pol, tau_f=t), e), pol.tau_f, 0, 1, hh)
        return float(d_eta), float(d_gam), float(d_tau)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.report_lines():
        terminalreporter.write_line(line)
