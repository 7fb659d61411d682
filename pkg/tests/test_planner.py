import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zealotdyn.equilibrium import equilibrium_expectation
from zealotdyn.model import new_model
from zealotdyn.planner import (
    PlanRequest,
    conversion_feasible,
    discriminant,
    equilibrium_opinion,
    exact_injection,
    feasibility_border,
    max_alpha_for_conversion,
    optimal_injection,
    round_zealots,
)


def test_equilibrium_opinion_examples():
    assert equilibrium_opinion(10, 0) == 0
    assert equilibrium_opinion(10, 10) == 0.5
    assert equilibrium_opinion(10, 20, 0.05) == pytest.approx(20 / ((1 + 1) * 10 + 20))
    assert equilibrium_opinion(10, 20, 0.05) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        equilibrium_opinion(0, 0)


def test_plain_injection():
    out = optimal_injection(PlanRequest(z0=10, lam=0.5))
    assert out.z1_star == 10 and out.z1_star_real == 10
    assert out.feasible_exact and not out.capped
    assert out.achieved_lambda == 0.5


def test_backfire_injection():
    out = optimal_injection(PlanRequest(z0=10, lam=0.5, alpha=0.05))
    assert out.D == pytest.approx(0.25)
    assert out.z1_star_real == pytest.approx(20)
    assert out.z1_star == 20
    assert out.achieved_lambda == pytest.approx(0.5, abs=1e-12)


def test_infeasible_with_budget():
    out = optimal_injection(PlanRequest(z0=10, lam=0.5, alpha=0.11, z_max=50))
    assert out.D == pytest.approx(-0.05)
    assert out.z1_star == 50 and not out.feasible_exact and out.capped


def test_infeasible_without_budget_is_unbounded():
    out = optimal_injection(PlanRequest(z0=10, lam=0.5, alpha=0.2))
    assert out.unbounded and out.z1_star is None and not out.feasible_exact
    assert out.achieved_lambda == pytest.approx(1 / 3)


def test_budget_caps_feasible_plan():
    out = optimal_injection(PlanRequest(z0=10, lam=0.5, alpha=0.05, z_max=12.7))
    assert out.capped and not out.feasible_exact
    assert out.z1_star == 12
    assert out.achieved_lambda == pytest.approx(equilibrium_opinion(10, 12, 0.05))


def test_convert_mode_limited_by_group():
    out = optimal_injection(PlanRequest(z0=60, lam=0.5, mode="convert", n=100))
    assert out.capped and out.z1_star == 40 and out.conversion_ok is False
    ok = optimal_injection(PlanRequest(z0=10, lam=0.5, mode="convert", n=100))
    assert ok.z1_star == 10 and ok.conversion_ok


@pytest.mark.parametrize("kwargs", [
    dict(z0=0, lam=0.5),
    dict(z0=5, lam=1.0),
    dict(z0=5, lam=0.0),
    dict(z0=5, lam=0.5, alpha=1.0),
    dict(z0=5, lam=0.5, z_max=-1),
    dict(z0=5, lam=0.5, mode="convert"),
    dict(z0=5, lam=0.5, mode="teleport"),
])
def test_request_validation(kwargs):
    with pytest.raises(ValueError):
        PlanRequest(**kwargs)


@given(st.integers(1, 500), st.floats(0.01, 0.99))
def test_alpha_zero_reduction(z0, lam):
    out = optimal_injection(PlanRequest(z0=z0, lam=lam))
    assert out.z1_star_real == pytest.approx(lam * z0 / (1 - lam), rel=1e-15)


@given(st.integers(1, 200), st.floats(0.01, 0.99), st.floats(0, 0.99))
def test_exact_when_feasible(z0, lam, alpha):
    z1 = exact_injection(z0, lam, alpha)
    if discriminant(z0, lam, alpha) > 1e-9:
        assert equilibrium_opinion(z0, z1, alpha) == pytest.approx(lam, abs=1e-12)
    elif discriminant(z0, lam, alpha) <= 0:
        assert z1 is None


@given(st.integers(1, 200), st.floats(0.05, 0.95))
def test_gap_decreases_when_infeasible(z0, lam):
    alpha = min(0.99, 1.5 * feasibility_border(z0, lam))
    if discriminant(z0, lam, alpha) >= 0:
        return
    grid = np.geomspace(0.1, 1e6, 200)
    gap = np.array([(equilibrium_opinion(z0, z, alpha) - lam) ** 2 for z in grid])
    assert np.all(gap > 0)
    assert np.all(np.diff(gap) < 0)


@pytest.mark.parametrize("z0", [1, 5, 17, 33, 50])
def test_cross_check_with_equilibrium_expectation(z0):
    n = 100
    out = optimal_injection(PlanRequest(z0=z0, lam=0.5))
    p = new_model(n, z0, out.z1_star, out.z1_star)
    assert equilibrium_expectation(p) / n == pytest.approx(out.achieved_lambda, rel=1e-12)


def test_feasibility_frontier():
    for z0 in range(1, 101):
        border = feasibility_border(z0, 0.5)
        assert border == pytest.approx(1 / z0)
        for alpha in np.logspace(-2, 0, 60):
            if not math.isclose(alpha, border):
                assert (discriminant(z0, 0.5, alpha) > 0) == (alpha < border)


def test_conversion_feasible():
    assert conversion_feasible(100, 10, 0.5)
    assert not conversion_feasible(100, 60, 0.5)
    assert conversion_feasible(100, 50, 0.5)
    assert not conversion_feasible(100, 1, 1 - 1e-9)
    assert conversion_feasible(100, 10, 0.5, alpha=0.05)
    assert not conversion_feasible(100, 10, 0.5, alpha=0.2)


def test_conversion_cutoff():
    assert max_alpha_for_conversion(100, 38, 0.5) > 0
    for z0 in range(39, 101):
        assert max_alpha_for_conversion(100, z0, 0.5) is None


def test_max_alpha_root():
    a = max_alpha_for_conversion(100, 10, 0.5)
    assert 10 + exact_injection(10, 0.5, a) == pytest.approx(100, abs=1e-9)
    assert discriminant(10, 0.5, a) > 0


def test_max_alpha_floor_is_configurable():
    assert max_alpha_for_conversion(100, 39, 0.5, alpha_min=0.0) == pytest.approx(
        (0.5 - 19.5 / 61) / 19.5)


@pytest.mark.parametrize("z1, z0, lam, alpha, expected", [
    (7.0, 10, 0.4, 0, 7),
    (10.5, 10, 0.5, 0, 10),
    (6.9, 10, 0.4, 0, 7),
    (0.2, 3, 0.5, 0, 1),
])
def test_round_zealots(z1, z0, lam, alpha, expected):
    assert round_zealots(z1, z0, lam, alpha) == expected


def test_round_zealots_tie_goes_down():
    # opinions 0 and 1/2 sit exactly 1/4 either side of the target
    assert round_zealots(0.5, 1, 0.25) == 0
    with pytest.raises(ValueError):
        round_zealots(-1, 2, 0.5)
