import math

import numpy as np
import pytest

from cyclic_gates.dynamics import check_cyclicity, cyclic_state, propagate_spinor
from cyclic_gates.formulas import DomainError, reversed_loop_phases, single_qubit_phases
from cyclic_gates.solvers import (ConstraintViolation, ConvergenceError, TWO_QUBIT_UNKNOWNS,
                                  effective_loops, eta_angle, eta_branches,
                                  find_two_qubit_branches, integrate_single_plan,
                                  integrate_two_qubit_plan, newton, physical_branch_limit,
                                  printed_eta_residual, published_line, single_qubit_plan,
                                  single_qubit_residuals, solve_single_qubit_two_loop,
                                  solve_two_qubit_point, solve_two_qubit_two_loop,
                                  sweep_single_qubit, two_qubit_gammas, two_qubit_residuals)


# --- Newton ---------------------------------------------------------------------

def test_newton_solves_small_system():
    x, it = newton(lambda v: np.array([v[0] ** 2 - 2, v[1] - v[0]]), [1.0, 0.0])
    np.testing.assert_allclose(x, [math.sqrt(2)] * 2, atol=1e-12)
    assert it < 10


def test_newton_reports_failure():
    with pytest.raises(ConvergenceError):
        newton(lambda v: np.array([v[0] ** 2 + 1]), [0.5])


def test_newton_respects_domain():
    with pytest.raises(DomainError):
        newton(lambda v: v - 1, [-1.0], feasible=lambda v: bool(v[0] > 0))


# --- single-qubit residuals and solver ---------------------------------------------

def test_single_residuals_are_the_phase_balances():
    w, w0, w0p, w1, w1p = 0.4, 0.7, 0.5, 1.0, 1.0
    r1, r2 = single_qubit_residuals(w, w0, w0p, w1, w1p, 0.5)
    g = (single_qubit_phases(w0, w1, w).geometric
         + reversed_loop_phases(w0p, w1p, w).geometric)
    d = single_qubit_phases(w0, w1, w).dynamic + reversed_loop_phases(w0p, w1p, w).dynamic
    # r1 = Gamma + gamma_g / pi, r2 = -gamma_d / pi
    assert r1 == pytest.approx(0.5 + g / math.pi, abs=1e-14)
    assert r2 == pytest.approx(-d / math.pi, abs=1e-14)


def test_residual_r1_zero_by_construction():
    w, w0, w0p = 0.37, 0.9, 0.4
    big, bigp = math.hypot(w0, 1 - w), math.hypot(w0p, 1 + w)
    gamma = 2 - (1 - w) / big - (1 + w) / bigp
    assert abs(single_qubit_residuals(w, w0, w0p, 1, 1, gamma)[0]) < 1e-15


def test_single_residual_domain():
    with pytest.raises(DomainError):
        single_qubit_residuals(0.0, 1, 1, 1, 1, 0.5)
    with pytest.raises(DomainError):
        single_qubit_residuals(1.0, 0, 1, 1, 1, 0.5)


@pytest.mark.parametrize("w0,expected", [(0.6, (0.6425199045, 0.2550300963)),
                                         (0.7, (0.5182682334, 0.5852076737)),
                                         (0.8, (0.3460476966, 0.7732593159))])
def test_single_qubit_solutions(w0, expected):
    sol = solve_single_qubit_two_loop(0.5, pin="omega0", value=w0)
    assert sol.max_residual < 1e-10
    assert (sol.unknowns["omega"], sol.unknowns["omega0p"]) == pytest.approx(expected, abs=1e-9)
    assert sol.gamma_geometric == pytest.approx(-0.5 * math.pi, abs=1e-10)
    loop1, loop2 = integrate_single_plan(sol.plan)
    total = loop1 + loop2
    assert abs(total.dynamic) < 1e-6
    assert total.geometric == pytest.approx(-0.5 * math.pi, abs=1e-5)


def test_single_qubit_pin_other_unknown():
    sol = solve_single_qubit_two_loop(0.5, pin="omega", value=0.5182682334)
    assert sol.unknowns["omega0"] == pytest.approx(0.7, abs=1e-8)


def test_single_loop_states_coincide():
    sol = solve_single_qubit_two_loop(0.5, pin="omega0", value=0.7)
    plan = sol.plan
    assert plan.loop2.reversed and plan.loop2.omega == plan.loop1.omega
    assert plan.loop2.cyclic_chi == pytest.approx(plan.loop1.cyclic_chi, abs=1e-15)
    end = propagate_spinor(plan.loop1, cyclic_state(plan.loop1)).states[-1]
    ok, defect = check_cyclicity(plan.loop2, end / np.linalg.norm(end))
    assert ok and defect < 1e-6


def test_published_line_misses_dynamic_balance():
    # on the line both ratios equal 3/4: the geometric target holds, the
    # dynamic balance is off by 7/6
    for w0 in (0.1, 0.2, 0.4):
        w, w0p = published_line(w0)
        r1, r2 = single_qubit_residuals(w, w0, w0p, 1.0, 1.0, 0.5)
        assert abs(r1) < 2e-4
        assert r2 == pytest.approx(-7 / 6, abs=2e-3)


def test_no_solution_for_small_pinned_omega0():
    with pytest.raises(ConvergenceError):
        solve_single_qubit_two_loop(0.5, pin="omega0", value=0.2)


def test_sweep_is_continuous_where_solvable():
    pins = np.linspace(0.6, 0.8, 9)
    points = sweep_single_qubit(0.5, pins)
    assert all(p.ok for p in points)
    w = [p.solution.unknowns["omega"] for p in points]
    assert np.all(np.diff(w) < 0)
    again = sweep_single_qubit(0.5, pins)
    assert [p.solution.unknowns for p in again] == [p.solution.unknowns for p in points]


def test_target_gamma_domain():
    for g in (0.0, 2.0, -0.3):
        with pytest.raises(DomainError):
            solve_single_qubit_two_loop(g)
        with pytest.raises(DomainError):
            sweep_single_qubit(g, [0.7])


def test_plan_tilt_aligns_loops():
    plan = single_qubit_plan(0.3, 0.8, 0.5)
    assert plan.loop2.cyclic_chi == pytest.approx(plan.loop1.cyclic_chi)


# --- two-qubit residuals and solver ---------------------------------------------------

def _point(omega=4.0):
    return solve_two_qubit_point(omega, 5.0, 5.0, 1.0)


def test_two_qubit_point_at_omega_4():
    sol = _point()
    x = [sol.unknowns[k] for k in TWO_QUBIT_UNKNOWNS]
    np.testing.assert_allclose(x, [1.82843, 2.76468, 0.85111], atol=1e-5)
    assert sol.max_residual < 1e-9
    for d in (0, 1):
        loop1, loop2 = integrate_two_qubit_plan(sol.plan, d)
        assert abs(loop1.dynamic + loop2.dynamic) < 1e-6


def test_two_qubit_residuals_are_delta_phase_balances():
    sol = _point(1.0)
    x = [sol.unknowns[k] for k in TWO_QUBIT_UNKNOWNS]
    assert max(abs(r) for r in two_qubit_residuals(1.0, 5.0, 5.0, *x, 1.0)) < 1e-9
    for d in (0, 1):
        l1, l2 = effective_loops(sol.plan, d)
        assert l2.cyclic_chi == pytest.approx(l1.cyclic_chi, abs=1e-9)


def test_eta_independent_of_control_state_at_solutions():
    sol = _point(2.0)
    w0p, w1p, wp = (sol.unknowns[k] for k in ("omega0p", "omega1p", "omegap"))
    e0, e1 = eta_branches(5.0, 5.0, 2.0, w0p, w1p, wp, 1.0)
    assert abs(e0 - e1) < 1e-9
    assert eta_angle(5.0, 5.0, 2.0, w0p, w1p, wp, 1.0) == pytest.approx(sol.plan.eta)


def test_eta_trivial_without_coupling():
    e0, e1 = eta_branches(1.0, 2.0, 0.5, 0.7, 0.3, 0.9, 0.0)
    assert e0 == e1


def test_eta_violation_raises():
    with pytest.raises(ConstraintViolation):
        eta_angle(1.0, 2.0, 0.5, 0.7, 0.3, 0.9, 1.0)


def test_printed_eta_form_leaves_delta_dependence():
    # zeroing the printed cross-difference instead of r0 leaves eta
    # depending on the control state
    sol = _point(2.0)
    x = np.array([sol.unknowns[k] for k in TWO_QUBIT_UNKNOWNS])

    def fun(v):
        r = two_qubit_residuals(2.0, 5.0, 5.0, *v, 1.0)
        return np.array([printed_eta_residual(2.0, 5.0, 5.0, *v, 1.0), r[1], r[2]])

    y, _ = newton(fun, x)
    e0, e1 = eta_branches(5.0, 5.0, 2.0, y[1], y[2], y[0], 1.0)
    assert abs(e0 - e1) > 1e-3


def test_gammas_match_loop_sum():
    sol = _point(3.0)
    for d, g in zip((0, 1), sol.gamma_geometric):
        loop1, loop2 = integrate_two_qubit_plan(sol.plan, d)
        assert loop1.geometric + loop2.geometric == pytest.approx(g, abs=1e-6)
    x = [sol.unknowns[k] for k in TWO_QUBIT_UNKNOWNS]
    g0, g1 = two_qubit_gammas(3.0, 5.0, 5.0, *x, 1.0)
    assert (-g0 * math.pi, -g1 * math.pi) == pytest.approx(sol.gamma_geometric, abs=1e-10)


def test_sweep_reports_failures_and_continues():
    points = solve_two_qubit_two_loop(5.0, 5.0, 1.0, [0.5, 1.0, 7.0, 2.0])
    assert [p.ok for p in points] == [True, True, False, True]
    assert points[2].error


def test_sweep_deterministic():
    grid = [0.5, 1.0, 1.5]
    a = solve_two_qubit_two_loop(5.0, 5.0, 1.0, grid)
    b = solve_two_qubit_two_loop(5.0, 5.0, 1.0, grid)
    assert [p.solution.unknowns for p in a] == [p.solution.unknowns for p in b]


def test_decoupled_limit_gives_trivial_gate():
    points = solve_two_qubit_two_loop(5.0, 5.0, 0.0, [1.0, 2.0])
    for p in points:
        assert p.ok
        g0, g1 = p.solution.gamma_geometric
        assert g0 == pytest.approx(g1, abs=1e-12)


def test_branch_limit_and_unique_root():
    top = physical_branch_limit(5.0, 5.0, 1.0, start=2.0)
    assert top == pytest.approx(6.178, abs=2e-3)
    assert len(find_two_qubit_branches(1.0, 5.0, 5.0, 1.0)) == 1


def test_degenerate_loop_one_rejected():
    with pytest.raises(DomainError):
        solve_two_qubit_two_loop(0.0, 1.0, 1.0, [1.0])
    with pytest.raises(DomainError):
        two_qubit_residuals(2.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0)
