"""Two-loop schemes: cancel the dynamic phase, keep a chosen geometric phase.

Loop 1 is the plain rotating field.  Loop 2 is the sign-reversed field tilted
about y so that its cyclic pair coincides with loop 1's; the dynamic phases of
the two loops then cancel while the geometric phases add.

Unknown field parameters are found with a damped Newton iteration on the
constraint residuals, and one-parameter families are traced by continuation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .dynamics import (DEFAULT_STEPS, PhaseTriple, RotatingFieldSegment, cyclic_state,
                       propagate_sequence)
from .formulas import DomainError, effective_omega1, reduce_phase, reversed_loop_phases, \
    single_qubit_phases

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 100
JACOBIAN_STEP = 1e-7


class ConvergenceError(RuntimeError):
    """Newton iteration did not reach the residual tolerance."""


class ConstraintViolation(ValueError):
    """A constraint that should hold for the given parameters does not."""


@dataclass(frozen=True)
class MultiLoopPlan:
    loop1: RotatingFieldSegment
    loop2: RotatingFieldSegment
    kind: str
    J: float = 0.0
    eta: float = 0.0


@dataclass
class SolverSolution:
    plan: MultiLoopPlan
    residuals: tuple[float, ...]
    gamma_geometric: float | tuple[float, float]
    iterations: int
    unknowns: dict[str, float] = field(default_factory=dict)

    @property
    def max_residual(self) -> float:
        return max(abs(r) for r in self.residuals)


@dataclass
class SweepPoint:
    """One grid point of a continuation sweep; ``solution`` is None on failure."""

    value: float
    solution: SolverSolution | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.solution is not None


def newton(fun: Callable[[np.ndarray], np.ndarray], x0, *, tol: float = NEWTON_TOL,
           max_iter: int = NEWTON_MAX_ITER, step: float = JACOBIAN_STEP,
           feasible: Callable[[np.ndarray], bool] | None = None) -> tuple[np.ndarray, int]:
    """Damped Newton with a central-difference Jacobian.

    Each full step is halved until the residual norm drops and ``feasible``
    accepts the point.  If no damped step improves the residual once it is
    already at the floating-point floor (below 100 * tol), that point is
    returned.
    """
    x = np.array(x0, dtype=float)
    if feasible is not None and not feasible(x):
        raise DomainError(f"starting point {x} is outside the physical domain")
    r = np.asarray(fun(x), dtype=float)
    norm = np.linalg.norm(r)
    for it in range(1, max_iter + 1):
        if norm < tol:
            return x, it - 1
        jac = np.empty((r.size, x.size))
        for j in range(x.size):
            h = step * max(1.0, abs(x[j]))
            xp, xm = x.copy(), x.copy()
            xp[j] += h
            xm[j] -= h
            jac[:, j] = (np.asarray(fun(xp)) - np.asarray(fun(xm))) / (2 * h)
        try:
            dx = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError(f"singular Jacobian at {x}") from exc
        lam = 1.0
        while lam > 1e-10:
            trial = x + lam * dx
            if feasible is None or feasible(trial):
                with np.errstate(all="ignore"):
                    rt = np.asarray(fun(trial), dtype=float)
                nt = np.linalg.norm(rt)
                if np.isfinite(nt) and nt < norm:
                    break
            lam *= 0.5
        else:
            if norm < 100 * tol:
                return x, it
            if feasible is not None and not feasible(x + dx):
                raise DomainError(f"Newton step leaves the physical domain near {x}")
            raise ConvergenceError(f"line search failed at {x} (|r| = {norm:.3g})")
        x, r, norm = trial, rt, nt
    if norm < tol:
        return x, max_iter
    raise ConvergenceError(f"no convergence after {max_iter} iterations (|r| = {norm:.3g})")


def _positive(x: np.ndarray) -> bool:
    return bool(np.all(x > 0))


# --- single qubit ------------------------------------------------------------

SINGLE_UNKNOWNS = ("omega", "omega0", "omega0p")


def single_qubit_residuals(omega: float, omega0: float, omega0p: float,
                           omega1: float, omega1p: float, Gamma: float) -> tuple[float, float]:
    """Residuals of the geometric-phase target and the dynamic-phase balance.

    r1 = (w1 - w)/O + (w1' + w)/O' - (2 - Gamma)
    r2 = (w0^2 + w1^2 - w w1)/(w O) - (w0'^2 + w1'^2 + w w1')/(w O')
    """
    if not omega > 0:
        raise DomainError("omega must be positive")
    big = math.hypot(omega0, omega1 - omega)
    bigp = math.hypot(omega0p, omega1p + omega)
    if big == 0 or bigp == 0:
        raise DomainError("degenerate generalised Rabi frequency")
    r1 = (omega1 - omega) / big + (omega1p + omega) / bigp - (2.0 - Gamma)
    r2 = ((omega0 ** 2 + omega1 ** 2 - omega * omega1) / (omega * big)
          - (omega0p ** 2 + omega1p ** 2 + omega * omega1p) / (omega * bigp))
    return r1, r2


def loop_alignment_tilt(alpha: float, alpha_p: float) -> float:
    """Tilt for loop 2 that carries its cyclic pair (at alpha') onto loop 1's (alpha)."""
    return alpha - alpha_p


def published_line(omega0: float) -> tuple[float, float]:
    """(omega, omega0') on the straight line reported for Gamma = 1/2, omega1 = omega1' = 1.

        omega + 1.13389 omega0 = 0.99998
        omega + 1.07091 omega0 - 0.06299 omega0' = 0.88889

    The coefficients are rounded.  This line satisfies the geometric-phase
    target but not the dynamic-phase balance, so it serves as a reference
    curve only.
    """
    omega = 0.99998 - 1.13389 * omega0
    return omega, (omega + 1.07091 * omega0 - 0.88889) / 0.06299


def single_qubit_plan(omega: float, omega0: float, omega0p: float,
                      omega1: float = 1.0, omega1p: float = 1.0) -> MultiLoopPlan:
    loop1 = RotatingFieldSegment(omega0, omega1, omega)
    alpha = math.atan2(omega0, omega1 - omega)
    alpha_p = math.atan2(omega0p, omega1p + omega)
    loop2 = RotatingFieldSegment(omega0p, omega1p, omega, reversed=True,
                                 axis_tilt=loop_alignment_tilt(alpha, alpha_p))
    return MultiLoopPlan(loop1, loop2, "single")


def _grid_seeds(fun, lows, highs, count: int, keep: int) -> list[np.ndarray]:
    axes = [np.linspace(lo, hi, count) for lo, hi in zip(lows, highs)]
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(axes))
    with np.errstate(all="ignore"):
        norms = np.array([np.linalg.norm(fun(p)) for p in mesh])
    norms[~np.isfinite(norms)] = np.inf
    order = np.argsort(norms, kind="stable")[:keep]
    return [mesh[i] for i in order if np.isfinite(norms[i])]


def solve_single_qubit_two_loop(Gamma: float, omega1: float = 1.0, omega1p: float = 1.0,
                                pin: str = "omega0", value: float = 0.2,
                                seed: Sequence[float] | None = None,
                                tol: float = NEWTON_TOL) -> SolverSolution:
    """Solve the two single-qubit two-loop equations with one unknown pinned.

    The unknowns are (omega, omega0, omega0'); ``pin`` names the one held at
    ``value`` and Newton runs over the other two.  Without a ``seed`` the
    start point comes from a coarse grid search of the positive quadrant.
    """
    if not 0 < Gamma < 2:
        raise DomainError(f"target Gamma must lie in (0, 2), got {Gamma}")
    if pin not in SINGLE_UNKNOWNS:
        raise ValueError(f"pin must be one of {SINGLE_UNKNOWNS}")
    if not value > 0:
        raise DomainError("pinned value must be positive")
    free = [k for k in SINGLE_UNKNOWNS if k != pin]

    def unpack(x):
        vals = dict(zip(free, x))
        vals[pin] = value
        return vals

    def fun(x):
        v = unpack(x)
        return np.array(single_qubit_residuals(v["omega"], v["omega0"], v["omega0p"],
                                               omega1, omega1p, Gamma))

    if seed is not None:
        starts = [np.asarray(seed, dtype=float)]
    else:
        scale = max(omega1, omega1p, value)
        starts = _grid_seeds(fun, [1e-3 * scale] * 2, [3 * scale] * 2, 60, 8)
    last_exc: Exception | None = None
    for x0 in starts:
        try:
            x, iters = newton(fun, x0, tol=tol, feasible=_positive)
            break
        except (ConvergenceError, DomainError) as exc:
            last_exc = exc
    else:
        raise ConvergenceError(f"no solution found for {pin} = {value}: {last_exc}")

    v = unpack(x)
    plan = single_qubit_plan(v["omega"], v["omega0"], v["omega0p"], omega1, omega1p)
    res = tuple(abs(r) for r in fun(x))
    geo = (single_qubit_phases(v["omega0"], omega1, v["omega"]).geometric
           + reversed_loop_phases(v["omega0p"], omega1p, v["omega"]).geometric)
    return SolverSolution(plan, res, geo, iters, v)


def sweep_single_qubit(Gamma: float, pinned_values: Sequence[float], omega1: float = 1.0,
                       omega1p: float = 1.0, pin: str = "omega0") -> list[SweepPoint]:
    """Continuation over pinned values; each success seeds the next point."""
    if not 0 < Gamma < 2:
        raise DomainError(f"target Gamma must lie in (0, 2), got {Gamma}")
    out = []
    seed = None
    for value in pinned_values:
        try:
            sol = solve_single_qubit_two_loop(Gamma, omega1, omega1p, pin, value, seed)
        except (ConvergenceError, DomainError) as exc:
            if seed is not None:
                try:
                    sol = solve_single_qubit_two_loop(Gamma, omega1, omega1p, pin, value)
                except (ConvergenceError, DomainError) as exc2:
                    out.append(SweepPoint(value, None, str(exc2)))
                    continue
            else:
                out.append(SweepPoint(value, None, str(exc)))
                continue
        seed = [sol.unknowns[k] for k in SINGLE_UNKNOWNS if k != pin]
        out.append(SweepPoint(value, sol))
    return out


# --- two qubits --------------------------------------------------------------

TWO_QUBIT_UNKNOWNS = ("omegap", "omega0p", "omega1p")


def _dyn_ratio(omega0, omega1, omega, sign):
    """(w0^2 + w1 (w1 + sign w)) / (w O) with O = sqrt(w0^2 + (w1 + sign w)^2)."""
    shifted = omega1 + sign * omega
    big = math.hypot(omega0, shifted)
    if big == 0 or not omega > 0:
        raise DomainError("degenerate denominator in the dynamic-phase balance")
    return (omega0 ** 2 + omega1 * shifted) / (omega * big)


def two_qubit_residuals(omega: float, omega0: float, omega1: float, omegap: float,
                        omega0p: float, omega1p: float, J: float) -> tuple[float, float, float]:
    """(r0, r1, r2) for the two-qubit two-loop scheme.

    r0 is the cleared-denominator condition for eta to be the same for both
    control states,
        w0 [(w1' + w')^2 + w0'^2 - J^2] - w0' [(w1 - w)^2 + w0^2 - J^2],
    and r1, r2 balance the loop dynamic phases for delta = 0, 1.
    """
    for d in (0, 1):
        if math.hypot(omega0, effective_omega1(omega1, J, d) - omega) == 0:
            raise DomainError("loop-1 Rabi frequency vanishes")
        if math.hypot(omega0p, effective_omega1(omega1p, J, d) + omegap) == 0:
            raise DomainError("loop-2 Rabi frequency vanishes")
    r0 = (omega0 * ((omega1p + omegap) ** 2 + omega0p ** 2 - J ** 2)
          - omega0p * ((omega1 - omega) ** 2 + omega0 ** 2 - J ** 2))
    r = [r0]
    for d in (0, 1):
        r.append(_dyn_ratio(omega0, effective_omega1(omega1, J, d), omega, -1)
                 - _dyn_ratio(omega0p, effective_omega1(omega1p, J, d), omegap, +1))
    return tuple(r)


def printed_eta_residual(omega: float, omega0: float, omega1: float, omegap: float,
                         omega0p: float, omega1p: float, J: float) -> float:
    """w0 [(w1' + w')^2 - J^2] - w0' [(w1 - w)^2 - J^2].

    Equates the tan-differences rather than the angle differences, so its zero
    set does not make eta independent of the control state; kept for
    comparison only.
    """
    return (omega0 * ((omega1p + omegap) ** 2 - J ** 2)
            - omega0p * ((omega1 - omega) ** 2 - J ** 2))


def eta_branches(omega0: float, omega1: float, omega: float, omega0p: float,
                 omega1p: float, omegap: float, J: float) -> tuple[float, float]:
    out = []
    for d in (0, 1):
        alpha = math.atan2(omega0, effective_omega1(omega1, J, d) - omega)
        alpha_p = math.atan2(omega0p, effective_omega1(omega1p, J, d) + omegap)
        out.append(loop_alignment_tilt(alpha, alpha_p))
    return out[0], out[1]


def eta_angle(omega0: float, omega1: float, omega: float, omega0p: float,
              omega1p: float, omegap: float, J: float, atol: float = 1e-9) -> float:
    """Loop-2 tilt for the two-qubit scheme; must not depend on delta."""
    e0, e1 = eta_branches(omega0, omega1, omega, omega0p, omega1p, omegap, J)
    if abs(reduce_phase(e0 - e1)) > atol:
        raise ConstraintViolation(f"eta depends on the control state: {e0:.6g} vs {e1:.6g}")
    return e0


def two_qubit_gammas(omega: float, omega0: float, omega1: float, omegap: float,
                     omega0p: float, omega1p: float, J: float) -> tuple[float, float]:
    """Gamma^delta = 2 - (w1^d - w)/O^d - (w1'^d + w')/O'^d for delta = 0, 1."""
    out = []
    for d in (0, 1):
        a = effective_omega1(omega1, J, d) - omega
        b = effective_omega1(omega1p, J, d) + omegap
        out.append(2.0 - a / math.hypot(omega0, a) - b / math.hypot(omega0p, b))
    return out[0], out[1]


def two_qubit_plan(omega: float, omega0: float, omega1: float, omegap: float,
                   omega0p: float, omega1p: float, J: float) -> MultiLoopPlan:
    eta = eta_angle(omega0, omega1, omega, omega0p, omega1p, omegap, J, atol=1e-6)
    loop1 = RotatingFieldSegment(omega0, omega1, omega)
    loop2 = RotatingFieldSegment(omega0p, omega1p, omegap, reversed=True, axis_tilt=eta)
    return MultiLoopPlan(loop1, loop2, "two-qubit", J=J, eta=eta)


def _two_qubit_solution(omega, omega0, omega1, J, x, iters) -> SolverSolution:
    omegap, omega0p, omega1p = x
    res = tuple(abs(r) for r in two_qubit_residuals(omega, omega0, omega1, omegap,
                                                     omega0p, omega1p, J))
    g0, g1 = two_qubit_gammas(omega, omega0, omega1, omegap, omega0p, omega1p, J)
    plan = two_qubit_plan(omega, omega0, omega1, omegap, omega0p, omega1p, J)
    return SolverSolution(plan, res, (-g0 * math.pi, -g1 * math.pi), iters,
                          dict(zip(TWO_QUBIT_UNKNOWNS, (omegap, omega0p, omega1p))))


def solve_two_qubit_point(omega: float, omega0: float, omega1: float, J: float,
                          seed: Sequence[float] | None = None,
                          tol: float = NEWTON_TOL) -> SolverSolution:
    """Solve for loop-2 (omega', omega0', omega1') at one loop-1 rotation rate."""

    def fun(x):
        return np.array(two_qubit_residuals(omega, omega0, omega1, *x, J))

    if seed is not None:
        starts = [np.asarray(seed, dtype=float)]
    else:
        starts = find_two_qubit_seeds(omega, omega0, omega1, J)
    last_exc: Exception | None = None
    for x0 in starts:
        try:
            x, iters = newton(fun, x0, tol=tol, feasible=_positive)
            return _two_qubit_solution(omega, omega0, omega1, J, x, iters)
        except (ConvergenceError, DomainError, ConstraintViolation) as exc:
            last_exc = exc
    raise ConvergenceError(f"no solution at omega = {omega}: {last_exc}")


def find_two_qubit_seeds(omega: float, omega0: float, omega1: float, J: float,
                         count: int = 16, keep: int = 12) -> list[np.ndarray]:
    """Best starting points from a coarse grid over the positive octant."""
    scale = max(omega0, omega1, abs(J), omega)

    def fun(x):
        try:
            r = two_qubit_residuals(omega, omega0, omega1, *x, J)
        except DomainError:
            return np.array([np.inf])
        # r0 carries two extra powers of frequency
        return np.array([r[0] / scale ** 3, r[1], r[2]])

    return _grid_seeds(fun, [0.05 * scale] * 3, [3 * scale] * 3, count, keep)


def find_two_qubit_branches(omega: float, omega0: float, omega1: float, J: float,
                            tol: float = NEWTON_TOL) -> list[SolverSolution]:
    """All distinct roots reached from the grid-search seeds."""
    found: list[SolverSolution] = []
    for x0 in find_two_qubit_seeds(omega, omega0, omega1, J):
        try:
            sol = solve_two_qubit_point(omega, omega0, omega1, J, seed=x0, tol=tol)
        except (ConvergenceError, DomainError):
            continue
        x = np.array([sol.unknowns[k] for k in TWO_QUBIT_UNKNOWNS])
        if all(np.max(np.abs(x - np.array([s.unknowns[k] for k in TWO_QUBIT_UNKNOWNS]))) > 1e-6
               for s in found):
            found.append(sol)
    return found


def solve_two_qubit_two_loop(omega0: float, omega1: float, J: float,
                             omega_grid: Sequence[float],
                             seed: Sequence[float] | None = None) -> list[SweepPoint]:
    """Continuation sweep over loop-1 rotation rates.

    The first point is seeded from ``seed`` or a grid search; each converged
    point seeds the next.  Failures are recorded and the sweep carries on from
    the last good solution.
    """
    for d in (0, 1):
        if math.hypot(omega0, effective_omega1(omega1, J, d)) == 0:
            raise DomainError("loop-1 parameters are degenerate")
    out = []
    current = None if seed is None else np.asarray(seed, dtype=float)
    for omega in omega_grid:
        try:
            if not omega > 0:
                raise DomainError(f"omega must be positive, got {omega}")
            try:
                sol = solve_two_qubit_point(omega, omega0, omega1, J, seed=current)
            except (ConvergenceError, DomainError):
                if current is None:
                    raise
                sol = solve_two_qubit_point(omega, omega0, omega1, J)
        except (ConvergenceError, DomainError, ConstraintViolation) as exc:
            out.append(SweepPoint(float(omega), None, str(exc)))
            continue
        current = np.array([sol.unknowns[k] for k in TWO_QUBIT_UNKNOWNS])
        out.append(SweepPoint(float(omega), sol))
    return out


def physical_branch_limit(omega0: float, omega1: float, J: float, start: float,
                          seed: Sequence[float] | None = None, step: float = 0.05) -> float:
    """Loop-1 rate at which the continued branch reaches omega1' = 0.

    Walks the branch upward from ``start`` and then solves the three
    constraints for (omega, omega', omega0') with omega1' held at zero.
    """
    sol = solve_two_qubit_point(start, omega0, omega1, J, seed=seed)
    x = np.array([sol.unknowns[k] for k in TWO_QUBIT_UNKNOWNS])
    omega = start

    def fun_free(y, w):
        return np.array(two_qubit_residuals(w, omega0, omega1, *y, J))

    while True:
        trial_omega = omega + step
        try:
            y, _ = newton(lambda y: fun_free(y, trial_omega), x)
        except (ConvergenceError, DomainError):
            raise ConvergenceError(f"branch lost before omega1' reached zero (omega = {omega})")
        if y[2] <= 0:
            break
        omega, x = trial_omega, y

    def fun_edge(z):
        w, wp, w0p = z
        return np.array(two_qubit_residuals(w, omega0, omega1, wp, w0p, 0.0, J))

    z, _ = newton(fun_edge, [omega, x[0], x[1]])
    return float(z[0])


# --- numerical checks of plans ----------------------------------------------

def integrate_single_plan(plan: MultiLoopPlan, steps: int = DEFAULT_STEPS) -> list[PhaseTriple]:
    """Phases of loop 1 and loop 2, integrated back to back from loop 1's |psi_+>."""
    return propagate_sequence([plan.loop1, plan.loop2], cyclic_state(plan.loop1), steps)


def effective_loops(plan: MultiLoopPlan, delta: int) -> tuple[RotatingFieldSegment, RotatingFieldSegment]:
    """Target-qubit segments seen with the control in |delta>."""
    l1, l2 = plan.loop1, plan.loop2
    eff1 = RotatingFieldSegment(l1.omega0, effective_omega1(l1.omega1, plan.J, delta), l1.omega,
                                axis_tilt=l1.axis_tilt)
    eff2 = RotatingFieldSegment(l2.omega0, effective_omega1(l2.omega1, plan.J, delta), l2.omega,
                                reversed=True, axis_tilt=l2.axis_tilt)
    return eff1, eff2


def integrate_two_qubit_plan(plan: MultiLoopPlan, delta: int,
                             steps: int = DEFAULT_STEPS) -> list[PhaseTriple]:
    eff1, eff2 = effective_loops(plan, delta)
    return propagate_sequence([eff1, eff2], cyclic_state(eff1), steps)
