"""Figure datasets: dark-state phases and the two-qubit two-loop sweep.

Each builder returns ``(header, rows)``; :func:`write_csv` stores them with
12 significant digits and LF line endings.
"""

from __future__ import annotations

import csv
import io
import math
from typing import Sequence

import numpy as np

from .formulas import (TwoQubitParams, conditional_phases, dark_state_condition_two_qubit,
                       dark_state_frequency_single, single_qubit_phases)
from .solvers import SweepPoint, physical_branch_limit, solve_two_qubit_two_loop

FIG3_OMEGA0 = 5.0
FIG3_OMEGA1 = 5.0
FIG3_J = 1.0
SEPARATION_TOL = 1e-3

FIG1_GRID = np.round(np.arange(0.05, 10.0001, 0.05), 10)
FIG2_GRID = np.round(np.arange(1.05, 10.0001, 0.05), 10)

Table = tuple[list[str], list[list]]


def parse_grid(text: str) -> np.ndarray:
    """'start:stop:step' with the stop included when the step lands on it."""
    try:
        start, stop, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise ValueError(f"grid must look like start:stop:step, got {text!r}") from exc
    if step <= 0 or stop < start:
        raise ValueError(f"empty or reversed grid {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return np.round(start + step * np.arange(count), 12)


def fig1_rows(ratios: Sequence[float] = FIG1_GRID) -> Table:
    """Dark-state gamma_g / pi against omega1 / omega0.

    The larger of the two frequencies is set to 1 so that both limits stay
    well conditioned.
    """
    rows = []
    for r in ratios:
        if not r > 0:
            raise ValueError(f"ratio must be positive, got {r}")
        omega0 = 1.0 / max(1.0, r)
        omega1 = r * omega0
        omega = dark_state_frequency_single(omega0, omega1)
        rows.append([r, single_qubit_phases(omega0, omega1, omega).geometric / math.pi])
    return ["ratio", "gamma_g_over_pi"], rows


def fig2_rows(ratios: Sequence[float] = FIG2_GRID, J: float = 1.0) -> Table:
    """Conditional gamma_g^delta / pi on the two-qubit dark-state manifold."""
    rows = []
    for r in ratios:
        omega1 = r * J
        omega, omega0 = dark_state_condition_two_qubit(omega1, J)
        g = [conditional_phases(TwoQubitParams(omega0, omega1, omega, J, d)).geometric
             for d in (0, 1)]
        rows.append([r, g[0] / math.pi, g[1] / math.pi])
    return ["ratio", "gamma0_over_pi", "gamma1_over_pi"], rows


def default_fig3_grid(points: int = 50, omega0: float = FIG3_OMEGA0,
                      omega1: float = FIG3_OMEGA1, J: float = FIG3_J) -> np.ndarray:
    """``points`` evenly spaced interior points of (0, omega_max)."""
    top = physical_branch_limit(omega0, omega1, J, start=0.5 * omega0)
    return top * np.arange(1, points + 1) / (points + 1)


def fig3_sweep(grid: Sequence[float] | None = None, omega0: float = FIG3_OMEGA0,
               omega1: float = FIG3_OMEGA1, J: float = FIG3_J) -> list[SweepPoint]:
    if grid is None:
        grid = default_fig3_grid(omega0=omega0, omega1=omega1, J=J)
    return solve_two_qubit_two_loop(omega0, omega1, J, grid)


def _status(p: SweepPoint) -> str:
    if not p.ok:
        return "failed"
    g0, g1 = p.solution.gamma_geometric
    d = abs((g0 - g1 + math.pi) % (2 * math.pi) - math.pi)
    return "ok" if d > SEPARATION_TOL else "trivial"


def fig3a_rows(points: Sequence[SweepPoint]) -> Table:
    rows = []
    for p in points:
        if p.ok:
            u = p.solution.unknowns
            rows.append([p.value, u["omegap"], u["omega0p"], u["omega1p"], _status(p)])
        else:
            rows.append([p.value, math.nan, math.nan, math.nan, "failed"])
    return ["omega", "omega_prime", "omega0_prime", "omega1_prime", "status"], rows


def fig3b_rows(points: Sequence[SweepPoint]) -> Table:
    rows = []
    for p in points:
        if p.ok:
            g0, g1 = p.solution.gamma_geometric
            rows.append([p.value, g0 / math.pi, g1 / math.pi, _status(p)])
        else:
            rows.append([p.value, math.nan, math.nan, "failed"])
    return ["omega", "gamma0_over_pi", "gamma1_over_pi", "status"], rows


def format_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["%.12g" % v if isinstance(v, (float, np.floating)) else v
                         for v in row])
    return buf.getvalue()


def write_csv(path, header: Sequence[str], rows: Sequence[Sequence]) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(header, rows))
