"""Command-line front end.

    cyclic-gates phases --omega0 1 --omega1 1 --omega 2
    cyclic-gates figure fig3b --out fig3b.csv
    cyclic-gates verify all
    cyclic-gates solve single --gamma 0.5 --pin-omega0 0.7

Options may also come from a plain-text file of ``key = value`` lines given
with ``--config``; flags on the command line win.  CSV files go to ``--out``,
else into ``--out-dir`` (or $CYCLIC_GATES_OUTDIR) under a default name, else to
stdout.  Exit codes: 0 success, 1 tolerance or solver failure, 2 bad input.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from .dynamics import (DEFAULT_STEPS, NonCyclicError, OpenPathError, RotatingFieldSegment,
                       cyclic_state, extract_phase_triple)
from .figures import (default_fig3_grid, fig1_rows, fig2_rows, fig3_sweep, fig3a_rows,
                      fig3b_rows, format_csv, parse_grid)
from .formulas import DomainError, TwoQubitParams, conditional_phases, effective_omega1, \
    single_qubit_phases
from .solvers import (SINGLE_UNKNOWNS, integrate_single_plan, integrate_two_qubit_plan,
                      solve_two_qubit_two_loop, sweep_single_qubit)
from .verify import SUITES, VerifyConfig, run_suite

OUTDIR_ENV = "CYCLIC_GATES_OUTDIR"
EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def read_config(path: str | os.PathLike) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("_", "-")] = value
    return out


def _positive(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _steps(text: str) -> int:
    value = int(text)
    if value < 100:
        raise argparse.ArgumentTypeError(f"need at least 100 steps, got {text}")
    return value


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--steps", type=_steps, default=DEFAULT_STEPS,
                        help="RK4 steps per cycle (default %(default)s)")
    common.add_argument("--tol", type=_positive, default=1e-6,
                        help="tolerance for numeric checks (default %(default)s)")

    output = _Parser(add_help=False)
    output.add_argument("--out", help="CSV file to write")
    output.add_argument("--out-dir", help=f"directory for CSV files (default ${OUTDIR_ENV})")

    parser = _Parser(prog="cyclic-gates", description=__doc__.split("\n\n")[0])
    parser.add_argument("--config", help="file of 'key = value' option lines")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("phases", parents=[common], help="closed-form vs integrated phases")
    p.add_argument("--omega0", type=float, required=True)
    p.add_argument("--omega1", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--J", type=float, default=None, help="coupling; target sees omega1^delta")
    p.add_argument("--delta", type=int, choices=(0, 1), default=0)

    p = sub.add_parser("figure", parents=[output], help="write a figure dataset as CSV")
    p.add_argument("name", choices=("fig1", "fig2", "fig3a", "fig3b"))
    p.add_argument("--grid", help="abscissa grid start:stop:step")

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("suite", nargs="?", default="all", choices=sorted(SUITES) + ["all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--points", type=int, default=100, help="random grid size")

    p = sub.add_parser("solve", parents=[common, output], help="two-loop parameter solver")
    p.add_argument("kind", choices=("single", "twoqubit"))
    p.add_argument("--gamma", type=float, help="single: target geometric phase -Gamma pi")
    p.add_argument("--omega1", type=float, default=None)
    p.add_argument("--omega1p", type=float, default=1.0, help="single: loop-2 omega1'")
    p.add_argument("--pin", choices=SINGLE_UNKNOWNS, default="omega0",
                   help="single: unknown held fixed when --pin-grid is used")
    for name in SINGLE_UNKNOWNS:
        p.add_argument(f"--pin-{name}", type=float, dest=f"pin_{name}",
                       help=f"single: pin {name} at this value")
    p.add_argument("--pin-grid", help="single: pinned values start:stop:step")
    p.add_argument("--omega0", type=float, default=5.0, help="twoqubit: loop-1 omega0")
    p.add_argument("--J", type=float, default=1.0, help="twoqubit: coupling")
    p.add_argument("--omega-grid", help="twoqubit: loop-1 rates start:stop:step")
    return parser


def _merge_config(parser: argparse.ArgumentParser, argv: list[str]) -> list[str]:
    """Splice config-file options in front of the command-line ones."""
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return argv
    try:
        values = read_config(known.config)
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    commands = {"phases", "figure", "verify", "solve"}
    idx = next((i for i, a in enumerate(argv) if a in commands), None)
    if idx is None:
        return argv
    extra = []
    for key, value in values.items():
        extra += [f"--{key}", value]
    # a positional right after the command stays in place
    head = idx + 1
    if head < len(argv) and not argv[head].startswith("-"):
        head += 1
    return argv[:head] + extra + argv[head:]


def _emit(text: str, args, default_name: str, stdout) -> None:
    target = args.out
    if target is None:
        outdir = args.out_dir or os.environ.get(OUTDIR_ENV)
        if outdir:
            Path(outdir).mkdir(parents=True, exist_ok=True)
            target = str(Path(outdir) / default_name)
    if target is None:
        stdout.write(text)
        return
    with open(target, "w", newline="") as fh:
        fh.write(text)
    print(f"wrote {target}", file=sys.stderr)


def _fmt(x: float) -> str:
    return f"{x: .10f} ({x / math.pi: .8f} pi)"


def cmd_phases(args, stdout) -> int:
    if args.J is None:
        omega1 = args.omega1
        ref = single_qubit_phases(args.omega0, omega1, args.omega)
        label = ""
    else:
        params = TwoQubitParams(args.omega0, args.omega1, args.omega, args.J, args.delta)
        omega1 = effective_omega1(args.omega1, args.J, args.delta)
        ref = conditional_phases(params)
        label = f"  control |{args.delta}>, omega1^delta = {omega1:g}"
    seg = RotatingFieldSegment(args.omega0, omega1, args.omega)
    try:
        num = extract_phase_triple(seg, cyclic_state(seg), args.steps)
    except (NonCyclicError, OpenPathError) as exc:
        print(f"FAIL phases ({exc})", file=stdout)
        return EXIT_FAIL
    print(f"chi = {_fmt(seg.cyclic_chi)}{label}", file=stdout)
    print(f"{'':10s}{'closed form':>34s}{'integrated':>34s}{'|diff|':>11s}", file=stdout)
    worst = 0.0
    for name, a, b in zip(("gamma_g", "gamma_d", "gamma"), (ref.geometric, ref.dynamic, ref.total),
                          (num.geometric, num.dynamic, num.total)):
        diff = abs(a - b)
        worst = max(worst, diff)
        print(f"{name:10s}{_fmt(a):>34s}{_fmt(b):>34s}{diff:11.2e}", file=stdout)
    ok = worst < args.tol
    print(f"{'PASS' if ok else 'FAIL'} phases (max |diff| {worst:.2e}, tol {args.tol:.1e})",
          file=stdout)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_figure(args, stdout) -> int:
    grid = parse_grid(args.grid) if args.grid else None
    failed = 0
    if args.name == "fig1":
        header, rows = fig1_rows() if grid is None else fig1_rows(grid)
    elif args.name == "fig2":
        header, rows = fig2_rows() if grid is None else fig2_rows(grid)
    else:
        points = fig3_sweep(grid)
        failed = sum(not p.ok for p in points)
        header, rows = (fig3a_rows if args.name == "fig3a" else fig3b_rows)(points)
    _emit(format_csv(header, rows), args, f"{args.name}.csv", stdout)
    if failed:
        print(f"{failed} of {len(rows)} grid points failed", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_verify(args, stdout) -> int:
    cfg = VerifyConfig(steps=args.steps, tol=args.tol, seed=args.seed, points=args.points)
    reports = run_suite(args.suite, cfg)
    for rep in reports:
        print(f"{rep.name}:", file=stdout)
        for check in rep.checks:
            print(check.line(), file=stdout)
    for rep in reports:
        print(rep.summary(), file=stdout)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _solve_single(args):
    if args.gamma is None:
        raise UsageError("solve single needs --gamma")
    pins = [(n, getattr(args, f"pin_{n}")) for n in SINGLE_UNKNOWNS
            if getattr(args, f"pin_{n}") is not None]
    if len(pins) > 1 or (pins and args.pin_grid):
        raise UsageError("give one of --pin-omega, --pin-omega0, --pin-omega0p or --pin-grid")
    if pins:
        pin, values = pins[0][0], [pins[0][1]]
    elif args.pin_grid:
        pin, values = args.pin, parse_grid(args.pin_grid)
    else:
        pin, values = "omega0", [0.7]
    omega1 = 1.0 if args.omega1 is None else args.omega1
    points = sweep_single_qubit(args.gamma, values, omega1, args.omega1p, pin)
    header = ["pinned", "omega", "omega0", "omega0_prime", "residual_max", "Gamma",
              "gamma_d_integrated", "gamma_g_integrated_over_pi", "status"]
    rows = []
    for p in points:
        if not p.ok:
            rows.append([p.value] + [math.nan] * 7 + ["failed"])
            continue
        s = p.solution
        loop1, loop2 = integrate_single_plan(s.plan, args.steps)
        total = loop1 + loop2
        status = "ok" if abs(total.dynamic) < args.tol else "dynamic-phase"
        u = s.unknowns
        rows.append([p.value, u["omega"], u["omega0"], u["omega0p"], s.max_residual,
                     -s.gamma_geometric / math.pi, total.dynamic, total.geometric / math.pi,
                     status])
    return header, rows, "solve_single.csv"


def _solve_twoqubit(args):
    omega1 = 5.0 if args.omega1 is None else args.omega1
    if args.omega_grid:
        grid = parse_grid(args.omega_grid)
    else:
        grid = default_fig3_grid(omega0=args.omega0, omega1=omega1, J=args.J)
    points = solve_two_qubit_two_loop(args.omega0, omega1, args.J, grid)
    header = ["omega", "omega_prime", "omega0_prime", "omega1_prime", "eta", "residual_max",
              "Gamma0", "Gamma1", "gamma_d0_integrated", "gamma_d1_integrated", "status"]
    rows = []
    for p in points:
        if not p.ok:
            rows.append([p.value] + [math.nan] * 9 + ["failed"])
            continue
        s = p.solution
        dyn = []
        for d in (0, 1):
            loop1, loop2 = integrate_two_qubit_plan(s.plan, d, args.steps)
            dyn.append(loop1.dynamic + loop2.dynamic)
        status = "ok" if max(abs(x) for x in dyn) < args.tol else "dynamic-phase"
        u = s.unknowns
        g0, g1 = s.gamma_geometric
        rows.append([p.value, u["omegap"], u["omega0p"], u["omega1p"], s.plan.eta,
                     s.max_residual, -g0 / math.pi, -g1 / math.pi, dyn[0], dyn[1], status])
    return header, rows, "solve_twoqubit.csv"


def cmd_solve(args, stdout) -> int:
    solver = _solve_single if args.kind == "single" else _solve_twoqubit
    header, rows, name = solver(args)
    _emit(format_csv(header, rows), args, name, stdout)
    good = sum(r[-1] == "ok" for r in rows)
    print(f"{good} of {len(rows)} rows solved", file=sys.stderr)
    return EXIT_OK if good else EXIT_FAIL


COMMANDS = {"phases": cmd_phases, "figure": cmd_figure, "verify": cmd_verify,
            "solve": cmd_solve}


def main(argv: list[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_merge_config(parser, argv))
        return COMMANDS[args.command](args, stdout)
    except (UsageError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
