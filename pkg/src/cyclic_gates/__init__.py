"""Phases of spin-1/2 qubits in rotating fields and the gates they make.

Modules
-------
dynamics  : spinor and Bloch propagation, numerical phase extraction
formulas  : closed-form one-cycle phases and dark-state conditions
gates     : gate matrices built from (chi, gamma)
solvers   : two-loop parameter design by damped Newton and continuation
figures   : figure datasets as CSV
verify    : invariant suites behind ``cyclic-gates verify``
"""

from .dynamics import (BlochPath, NonCyclicError, OpenPathError, PhaseTriple,
                       RotatingFieldSegment, SpinorState, berry_solid_angle, check_cyclicity,
                       cyclic_state, evolution_matrix, extract_phase_triple,
                       propagate_bloch, propagate_sequence, propagate_spinor,
                       propagate_two_qubit_full, solid_angle_of_path, target_phases_from_full)
from .formulas import (CyclicStateSpec, DomainError, TwoQubitParams, conditional_phases,
                       cyclic_angle_chi, dark_state_condition_two_qubit,
                       dark_state_frequency_single, reduce_phase, reversed_loop_phases,
                       single_qubit_phases)
from .gates import (build_controlled_gate, build_single_qubit_gate, build_two_qubit_diag,
                    compose_cnot, gate_adjoint, gates_equal, noncommutable,
                    remove_target_phase, rotate_field_axis)
from .solvers import (ConstraintViolation, ConvergenceError, MultiLoopPlan, SolverSolution,
                      eta_angle, single_qubit_residuals, solve_single_qubit_two_loop,
                      solve_two_qubit_two_loop, two_qubit_residuals)

__all__ = [
    "BlochPath", "NonCyclicError", "OpenPathError", "PhaseTriple", "RotatingFieldSegment",
    "SpinorState", "berry_solid_angle", "check_cyclicity", "cyclic_state", "evolution_matrix",
    "extract_phase_triple", "propagate_bloch", "propagate_sequence", "propagate_spinor",
    "propagate_two_qubit_full", "solid_angle_of_path", "target_phases_from_full",
    "CyclicStateSpec", "DomainError", "TwoQubitParams", "conditional_phases",
    "cyclic_angle_chi", "dark_state_condition_two_qubit", "dark_state_frequency_single",
    "reduce_phase", "reversed_loop_phases", "single_qubit_phases", "build_controlled_gate",
    "build_single_qubit_gate", "build_two_qubit_diag", "compose_cnot", "gate_adjoint",
    "gates_equal", "noncommutable", "remove_target_phase", "rotate_field_axis",
    "ConstraintViolation", "ConvergenceError", "MultiLoopPlan", "SolverSolution", "eta_angle",
    "single_qubit_residuals", "solve_single_qubit_two_loop", "solve_two_qubit_two_loop",
    "two_qubit_residuals",
]

__version__ = "0.1.0"
