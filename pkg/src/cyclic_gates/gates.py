"""Gate unitaries built from cyclic-state data (chi, gamma).

Two-qubit matrices use the basis |00>, |01>, |10>, |11> with the control
qubit first.
"""

from __future__ import annotations

from dataclasses import replace

import numpy as np

from .dynamics import IDENTITY2, SIGMA_X, SIGMA_Y, RotatingFieldSegment, rotation_y

TWO_PI = 2.0 * np.pi


def build_single_qubit_gate(chi: float, gamma: float) -> np.ndarray:
    """U(chi, gamma) = cos(gamma) I + i sin(gamma) (cos(chi) sz + sin(chi) sx).

    |psi_+> = cos(chi/2)|0> + sin(chi/2)|1> picks up e^{i gamma} and its
    orthogonal partner e^{-i gamma}.
    """
    c2, s2 = np.cos(chi / 2) ** 2, np.sin(chi / 2) ** 2
    ep, em = np.exp(1j * gamma), np.exp(-1j * gamma)
    off = 1j * np.sin(chi) * np.sin(gamma)
    return np.array([[ep * c2 + em * s2, off],
                     [off, ep * s2 + em * c2]])


def gate_adjoint(chi: float, gamma: float) -> np.ndarray:
    """The inverse gate, realised by flipping the sign of the phase."""
    return build_single_qubit_gate(chi, -gamma)


def noncommutable(chi1: float, gamma1: float, chi2: float, gamma2: float,
                  atol: float = 1e-12) -> bool:
    """sin(gamma1) sin(gamma2) sin(chi2 - chi1) != 0, to within ``atol``."""
    return abs(np.sin(gamma1) * np.sin(gamma2) * np.sin(chi2 - chi1)) > atol


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a @ b - b @ a))


def _same_angle(a: float, b: float, atol: float) -> bool:
    d = (a - b) % TWO_PI
    return min(d, TWO_PI - d) <= atol


def build_two_qubit_diag(gamma0: float, chi0: float, gamma1: float, chi1: float) -> np.ndarray:
    """Block-diagonal controlled gate diag(U(chi0, gamma0), U(chi1, gamma1))."""
    out = np.zeros((4, 4), dtype=complex)
    out[:2, :2] = build_single_qubit_gate(chi0, gamma0)
    out[2:, 2:] = build_single_qubit_gate(chi1, gamma1)
    return out


def is_nontrivial_two_qubit(gamma0: float, chi0: float, gamma1: float, chi1: float,
                            atol: float = 1e-9) -> bool:
    """Whether the block-diagonal gate entangles: gamma or chi differs mod 2 pi."""
    return not (_same_angle(gamma0, gamma1, atol) and _same_angle(chi0, chi1, atol))


def remove_target_phase(gate: np.ndarray, gamma1: float) -> np.ndarray:
    """Strip the target-local factor e^{-i gamma1} from the control-1 block.

    Applied to diag(e^{i g0}, e^{-i g0}, e^{i g}, e^{-i g}) with g0 = 0 this
    leaves the controlled-phase diag(1, 1, 1, e^{-2 i g}).
    """
    out = np.array(gate, dtype=complex)
    out[2:, 2:] *= np.exp(-1j * gamma1)
    return out


def build_controlled_gate(gamma: float, chi: float) -> np.ndarray:
    """diag(I, U(chi, gamma)): the target idles when the control is |0>."""
    out = np.zeros((4, 4), dtype=complex)
    out[:2, :2] = IDENTITY2
    out[2:, 2:] = build_single_qubit_gate(chi, gamma)
    return out


def compose_cnot() -> np.ndarray:
    """[I x U(pi/4, pi/2)] U_diag(0, pi/2) [I x U(pi/4, pi/2)]^dagger."""
    local = np.kron(IDENTITY2, build_single_qubit_gate(np.pi / 4, np.pi / 2))
    core = build_two_qubit_diag(0.0, 0.0, np.pi / 2, 0.0)
    return local @ core @ local.conj().T


CNOT_REFERENCE = np.block([[IDENTITY2, np.zeros((2, 2))],
                           [np.zeros((2, 2)), 1j * SIGMA_X]])


def gates_equal(a: np.ndarray, b: np.ndarray, atol: float = 1e-12,
                up_to_global_phase: bool = False) -> bool:
    """Entrywise comparison, optionally after removing a global phase."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if up_to_global_phase:
        k = np.argmax(np.abs(b))
        if abs(b.flat[k]) == 0 or abs(a.flat[k]) == 0:
            return np.allclose(a, b, atol=atol, rtol=0)
        a = a * (b.flat[k] / a.flat[k]) / abs(b.flat[k] / a.flat[k])
    return bool(np.max(np.abs(a - b)) <= atol)


def is_unitary(u: np.ndarray, atol: float = 1e-10) -> bool:
    u = np.asarray(u)
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= atol)


def rotation_su2(angle: float) -> np.ndarray:
    """exp(-i angle sy / 2): moves the Bloch vector by ``angle`` about y."""
    return np.cos(angle / 2) * IDENTITY2 - 1j * np.sin(angle / 2) * SIGMA_Y


def rotation_so3(angle: float) -> np.ndarray:
    """exp(-i angle tau_2) with the spin-1 generator tau_2."""
    return rotation_y(angle)


def rotate_field_axis(segment: RotatingFieldSegment, new_chi: float) -> RotatingFieldSegment:
    """Tilt the field's symmetry axis so the cyclic pair sits at ``new_chi``.

    The rotation leaves all three phases unchanged; only the gate's chi moves.
    """
    base = segment.cyclic_chi - segment.axis_tilt
    return replace(segment, axis_tilt=new_chi - base)


def evolution_operator(chi: float, gamma_plus: float) -> np.ndarray:
    """U(T) assembled from the cyclic pair: |psi_+-> -> e^{+-i gamma}|psi_+->."""
    plus = np.array([np.cos(chi / 2), np.sin(chi / 2)])
    minus = np.array([-np.sin(chi / 2), np.cos(chi / 2)])
    return (np.exp(1j * gamma_plus) * np.outer(plus, plus)
            + np.exp(-1j * gamma_plus) * np.outer(minus, minus))

