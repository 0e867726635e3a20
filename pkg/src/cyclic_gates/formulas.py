"""Closed-form one-cycle phases for the rotating field.

All phases are winding-resolved (e.g. -1.7071 pi is reported as such) and
belong to the aligned member |psi_+> of the cyclic pair; the partner picks up
the negatives.  Use :func:`reduce_phase` for the mod-2 pi value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import PhaseTriple, SpinorState


class DomainError(ValueError):
    """Parameters outside the region where a formula or condition applies."""


@dataclass(frozen=True)
class CyclicStateSpec:
    """Polar angle chi in [0, pi] of the cyclic pair."""

    chi: float

    @property
    def plus(self) -> SpinorState:
        return SpinorState(complex(math.cos(self.chi / 2)), complex(math.sin(self.chi / 2)))

    @property
    def minus(self) -> SpinorState:
        return SpinorState(complex(-math.sin(self.chi / 2)), complex(math.cos(self.chi / 2)))


@dataclass(frozen=True)
class TwoQubitParams:
    """Target-qubit drive plus coupling, with the control qubit in |delta>."""

    omega0: float
    omega1: float
    omega: float
    J: float
    delta: int

    def __post_init__(self):
        if self.delta not in (0, 1):
            raise ValueError(f"delta must be 0 or 1, got {self.delta}")

    @property
    def omega1_eff(self) -> float:
        return effective_omega1(self.omega1, self.J, self.delta)


def effective_omega1(omega1: float, J: float, delta: int) -> float:
    """Longitudinal frequency seen by the target: omega1 + (2 delta - 1) J."""
    return omega1 + (2 * delta - 1) * J


def reduce_phase(x):
    """Phase reduced to (-pi, pi]."""
    return -((-np.asarray(x) + np.pi) % (2 * np.pi) - np.pi)


def cyclic_angle_chi(omega0: float, omega1: float, omega: float) -> CyclicStateSpec:
    """chi = atan2(omega0, omega1 - omega), the two-argument branch."""
    if omega0 == 0 and omega1 == omega:
        raise DomainError("omega0 = 0 and omega1 = omega: every state is cyclic, chi undefined")
    return CyclicStateSpec(math.atan2(omega0, omega1 - omega))


def _rabi(omega0, detuning):
    big = math.hypot(omega0, detuning)
    if big == 0:
        raise DomainError("generalised Rabi frequency vanishes")
    return big


def single_qubit_phases(omega0: float, omega1: float, omega: float) -> PhaseTriple:
    """One-cycle phases of |psi_+> for H = (omega0 cos wt sx + omega0 sin wt sy + omega1 sz)/2."""
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    detuning = omega1 - omega
    big = _rabi(omega0, detuning)
    geometric = -math.pi * (1.0 - detuning / big)
    dynamic = -math.pi * (omega0 ** 2 + omega1 * detuning) / (omega * big)
    total = -math.pi * (1.0 + big / omega)
    return PhaseTriple(total, dynamic, geometric)


def reversed_loop_phases(omega0: float, omega1: float, omega: float) -> PhaseTriple:
    """Phases of the aligned cyclic state under the sign-reversed field.

    The state sits at chi' = atan2(omega0, omega1 + omega) and
    Omega' = sqrt(omega0^2 + (omega1 + omega)^2).
    """
    if not omega > 0:
        raise DomainError(f"omega must be positive, got {omega}")
    shifted = omega1 + omega
    big = _rabi(omega0, shifted)
    geometric = -math.pi * (1.0 - shifted / big)
    dynamic = math.pi * (omega0 ** 2 + omega1 * shifted) / (omega * big)
    total = -math.pi * (1.0 - big / omega)
    return PhaseTriple(total, dynamic, geometric)


def conditional_phases(params: TwoQubitParams) -> PhaseTriple:
    """Target phases with the control in |delta>; omega1 -> omega1^delta."""
    return single_qubit_phases(params.omega0, params.omega1_eff, params.omega)


def conditional_chi(params: TwoQubitParams) -> CyclicStateSpec:
    return cyclic_angle_chi(params.omega0, params.omega1_eff, params.omega)


def dark_state_frequency_single(omega0: float, omega1: float) -> float:
    """Rotation rate that zeroes the dynamic phase: (omega0^2 + omega1^2) / omega1."""
    if omega1 <= 0:
        raise DomainError("dark-state condition needs omega1 > 0")
    return (omega0 ** 2 + omega1 ** 2) / omega1


def dark_state_geometric_single(omega0: float, omega1: float) -> float:
    """gamma_g on the single-qubit dark-state manifold."""
    return -math.pi * (1.0 + omega0 / math.hypot(omega0, omega1))


def dark_state_condition_two_qubit(omega1: float, J: float) -> tuple[float, float]:
    """(omega, omega0) = (2 omega1, sqrt(omega1^2 - J^2)) making both delta dark.

    At omega1 == J the drive vanishes; the pair is returned but the delta = 1
    branch is degenerate.
    """
    if not J > 0:
        raise DomainError("coupling J must be positive")
    if omega1 < J:
        raise DomainError(f"omega1 = {omega1} < J = {J}: no real omega0")
    return 2.0 * omega1, math.sqrt(omega1 ** 2 - J ** 2)
