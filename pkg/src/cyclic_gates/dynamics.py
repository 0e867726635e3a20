"""Spin-1/2 propagation under rotating fields and phase extraction.

Units have hbar = 1 and every field is folded into angular frequencies, so a
segment with parameters (omega0, omega1, omega) has the Hamiltonian

    H(t) = 1/2 [omega0 cos(wt) sx + omega0 sin(wt) sy + omega1 sz]

optionally sign-reversed and tilted about the y axis.  Writing
H = 1/2 h(t).sigma, the Bloch vector obeys dn/dt = h(t) x n.

Everything here is computed numerically (fixed-step RK4 plus quadrature) and
serves as the oracle for the closed forms in :mod:`cyclic_gates.formulas`.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np
from scipy.integrate import simpson

TWO_PI = 2.0 * np.pi

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY2 = np.eye(2, dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

DEFAULT_STEPS = 4096
MIN_STEPS = 100
NORM_TOL = 1e-12
CYCLIC_TOL = 1e-6


class NonCyclicError(ValueError):
    """Raised when a state does not return to itself up to a phase."""


class OpenPathError(ValueError):
    """Raised when a Bloch path is not closed."""


@dataclass(frozen=True)
class RotatingFieldSegment:
    """One loop of the rotating drive.

    ``reversed`` flips the whole field, h -> -h.  ``axis_tilt`` is an active
    rotation R_y(axis_tilt) of the field, which moves the polar angle of the
    cyclic pair from chi to chi + axis_tilt.  ``duration`` defaults to one
    field period 2 pi / omega.
    """

    omega0: float
    omega1: float
    omega: float
    reversed: bool = False
    axis_tilt: float = 0.0
    duration: float | None = None

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        if self.omega0 < 0:
            raise ValueError(f"omega0 must be non-negative, got {self.omega0}")
        if self.duration is not None and not self.duration > 0:
            raise ValueError(f"duration must be positive, got {self.duration}")

    @property
    def period(self) -> float:
        return TWO_PI / self.omega if self.duration is None else self.duration

    @property
    def cyclic_chi(self) -> float:
        """Polar angle of the aligned cyclic state, tilt included."""
        if self.reversed:
            return np.arctan2(self.omega0, self.omega1 + self.omega) + self.axis_tilt
        return np.arctan2(self.omega0, self.omega1 - self.omega) + self.axis_tilt

    def field(self, t) -> np.ndarray:
        """Field vector h(t) in frequency units, shape ``t.shape + (3,)``."""
        t = np.asarray(t, dtype=float)
        wt = self.omega * t
        h = np.stack(
            [self.omega0 * np.cos(wt), self.omega0 * np.sin(wt),
             np.full_like(wt, self.omega1)],
            axis=-1,
        )
        if self.reversed:
            h = -h
        if self.axis_tilt:
            h = h @ rotation_y(self.axis_tilt).T
        return h

    def field_rate(self, t) -> np.ndarray:
        """Time derivative dh/dt."""
        t = np.asarray(t, dtype=float)
        wt = self.omega * t
        w = self.omega * self.omega0
        dh = np.stack([-w * np.sin(wt), w * np.cos(wt), np.zeros_like(wt)], axis=-1)
        if self.reversed:
            dh = -dh
        if self.axis_tilt:
            dh = dh @ rotation_y(self.axis_tilt).T
        return dh

    def hamiltonian(self, t) -> np.ndarray:
        """H(t) = h(t).sigma / 2, shape ``t.shape + (2, 2)``."""
        h = self.field(t)
        return 0.5 * np.einsum("...k,kij->...ij", h, PAULI)


@dataclass(frozen=True)
class SpinorState:
    """Normalised amplitude pair on |0>, |1>."""

    amp0: complex
    amp1: complex

    def __post_init__(self):
        norm = abs(self.amp0) ** 2 + abs(self.amp1) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"spinor is not normalised (|psi|^2 = {norm!r})")

    @classmethod
    def from_angles(cls, theta: float, phi: float = 0.0) -> "SpinorState":
        return cls(np.exp(-0.5j * phi) * np.cos(theta / 2),
                   np.exp(0.5j * phi) * np.sin(theta / 2))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=complex)

    @property
    def bloch(self) -> np.ndarray:
        return bloch_vector(self.vector)


@dataclass(frozen=True)
class BlochPath:
    """Sampled trajectory on the unit sphere.

    ``velocity`` holds dn/dt at the samples when the path comes from an
    equation of motion; it lets the solid angle use Simpson quadrature in
    time instead of a lower-order difference rule.  ``frame_tilt`` is the
    y-rotation of the reference frame in which polar angles are measured.
    """

    times: np.ndarray
    n: np.ndarray
    velocity: np.ndarray | None = None
    frame_tilt: float = 0.0

    def __post_init__(self):
        norms = np.linalg.norm(self.n, axis=-1)
        if np.max(np.abs(norms - 1.0)) > 1e-9:
            raise ValueError("Bloch path samples are not unit vectors")

    def _local(self):
        if not self.frame_tilt:
            return self.n, self.velocity
        back = rotation_y(-self.frame_tilt)
        v = None if self.velocity is None else self.velocity @ back.T
        return self.n @ back.T, v

    @property
    def theta(self) -> np.ndarray:
        n, _ = self._local()
        return np.arccos(np.clip(n[:, 2], -1.0, 1.0))

    @property
    def phi(self) -> np.ndarray:
        """Unwrapped azimuth, continuous along the path."""
        n, _ = self._local()
        return np.unwrap(np.arctan2(n[:, 1], n[:, 0]))

    def closure_defect(self) -> float:
        return float(np.linalg.norm(self.n[-1] - self.n[0]))


class PhaseTriple(NamedTuple):
    """Total, dynamic and geometric phase in radians, not reduced mod 2 pi."""

    total: float
    dynamic: float
    geometric: float

    def __neg__(self):
        return PhaseTriple(-self.total, -self.dynamic, -self.geometric)

    def __add__(self, other):
        return PhaseTriple(*(a + b for a, b in zip(self, other)))

    def over_pi(self) -> "PhaseTriple":
        return PhaseTriple(*(x / np.pi for x in self))


class Trajectory(NamedTuple):
    times: np.ndarray
    states: np.ndarray


def rotation_y(angle: float) -> np.ndarray:
    """SO(3) rotation by ``angle`` about y (z is carried towards +x)."""
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def bloch_vector(psi) -> np.ndarray:
    """n = <psi|sigma|psi> for one spinor or a stack of spinors (..., 2)."""
    psi = np.asarray(psi)
    a, b = psi[..., 0], psi[..., 1]
    cross = np.conj(a) * b
    return np.stack([2 * cross.real, 2 * cross.imag,
                     np.abs(a) ** 2 - np.abs(b) ** 2], axis=-1)


def cyclic_state(segment: RotatingFieldSegment, sign: int = +1) -> SpinorState:
    """The cyclic pair member |psi_+> (sign=+1) or |psi_-> (sign=-1)."""
    chi = segment.cyclic_chi
    c, s = np.cos(chi / 2), np.sin(chi / 2)
    if sign > 0:
        return SpinorState(complex(c), complex(s))
    return SpinorState(complex(-s), complex(c))


def _as_spinor(initial) -> np.ndarray:
    if isinstance(initial, SpinorState):
        return initial.vector
    psi = np.asarray(initial, dtype=complex)
    norm = np.vdot(psi, psi).real
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"initial state is not normalised (|psi|^2 = {norm!r})")
    return psi


def _check_steps(steps: int):
    if int(steps) != steps or steps < MIN_STEPS:
        raise ValueError(f"steps must be an integer >= {MIN_STEPS}, got {steps}")


def rk4_linear(generator: Callable[[np.ndarray], np.ndarray], y0: np.ndarray,
               t_end: float, steps: int, project: bool = True) -> Trajectory:
    """Fixed-step classical RK4 for the linear system dy/dt = A(t) y.

    ``generator`` maps an array of times to the stack of matrices A(t).  For a
    linear right-hand side each RK4 step is the matrix polynomial below, so the
    step matrices are built in one vectorised pass and then applied in order.

    With ``project`` (for anti-Hermitian or antisymmetric A) each step matrix
    is replaced by its polar factor, the nearest unitary.  The step error stays
    O(h^5) but the norm no longer drifts.
    """
    h = t_end / steps
    t = np.arange(steps) * h
    a1 = generator(t)
    a2 = generator(t + 0.5 * h)
    a4 = generator(t + h)
    eye = np.eye(a1.shape[-1], dtype=a1.dtype)
    k1 = a1
    k2 = a2 @ (eye + 0.5 * h * k1)
    k3 = a2 @ (eye + 0.5 * h * k2)
    k4 = a4 @ (eye + h * k3)
    step = eye + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    if project:
        u, _, vh = np.linalg.svd(step)
        step = u @ vh

    y = np.empty((steps + 1,) + y0.shape, dtype=np.result_type(step, y0))
    y[0] = y0
    cur = y0
    for k in range(steps):
        cur = step[k] @ cur
        y[k + 1] = cur
    return Trajectory(np.linspace(0.0, t_end, steps + 1), y)


def propagate_spinor(segment: RotatingFieldSegment, initial,
                     steps: int = DEFAULT_STEPS) -> Trajectory:
    """Integrate i d|psi>/dt = H(t)|psi> over one segment.

    Returns ``steps + 1`` uniformly spaced samples on [0, duration].
    """
    _check_steps(steps)
    psi0 = _as_spinor(initial)
    return rk4_linear(lambda t: -1j * segment.hamiltonian(t), psi0,
                      segment.period, steps)


def evolution_matrix(segment: RotatingFieldSegment, steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Numerical U(T) of one segment, columns being the evolved |0> and |1>."""
    _check_steps(steps)
    traj = rk4_linear(lambda t: -1j * segment.hamiltonian(t), IDENTITY2.copy(),
                      segment.period, steps)
    return traj.states[-1]


def _cross_matrix(v: np.ndarray) -> np.ndarray:
    """[v]_x such that [v]_x @ n = v x n, vectorised over leading axes."""
    z = np.zeros(v.shape[:-1])
    x, y, w = v[..., 0], v[..., 1], v[..., 2]
    return np.stack([np.stack([z, -w, y], -1),
                     np.stack([w, z, -x], -1),
                     np.stack([-y, x, z], -1)], -2)


def propagate_bloch(segment: RotatingFieldSegment, initial,
                    steps: int = DEFAULT_STEPS) -> BlochPath:
    """Integrate dn/dt = h(t) x n and return the sampled path."""
    _check_steps(steps)
    n0 = np.asarray(initial, dtype=float)
    if n0.shape != (3,) or abs(np.linalg.norm(n0) - 1.0) > 1e-12:
        raise ValueError("initial Bloch vector must be a unit 3-vector")
    times, n = rk4_linear(lambda t: _cross_matrix(segment.field(t)), n0,
                          segment.period, steps)
    velocity = np.cross(segment.field(times), n)
    return BlochPath(times, n, velocity, frame_tilt=segment.axis_tilt)


def reference_tilt(segment: RotatingFieldSegment, psi0) -> float:
    """Frame in which the winding-resolved geometric phase is measured.

    The field's own tilt frame for the |psi_+> side of the cyclic pair, and
    that frame turned by pi for the |psi_-> side, so gamma_- = -gamma_+ holds
    on the nose rather than only mod 2 pi.
    """
    plus = cyclic_state(segment).vector
    if abs(np.vdot(plus, psi0)) ** 2 < 0.5 * np.vdot(psi0, psi0).real:
        return segment.axis_tilt + np.pi
    return segment.axis_tilt


def _spinor_path(segment: RotatingFieldSegment, traj: Trajectory) -> BlochPath:
    n = bloch_vector(traj.states)
    n = n / np.linalg.norm(n, axis=-1, keepdims=True)
    velocity = np.cross(segment.field(traj.times), n)
    return BlochPath(traj.times, n, velocity,
                     frame_tilt=reference_tilt(segment, traj.states[0]))


def overlap_defect(traj: Trajectory) -> tuple[float, complex]:
    """1 - |<psi(0)|psi(T)>| and the overlap itself."""
    psi0, psi1 = traj.states[0], traj.states[-1]
    ov = np.vdot(psi0, psi1) / np.sqrt(np.vdot(psi0, psi0).real * np.vdot(psi1, psi1).real)
    return float(1.0 - abs(ov)), complex(ov)


def overlap_phase(traj: Trajectory) -> float:
    """arg <psi(0)|psi(T)>, the total phase reduced to (-pi, pi]."""
    return float(np.angle(overlap_defect(traj)[1]))


def check_cyclicity(segment: RotatingFieldSegment, initial,
                    steps: int = DEFAULT_STEPS, tol: float = CYCLIC_TOL) -> tuple[bool, float]:
    """Whether ``initial`` returns to itself up to a phase after one segment."""
    defect, _ = overlap_defect(propagate_spinor(segment, initial, steps))
    return defect < tol, defect


def solid_angle_of_path(path: BlochPath, closure_tol: float = 1e-6) -> float:
    """Geometric phase -1/2 \\oint (1 - cos theta) dphi of a closed path.

    The azimuth is unwrapped, so several windings are counted separately.
    Polar angles are measured in the path's reference frame.
    """
    if path.closure_defect() > closure_tol:
        raise OpenPathError(f"path is not closed (defect {path.closure_defect():.3g})")
    n, v = path._local()
    one_minus_cos = 1.0 - n[:, 2]
    if v is None:
        phi = np.unwrap(np.arctan2(n[:, 1], n[:, 0]))
        return float(-0.5 * np.sum(0.5 * (one_minus_cos[1:] + one_minus_cos[:-1]) * np.diff(phi)))
    rho2 = n[:, 0] ** 2 + n[:, 1] ** 2
    # At the poles (1 - cos theta) dphi -> 0 (north) or needs a frame change
    # (south); only the north pole can occur in the field-aligned frame.
    with np.errstate(divide="ignore", invalid="ignore"):
        phidot = np.where(rho2 > 1e-300, (n[:, 0] * v[:, 1] - n[:, 1] * v[:, 0]) / rho2, 0.0)
    integrand = one_minus_cos * phidot
    return float(-0.5 * _simpson(integrand, path.times))


def _simpson(y: np.ndarray, t: np.ndarray) -> float:
    return float(simpson(y, x=t))


def extract_phase_triple(segment: RotatingFieldSegment, initial,
                         steps: int = DEFAULT_STEPS, tol: float = CYCLIC_TOL) -> PhaseTriple:
    """Numerical (total, dynamic, geometric) phases of one cyclic evolution.

    Dynamic phase is -\\int <psi|H|psi> dt by Simpson quadrature; geometric phase
    is the solid-angle integral over the unwrapped Bloch path.  Their sum is the
    winding-resolved total, which is checked against arg<psi(0)|psi(T)>.
    """
    traj = propagate_spinor(segment, initial, steps)
    return _phases_from_trajectory(segment, traj, tol)


def _phases_from_trajectory(segment: RotatingFieldSegment, traj: Trajectory,
                            tol: float = CYCLIC_TOL) -> PhaseTriple:
    defect, _ = overlap_defect(traj)
    if defect >= tol:
        raise NonCyclicError(f"state is not cyclic for this segment (defect {defect:.3g})")
    path = _spinor_path(segment, traj)
    energy = 0.5 * np.einsum("tk,tk->t", segment.field(traj.times), path.n)
    dynamic = -_simpson(energy, traj.times)
    # 1 - |overlap| loses digits below ~1e-16, hence the floor
    geometric = solid_angle_of_path(path, closure_tol=4 * np.sqrt(max(defect, 1e-15)))
    return PhaseTriple(dynamic + geometric, dynamic, geometric)


def instantaneous_energy(segment: RotatingFieldSegment, initial,
                         steps: int = DEFAULT_STEPS) -> tuple[np.ndarray, np.ndarray]:
    """Sample times and <psi(t)|H(t)|psi(t)> along the evolution."""
    traj = propagate_spinor(segment, initial, steps)
    n = bloch_vector(traj.states)
    return traj.times, 0.5 * np.einsum("tk,tk->t", segment.field(traj.times), n)


def berry_solid_angle(segment: RotatingFieldSegment, steps: int = DEFAULT_STEPS) -> float:
    """Solid angle swept by the field direction over one cycle.

    Quadrature of (h_x dh_y - h_y dh_x) / (|h| (h_z + |h|)) in the field's
    own tilt frame; for the untilted rotating field this is
    2 pi (1 - omega1 / sqrt(omega0^2 + omega1^2)).
    """
    if segment.omega0 == 0 and segment.omega1 == 0:
        raise ValueError("field vanishes identically (degeneracy h = 0)")
    t = np.linspace(0.0, segment.period, steps + 1)
    back = rotation_y(-segment.axis_tilt)
    h = segment.field(t) @ back.T
    dh = segment.field_rate(t) @ back.T
    mag = np.linalg.norm(h, axis=-1)
    integrand = (h[:, 0] * dh[:, 1] - h[:, 1] * dh[:, 0]) / (mag * (h[:, 2] + mag))
    return _simpson(integrand, t)


def propagate_sequence(segments: Sequence[RotatingFieldSegment], initial,
                       steps: int = DEFAULT_STEPS, tol: float = CYCLIC_TOL) -> list[PhaseTriple]:
    """Run segments back to back, each starting from the previous final state.

    Every segment must be cyclic for the state it receives; returns the phase
    triple of each segment.
    """
    psi = _as_spinor(initial)
    out = []
    for seg in segments:
        traj = propagate_spinor(seg, psi, steps)
        out.append(_phases_from_trajectory(seg, traj, tol))
        psi = traj.states[-1] / np.linalg.norm(traj.states[-1])
    return out


# --- two qubits ---------------------------------------------------------------

SZ_SZ = np.kron(SIGMA_Z, SIGMA_Z)


def _kron_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product over the last two axes, broadcasting the rest."""
    a, b = np.broadcast_arrays(a[..., :, None, :, None], b[..., None, :, None, :])
    return (a * b).reshape(a.shape[:-4] + (4, 4))


def two_qubit_hamiltonian(control: RotatingFieldSegment | None,
                          target: RotatingFieldSegment, coupling: float, t) -> np.ndarray:
    """H_c x I + I x H_t + (coupling / 2) sz x sz; control is the first factor.

    ``control=None`` leaves the control qubit without any field.
    """
    t = np.asarray(t, dtype=float)
    h = _kron_batch(IDENTITY2, target.hamiltonian(t))
    if control is not None:
        h = h + _kron_batch(control.hamiltonian(t), IDENTITY2)
    return h + 0.5 * coupling * SZ_SZ


def propagate_two_qubit_full(control: RotatingFieldSegment | None,
                             target: RotatingFieldSegment, coupling: float, initial,
                             steps: int = DEFAULT_STEPS) -> Trajectory:
    """Full 4-dimensional propagation over the target segment's duration.

    Basis order is |00>, |01>, |10>, |11> with the control qubit first.
    """
    _check_steps(steps)
    psi0 = np.asarray(initial, dtype=complex)
    if psi0.shape != (4,) or abs(np.vdot(psi0, psi0).real - 1.0) > NORM_TOL:
        raise ValueError("initial two-qubit state must be a normalised 4-vector")
    return rk4_linear(lambda t: -1j * two_qubit_hamiltonian(control, target, coupling, t),
                      psi0, target.period, steps)


def target_phases_from_full(control: RotatingFieldSegment | None,
                            target: RotatingFieldSegment, coupling: float,
                            control_state, target_state,
                            steps: int = DEFAULT_STEPS, closure_tol: float = 1e-2) -> PhaseTriple:
    """Target-qubit phases read off a full two-qubit run.

    The target's Bloch vector is the partial expectation <I x sigma>, its
    velocity comes from <i[H, I x sigma]>, and its energy is the expectation of
    the target and coupling terms.  The total is dynamic + geometric.  With a
    driven control the reduced path only closes approximately, hence the loose
    default ``closure_tol``.
    """
    c = _as_spinor(control_state)
    s = _as_spinor(target_state)
    traj = propagate_two_qubit_full(control, target, coupling, np.kron(c, s), steps)
    psi = traj.states
    ops = np.stack([np.kron(IDENTITY2, p) for p in PAULI])
    n = np.einsum("ti,kij,tj->tk", psi.conj(), ops, psi).real
    hfull = two_qubit_hamiltonian(control, target, coupling, traj.times)
    comm = 1j * (np.einsum("tij,kjl->tkil", hfull, ops) - np.einsum("kij,tjl->tkil", ops, hfull))
    ndot = np.einsum("ti,tkij,tj->tk", psi.conj(), comm, psi).real
    size = np.linalg.norm(n, axis=-1, keepdims=True)
    m = n / size
    mdot = (ndot - m * np.sum(m * ndot, axis=-1, keepdims=True)) / size
    path = BlochPath(traj.times, m, mdot, frame_tilt=target.axis_tilt)
    htarget = hfull
    if control is not None:
        htarget = hfull - _kron_batch(control.hamiltonian(traj.times), IDENTITY2)
    energy = np.einsum("ti,tij,tj->t", psi.conj(), htarget, psi).real
    dynamic = -_simpson(energy, traj.times)
    geometric = solid_angle_of_path(path, closure_tol=closure_tol)
    return PhaseTriple(dynamic + geometric, dynamic, geometric)


def with_tilt(segment: RotatingFieldSegment, tilt: float) -> RotatingFieldSegment:
    return replace(segment, axis_tilt=tilt)
