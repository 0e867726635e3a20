import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cyclic_gates.dynamics import (RotatingFieldSegment, check_cyclicity, cyclic_state,
                                   extract_phase_triple, instantaneous_energy)
from cyclic_gates.formulas import (CyclicStateSpec, DomainError, TwoQubitParams,
                                   conditional_chi, conditional_phases, cyclic_angle_chi,
                                   dark_state_condition_two_qubit, dark_state_frequency_single,
                                   dark_state_geometric_single, effective_omega1, reduce_phase,
                                   reversed_loop_phases, single_qubit_phases)

from oracles import exact_phases

pos = st.floats(0.1, 10.0)


# --- cyclic angle ----------------------------------------------------------------

def test_chi_special_values():
    assert cyclic_angle_chi(1.3, 2.0, 2.0).chi == pytest.approx(math.pi / 2)
    assert cyclic_angle_chi(0.0, 3.0, 1.0).chi == 0.0
    assert cyclic_angle_chi(0.0, 1.0, 3.0).chi == pytest.approx(math.pi)
    assert cyclic_angle_chi(1.0, 1.0, 2.0).chi == pytest.approx(0.75 * math.pi)


def test_chi_state_is_cyclic():
    pair = cyclic_angle_chi(1.0, 1.0, 2.0)
    ok, defect = check_cyclicity(RotatingFieldSegment(1, 1, 2), pair.plus)
    assert ok and defect < 1e-6


def test_chi_degenerate_input():
    with pytest.raises(DomainError):
        cyclic_angle_chi(0.0, 2.0, 2.0)


@given(pos, pos, pos)
def test_chi_in_open_interval_when_driven(w0, w1, w):
    chi = cyclic_angle_chi(w0, w1, w).chi
    assert 0 < chi < math.pi


def test_cyclic_pair_orthonormal():
    pair = CyclicStateSpec(1.1)
    assert abs(np.vdot(pair.plus.vector, pair.minus.vector)) < 1e-15


# --- single-qubit phases -------------------------------------------------------------

@pytest.mark.parametrize("args,expected", [
    ((3, 4, 6.25), (-1.6, 0.0, -1.6)),
    ((1, 2, 2), (-1.0, -0.5, -1.5)),
    ((0, 3, 1), (0.0, -3.0, -3.0)),
    ((1, 1, 2), (-(1 + 1 / math.sqrt(2)), 0.0, -(1 + 1 / math.sqrt(2)))),
])
def test_closed_form_examples(args, expected):
    got = single_qubit_phases(*args)
    assert got.geometric / math.pi == pytest.approx(expected[0], abs=1e-12)
    assert got.dynamic / math.pi == pytest.approx(expected[1], abs=1e-12)
    assert got.total / math.pi == pytest.approx(expected[2], abs=1e-12)


@given(pos, pos, pos)
def test_closed_form_matches_eigenvalue_oracle(w0, w1, w):
    total, dyn, geo, _ = exact_phases(w0, w1, w)
    got = single_qubit_phases(w0, w1, w)
    np.testing.assert_allclose(got, [total, dyn, geo], atol=1e-9 * (1 + abs(total)))


@given(pos, pos, pos)
def test_reversed_loop_matches_eigenvalue_oracle(w0, w1, w):
    total, dyn, geo, _ = exact_phases(w0, w1, w, reversed_=True)
    got = reversed_loop_phases(w0, w1, w)
    np.testing.assert_allclose(got, [total, dyn, geo], atol=1e-9 * (1 + abs(total)))


@given(pos, pos, pos)
def test_sum_identity(w0, w1, w):
    t = single_qubit_phases(w0, w1, w)
    assert abs(t.total - t.dynamic - t.geometric) < 1e-12
    r = reversed_loop_phases(w0, w1, w)
    assert abs(r.total - r.dynamic - r.geometric) < 1e-12


def test_domain_errors():
    with pytest.raises(DomainError):
        single_qubit_phases(1, 1, 0)
    with pytest.raises(DomainError):
        single_qubit_phases(1, 1, -1)
    with pytest.raises(DomainError):
        single_qubit_phases(0, 2, 2)


def test_closed_form_against_integration_spot():
    seg = RotatingFieldSegment(0.7, 2.2, 1.6)
    got = extract_phase_triple(seg, cyclic_state(seg))
    np.testing.assert_allclose(got, single_qubit_phases(0.7, 2.2, 1.6), atol=1e-6)


def test_reduce_phase_range():
    x = np.array([-1.7071 * math.pi, math.pi, -math.pi, 3 * math.pi, 0.0])
    r = reduce_phase(x)
    assert np.all((r > -math.pi) & (r <= math.pi))
    np.testing.assert_allclose(np.cos(r), np.cos(x), atol=1e-12)


# --- conditional phases -----------------------------------------------------------------

def test_effective_omega1():
    assert effective_omega1(2.0, 0.5, 0) == 1.5
    assert effective_omega1(2.0, 0.5, 1) == 2.5
    assert TwoQubitParams(1, 2, 3, 0.5, 1).omega1_eff == 2.5
    with pytest.raises(ValueError):
        TwoQubitParams(1, 2, 3, 0.5, 2)


@given(pos, pos, pos, st.integers(0, 1))
def test_conditional_reduces_without_coupling(w0, w1, w, d):
    assert conditional_phases(TwoQubitParams(w0, w1, w, 0.0, d)) == single_qubit_phases(w0, w1, w)


@given(pos, pos, pos, st.floats(0.1, 3.0), st.integers(0, 1))
def test_conditional_is_single_with_shifted_omega1(w0, w1, w, J, d):
    got = conditional_phases(TwoQubitParams(w0, w1, w, J, d))
    assert got == single_qubit_phases(w0, w1 + (2 * d - 1) * J, w)
    assert abs(got.total - got.dynamic - got.geometric) < 1e-12


def test_conditional_examples():
    w0 = math.sqrt(3)
    one = conditional_phases(TwoQubitParams(w0, 2.0, 4.0, 1.0, 1))
    zero = conditional_phases(TwoQubitParams(w0, 2.0, 4.0, 1.0, 0))
    assert one.geometric == pytest.approx(-1.5 * math.pi, abs=1e-12)
    assert abs(one.dynamic) < 1e-12
    assert zero.geometric == pytest.approx(-math.pi * (1 + math.sqrt(3) / 2), abs=1e-12)
    assert abs(zero.dynamic) < 1e-12
    # integrated with omega1 -> omega1^1 = 3
    seg = RotatingFieldSegment(w0, 3.0, 4.0)
    np.testing.assert_allclose(extract_phase_triple(seg, cyclic_state(seg)), one, atol=1e-6)
    assert conditional_chi(TwoQubitParams(w0, 2.0, 4.0, 1.0, 1)).chi == pytest.approx(
        math.atan2(w0, -1.0))


# --- dark states ----------------------------------------------------------------------------

def test_dark_frequency_examples():
    assert dark_state_frequency_single(1, 1) == 2
    assert dark_state_frequency_single(3, 4) == 6.25
    g = single_qubit_phases(1, 1, 2).geometric
    assert g == pytest.approx(dark_state_geometric_single(1, 1), abs=1e-12)
    assert dark_state_geometric_single(3, 4) == pytest.approx(-1.6 * math.pi)


def test_dark_geometric_limits():
    assert dark_state_geometric_single(1e-9, 1.0) == pytest.approx(-math.pi, abs=1e-8)
    assert dark_state_geometric_single(1.0, 1e-9) == pytest.approx(-2 * math.pi, abs=1e-8)


@given(pos, pos)
def test_dark_frequency_zeroes_dynamic_phase(w0, w1):
    w = dark_state_frequency_single(w0, w1)
    t = single_qubit_phases(w0, w1, w)
    assert abs(t.dynamic) < 1e-12 * (1 + w / w1)
    assert t.geometric == pytest.approx(dark_state_geometric_single(w0, w1), abs=1e-12)


def test_dark_frequency_domain():
    with pytest.raises(DomainError):
        dark_state_frequency_single(1.0, 0.0)


def test_two_qubit_dark_condition():
    w, w0 = dark_state_condition_two_qubit(2.0, 1.0)
    assert (w, w0) == (4.0, pytest.approx(math.sqrt(3)))
    for d in (0, 1):
        assert abs(conditional_phases(TwoQubitParams(w0, 2.0, w, 1.0, d)).dynamic) < 1e-12
    assert dark_state_condition_two_qubit(1.0, 1.0) == (2.0, 0.0)
    with pytest.raises(DomainError):
        dark_state_condition_two_qubit(0.5, 1.0)
    with pytest.raises(DomainError):
        dark_state_condition_two_qubit(2.0, 0.0)


@pytest.mark.parametrize("d", [0, 1])
def test_two_qubit_dark_geometric_phase_closed_form(d):
    # gamma_g^delta = -pi (1 + sqrt((w1 - (2 delta - 1) J) / (2 w1)))
    w1, J = 5.0, 1.0
    w, w0 = dark_state_condition_two_qubit(w1, J)
    g = conditional_phases(TwoQubitParams(w0, w1, w, J, d)).geometric
    assert g == pytest.approx(-math.pi * (1 + math.sqrt((w1 - (2 * d - 1) * J) / (2 * w1))),
                              abs=1e-12)


@pytest.mark.parametrize("w0,w1", [(1.0, 1.0), (0.3, 2.0), (2.0, 0.3)])
def test_dark_state_energy_vanishes_throughout(w0, w1):
    seg = RotatingFieldSegment(w0, w1, dark_state_frequency_single(w0, w1))
    _, e = instantaneous_energy(seg, cyclic_state(seg))
    assert np.max(np.abs(e)) < 1e-6
