"""
Tests for the quantum-bouncer eigensystem

These tests verify:
1. Airy zeros against tabulated values and the large-n expansion
2. Gravitational length, base frequency and transition frequencies
3. Closed-form <n|z|m> against direct quadrature
4. Pi-pulse gradients for the 2->1 and 3->1 transitions
5. Index checks and step-preparation populations
"""
import math

import numpy as np
import pytest
from scipy.special import airy

from bouncer import (
    BouncerSpectrum,
    airy_zeros,
    classical_turning_height,
    ensemble_step_populations,
    overlap_matrix,
    prepare_state,
    quadrature_z_matrix,
    rabi_frequency,
    required_gradient,
    resonant_velocity,
    step_populations,
    transition_frequency,
    wavefunction,
    z_matrix,
    z_matrix_element,
)
from bouncer.constants import MICRON, PhysicalConstants
from utilities.errors import DomainError, IndexRangeError


def test_first_airy_zeros_match_tables():
    """First four zeros agree with tabulated values to three decimals"""
    np.testing.assert_allclose(airy_zeros(4), [2.33811, 4.08795, 5.52056, 6.78671], atol=5e-4)


def test_airy_zeros_are_roots():
    """Ai vanishes at every computed zero"""
    for eps in airy_zeros(20):
        assert abs(airy(-eps)[0]) < 1e-9, f"|Ai(-{eps})| not below 1e-9"


def test_tenth_zero_matches_asymptotic_expansion():
    t = 3 * math.pi * (4 * 10 - 1) / 8
    assert airy_zeros(10)[9] == pytest.approx(t ** (2 / 3), abs=1e-3)


def test_airy_zeros_strictly_increasing():
    zeros = airy_zeros(100)
    assert np.all(np.diff(zeros) > 0)


@pytest.mark.parametrize("n_states", [0, 101])
def test_airy_zeros_out_of_range(n_states):
    with pytest.raises(DomainError):
        airy_zeros(n_states)


def test_gravitational_length_and_base_frequency(spectrum):
    assert spectrum.z0 / MICRON == pytest.approx(5.87, abs=0.01)
    assert spectrum.f0 == pytest.approx(145.5, abs=0.1)


def test_transition_frequencies(spectrum):
    """
    Unrounded constants give f21 = 254.6 Hz; the commonly quoted 253.8 Hz
    and 462 Hz follow from f0 rounded to 145 Hz
    """
    eps = spectrum.epsilon
    assert transition_frequency(spectrum, 2, 1) == pytest.approx(254.6, abs=0.2)
    assert transition_frequency(spectrum, 3, 1) == pytest.approx(463.1, abs=0.3)
    assert 145.0 * (eps[1] - eps[0]) == pytest.approx(253.8, abs=0.2)
    assert 145.0 * (eps[2] - eps[0]) == pytest.approx(462.0, abs=1.0)


def test_transition_frequency_is_antisymmetric(spectrum):
    assert transition_frequency(spectrum, 1, 3) == pytest.approx(-transition_frequency(spectrum, 3, 1))


def test_transition_frequency_rejects_equal_or_missing_states(spectrum):
    with pytest.raises(DomainError):
        transition_frequency(spectrum, 2, 2)
    with pytest.raises(IndexRangeError):
        transition_frequency(spectrum, 5, 1)
    with pytest.raises(IndexRangeError):
        z_matrix_element(spectrum, 0, 1)


def test_closed_form_matrix_elements(spectrum):
    assert z_matrix_element(spectrum, 1, 2) / MICRON == pytest.approx(3.83, abs=0.01)
    assert z_matrix_element(spectrum, 1, 1) / MICRON == pytest.approx(9.15, abs=0.01)
    z = z_matrix(spectrum)
    np.testing.assert_allclose(z, z.T)
    np.testing.assert_allclose(np.abs(z), z_matrix(spectrum, signed=False))


def test_matrix_elements_match_quadrature(spectrum):
    """Signed closed form agrees with quadrature over the wavefunctions, signs included"""
    closed = z_matrix(spectrum)
    numeric = quadrature_z_matrix(spectrum)
    np.testing.assert_allclose(numeric, closed, rtol=1e-4,
                               err_msg="closed-form <n|z|m> disagrees with quadrature")
    off_diagonal = ~np.eye(spectrum.n_states, dtype=bool)
    assert np.all(closed[off_diagonal] < 0)


def test_three_state_loop_product_is_negative(spectrum):
    closed = z_matrix(spectrum)
    numeric = quadrature_z_matrix(spectrum)
    loop = closed[0, 1] * closed[1, 2] * closed[2, 0]
    assert loop < 0
    assert loop == pytest.approx(numeric[0, 1] * numeric[1, 2] * numeric[2, 0], rel=1e-3)


def test_eigenfunctions_are_orthonormal(spectrum):
    np.testing.assert_allclose(overlap_matrix(spectrum), np.eye(spectrum.n_states), atol=1e-6)


def test_wavefunction_vanishes_at_and_below_mirror(spectrum):
    psi = wavefunction(spectrum, 2, np.array([-1e-6, 0.0]))
    np.testing.assert_allclose(psi, 0.0, atol=1e-6)


def test_pi_pulse_gradients(spectrum):
    assert required_gradient(spectrum, 2, 1, 0.04) == pytest.approx(0.22, abs=0.01)
    assert required_gradient(spectrum, 3, 1, 0.04) == pytest.approx(0.74, abs=0.02)


def test_required_gradient_gives_pi_pulse(spectrum):
    beta = required_gradient(spectrum, 2, 1, 0.04)
    assert rabi_frequency(spectrum, 2, 1, beta) * 0.04 == pytest.approx(math.pi, rel=1e-12)


def test_required_gradient_rejects_nonpositive_time(spectrum):
    with pytest.raises(DomainError):
        required_gradient(spectrum, 2, 1, 0.0)


def test_stronger_gravity_raises_frequency():
    weak = BouncerSpectrum(constants=PhysicalConstants(g_local=9.0))
    strong = BouncerSpectrum(constants=PhysicalConstants(g_local=10.0))
    ratio = transition_frequency(strong, 2, 1) / transition_frequency(weak, 2, 1)
    assert ratio == pytest.approx((10.0 / 9.0) ** (2 / 3), rel=1e-12)


def test_turning_height_and_dc_velocity(spectrum):
    assert classical_turning_height(spectrum, 1) / MICRON == pytest.approx(13.72, abs=0.05)
    assert resonant_velocity(spectrum, 2, 1, 0.01) == pytest.approx(2.546, abs=0.005)


def test_tiny_step_keeps_state(spectrum):
    populations = step_populations(spectrum, 1e-9, 1)
    assert populations[0] == pytest.approx(1.0, abs=1e-3)


def test_step_populations_are_probabilities(spectrum):
    populations = step_populations(spectrum, 15 * MICRON, 3)
    assert all(0.0 <= p <= 1.0 for p in populations)
    assert sum(populations) <= 1.0 + 1e-9


def test_step_rejects_nonpositive_height(spectrum):
    with pytest.raises(DomainError):
        step_populations(spectrum, 0.0, 1)


def test_prepared_state_leakage(spectrum):
    prepared = prepare_state(spectrum, 15 * MICRON, n_incoming=4, weighting="uniform")
    assert prepared.leakage == pytest.approx(1.0 - sum(prepared.populations))
    assert len(prepared.populations) == spectrum.n_states


@pytest.mark.xfail(strict=False, reason="ensemble weighting of the incoming beam is a modelling choice")
def test_step_prepares_depleted_ground_state(spectrum):
    """A 15 um step leaves |1> nearly empty and |2>..|4> about equally filled"""
    populations = ensemble_step_populations(spectrum, 15 * MICRON, n_incoming=10, weighting="flux")
    assert populations[0] == pytest.approx(0.02, abs=0.05)
    for p in populations[1:4]:
        assert p == pytest.approx(0.3, abs=0.05)
