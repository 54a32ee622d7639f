"""State-vector mechanics: unitarity, conservation laws, trace handling."""

import numpy as np
import pytest

from questsim import fock
from questsim.errors import InvalidArgumentError, TruncationRiskError


def random_state(rng, labels=("1", "2", "3", "4"), cutoff=2):
    dim = (cutoff + 1) ** len(labels)
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    amps /= np.linalg.norm(amps)
    return fock.TruncatedFockState(tuple(labels), cutoff, amps)


def test_index_occupation_bijection_total():
    state = fock.vacuum_state(("a", "b"), 3)
    seen = set()
    for na in range(4):
        for nb in range(4):
            seen.add(state.index_of({"a": na, "b": nb}))
    assert seen == set(range(16))


def test_basis_state_amplitude_lookup():
    s = fock.basis_state(("1", "2"), 2, {"1": 1, "2": 1})
    assert s.amplitude({"1": 1, "2": 1}) == 1.0
    assert s.amplitude({}) == 0.0
    assert s.mean_photon_number("1") == 1.0


def test_norm_guard_rejects_zero_and_oversized():
    amps = np.zeros(9, dtype=complex)
    with pytest.raises(InvalidArgumentError):
        fock.TruncatedFockState(("1", "2"), 2, amps)
    amps[0] = 1.1
    with pytest.raises(InvalidArgumentError):
        fock.TruncatedFockState(("1", "2"), 2, amps)


@pytest.mark.parametrize("xi", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_beamsplitter_unitarity_on_random_states(xi):
    rng = np.random.default_rng(11)
    for _ in range(4):
        s = random_state(rng)
        out = fock.apply_beamsplitter(s, "1", "3", xi)
        assert abs(out.norm_squared - s.norm_squared) < 1e-10


@pytest.mark.parametrize("xi", [0.0, 0.25, 0.5, 0.75, 1.0])
def test_beamsplitter_conserves_total_photon_number(xi):
    rng = np.random.default_rng(17)
    for _ in range(4):
        s = random_state(rng, cutoff=3)
        out = fock.apply_beamsplitter(s, "1", "3", xi)
        assert abs(out.total_photon_expectation() - s.total_photon_expectation()) < 1e-10


def test_beamsplitter_sign_convention_one_photon():
    # Transmitted amplitude keeps its sign, mode-1 -> mode-3 scattering is negative.
    xi = 0.3
    s1 = fock.basis_state(("1", "3"), 2, {"1": 1})
    out = fock.apply_beamsplitter(s1, "1", "3", xi)
    assert out.amplitude({"1": 1}) == pytest.approx(np.sqrt(xi), abs=1e-12)
    assert out.amplitude({"3": 1}) == pytest.approx(-np.sqrt(1 - xi), abs=1e-12)
    s3 = fock.basis_state(("1", "3"), 2, {"3": 1})
    out3 = fock.apply_beamsplitter(s3, "1", "3", xi)
    assert out3.amplitude({"3": 1}) == pytest.approx(np.sqrt(xi), abs=1e-12)
    assert out3.amplitude({"1": 1}) == pytest.approx(np.sqrt(1 - xi), abs=1e-12)


def test_beamsplitter_xi_zero_swaps_with_sign():
    s = fock.basis_state(("1", "3"), 2, {"1": 1})
    out = fock.apply_beamsplitter(s, "1", "3", 0.0)
    assert out.amplitude({"3": 1}) == pytest.approx(-1.0, abs=1e-12)


def test_beamsplitter_xi_one_is_identity():
    rng = np.random.default_rng(3)
    s = random_state(rng)
    out = fock.apply_beamsplitter(s, "1", "3", 1.0)
    assert np.max(np.abs(out.amplitudes - s.amplitudes)) < 1e-10


def test_beamsplitter_rejects_identical_modes():
    s = fock.vacuum_state(("1", "3"), 2)
    with pytest.raises(InvalidArgumentError):
        fock.apply_beamsplitter(s, "1", "1", 0.5)


def test_displacement_identity_at_zero():
    s = fock.vacuum_state(("1",), 2)
    assert fock.apply_displacement(s, "1", 0.0) is s


def test_displacement_mean_photon_number():
    # Coherent amplitude 0.3 puts |0.3|^2 photons in the mode.
    s = fock.vacuum_state(("1",), 5)
    out = fock.apply_displacement(s, "1", 0.3)
    assert out.mean_photon_number("1") == pytest.approx(0.09, abs=1e-6)


def test_displacement_round_trip_fidelity():
    rng = np.random.default_rng(5)
    s = random_state(rng, labels=("1",), cutoff=8)
    out = fock.apply_displacement(fock.apply_displacement(s, "1", 0.4 + 0.2j), "1", -0.4 - 0.2j)
    fidelity = abs(np.vdot(s.amplitudes, out.amplitudes)) ** 2
    assert fidelity >= 1 - 1e-8


def test_displacement_guard_raises():
    s = fock.vacuum_state(("1",), 2)
    with pytest.raises(TruncationRiskError):
        fock.apply_displacement(s, "1", 1.5)


def test_loss_trace_preserved_and_eta_limits():
    rng = np.random.default_rng(9)
    s = random_state(rng, labels=("1", "2"), cutoff=2)
    for eta in (0.0, 0.3, 0.7, 1.0):
        rho = fock.apply_loss(s, "1", eta)
        assert rho.trace == pytest.approx(s.norm_squared, abs=1e-10)
        rho.validate()
    # eta = 1 keeps the pure projector
    rho1 = fock.apply_loss(s, "1", 1.0)
    expected = np.outer(s.amplitudes, s.amplitudes.conj())
    assert np.max(np.abs(rho1.matrix - expected)) < 1e-12
    # eta = 0 empties the mode
    one = fock.basis_state(("1", "2"), 2, {"1": 1})
    rho0 = fock.apply_loss(one, "1", 0.0)
    assert fock.singles_expectation(rho0, "1") == pytest.approx(0.0, abs=1e-12)


def test_partial_trace_of_product_state_matches_factor():
    a = fock.apply_displacement(fock.vacuum_state(("1",), 6), "1", 0.4)
    b = fock.apply_displacement(fock.vacuum_state(("2",), 6), "2", 0.2j)
    joint = fock.tensor_product(a, b)
    rho = fock.partial_trace_pure(joint, ("1",))
    expected = np.outer(a.amplitudes, a.amplitudes.conj())
    assert np.max(np.abs(rho.matrix - expected)) < 1e-12


def test_partial_trace_density_preserves_trace_and_identity():
    rng = np.random.default_rng(13)
    s = random_state(rng, labels=("1", "2", "3"), cutoff=2)
    rho = fock.to_density(s)
    kept = fock.partial_trace(rho, ("1", "2", "3"))
    assert np.max(np.abs(kept.matrix - rho.matrix)) < 1e-12
    reduced = fock.partial_trace(rho, ("2",))
    assert reduced.trace == pytest.approx(rho.trace, abs=1e-10)
    with pytest.raises(InvalidArgumentError):
        fock.partial_trace(rho, ())


def test_projector_expectations():
    vac = fock.vacuum_state(("1", "2"), 2)
    assert fock.singles_expectation(vac, "1") == 0.0
    assert fock.coincidence_expectation(vac, "1", "2") == 0.0
    pair = fock.basis_state(("1", "2"), 2, {"1": 1, "2": 1})
    assert fock.coincidence_expectation(fock.to_density(pair), "1", "2") == pytest.approx(1.0)
    with pytest.raises(InvalidArgumentError):
        fock.coincidence_expectation(pair, "1", "1")
