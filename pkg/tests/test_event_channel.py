"""Channel circuit vs the closed-form first-order predictions."""

import math

import numpy as np
import pytest

from questsim import event_channel as channel
from questsim import fock
from questsim.errors import InvalidArgumentError, SingularParameterError

CHI_GRID = (0.01, 0.05, 0.1)
XI_GRID = (0.1, 0.3, 0.5, 0.7, 0.9)


def test_event_gamma_values():
    assert channel.event_gamma(0.5, 0.0) == 0.0
    assert channel.event_gamma(0.0, 1.0) == pytest.approx(0.0, abs=1e-15)
    # (1 - 2/sqrt(2)) / sqrt(0.5) simplifies to sqrt(2) - 2
    assert channel.event_gamma(0.5, 1.0) == pytest.approx(math.sqrt(2) - 2, abs=1e-12)
    with pytest.raises(SingularParameterError):
        channel.event_gamma(1.0, 1.0)


def test_event_gamma_limit_toward_one_is_minus_alpha():
    assert channel.event_gamma(1 - 1e-10, 2.0) == pytest.approx(-2.0, rel=1e-4)


def test_spdc_state_construction():
    vac = channel.spdc_state(0.0, 2)
    assert vac.amplitude({}) == pytest.approx(1.0)
    s = channel.spdc_state(0.1, 3)
    assert s.amplitude({"1": 1, "2": 1}) / s.amplitude({}) == pytest.approx(0.1, abs=1e-15)
    assert abs(s.norm_squared - 1.0) < 1e-12
    # only the diagonal photon-pair ladder is populated
    assert s.amplitude({"1": 1}) == 0.0
    with pytest.raises(InvalidArgumentError):
        channel.spdc_state(0.1, 1)
    with pytest.raises(InvalidArgumentError):
        channel.spdc_state(0.5, 2)  # guard on |chi|


def test_duplicate_state_structure():
    vac4 = channel.duplicate_state(channel.spdc_state(0.0, 2))
    assert vac4.mode_labels == ("1", "2", "3", "4")
    assert vac4.amplitude({}) == pytest.approx(1.0)

    chi = 0.1
    s = channel.duplicate_state(channel.spdc_state(chi, 2))
    a0 = s.amplitude({})
    assert s.amplitude({"1": 1, "2": 1}) / a0 == pytest.approx(chi, abs=1e-15)
    assert s.amplitude({"3": 1, "4": 1}) / a0 == pytest.approx(chi, abs=1e-15)
    assert s.amplitude({"1": 1, "2": 1, "3": 1, "4": 1}) / a0 == pytest.approx(chi**2, abs=1e-15)
    # tensor norm multiplies
    assert s.norm_squared == pytest.approx(1.0, abs=1e-12)


def test_identity_channel_coincidence_fraction():
    # chi = 0.1, xi = 1, eta = 1: heralded fraction = (chi^2 + chi^4)/(1 + chi^2 + chi^4)
    run = channel.run_event_channel("spdc", channel.ChannelParams(xi=1.0), chi=0.1)
    expected = 0.0101 / 1.0101
    assert run.coincidence == pytest.approx(expected, abs=1e-12)
    assert abs(run.coincidence - 0.0099) < 2e-4


def test_loss_scaling_of_coincidences():
    # eta1 eta2 chi^2 to first order; the remainder is O(chi^4)
    chi = 0.1
    run = channel.run_event_channel(
        "spdc", channel.ChannelParams(xi=1.0, eta1=0.6, eta2=0.8), chi=chi
    )
    assert abs(run.coincidence - 0.6 * 0.8 * chi**2 / (1 + chi**2)) <= 5 * chi**4


@pytest.mark.parametrize("chi", CHI_GRID)
def test_oracle_vs_analytic_within_bound(chi):
    for xi in XI_GRID:
        for eta1 in (0.5, 1.0):
            for eta2 in (0.5, 1.0):
                run = channel.run_event_channel(
                    "spdc", channel.ChannelParams(xi=xi, eta1=eta1, eta2=eta2), chi=chi
                )
                assert abs(run.coincidence - run.analytic_coincidence) <= 5 * chi**4


@pytest.mark.parametrize("chi", CHI_GRID)
def test_singles_are_overlap_independent(chi):
    runs = [
        channel.run_event_channel("spdc", channel.ChannelParams(xi=xi), chi=chi)
        for xi in XI_GRID + (1.0,)
    ]
    for mode in ("1", "2"):
        vals = [r.singles[mode] for r in runs]
        assert max(vals) - min(vals) <= 1e-12


def test_singles_overlap_independent_with_loss():
    runs = [
        channel.run_event_channel(
            "spdc", channel.ChannelParams(xi=xi, eta1=0.7, eta2=0.6), chi=0.1
        )
        for xi in (0.3, 0.9, 1.0)
    ]
    vals = [r.singles["1"] for r in runs]
    assert max(vals) - min(vals) <= 1e-12


def test_coherent_states_pass_through():
    for xi in (0.0, 0.25, 0.5, 0.75, 0.99):
        for alpha, beta in ((0.5, 0.5j), (0.3 - 0.2j, 0.1)):
            run = channel.run_event_channel(
                "coherent", channel.ChannelParams(xi=xi), alpha=alpha, beta=beta, cutoff=8
            )
            assert run.fidelity_vs_input >= 1 - 1e-6


def test_polarization_channel_claims():
    chi = 0.1
    for xi in (0.2, 0.5, 0.8):
        run = channel.run_event_channel(
            "polarization_spdc", channel.ChannelParams(xi=xi), chi=chi
        )
        assert abs(run.same_pol_coincidence - xi * chi**2) <= 5 * chi**4
        assert run.cross_pol_coincidence <= 2 * chi**4


def test_phase_delay_invariance():
    rng = np.random.default_rng(2024)
    run = channel.run_event_channel("spdc", channel.ChannelParams(xi=0.5), chi=0.1)
    assert channel.phase_delay_invariance_check(run.reduced, 0.0) == 0.0
    assert channel.phase_delay_invariance_check(run.reduced, 2 * math.pi) <= 1e-12
    assert channel.phase_delay_invariance_check(run.reduced, math.pi / 3) <= 1e-12
    for delta in rng.uniform(0, 2 * math.pi, size=20):
        assert channel.phase_delay_invariance_check(run.reduced, delta) <= 1e-12


def test_reduced_state_matches_first_order_structure():
    # Small-chi output keeps the vacuum + sqrt(xi) chi |11> coherence and the
    # (1 - xi) chi^2 one-sided terms from tracing the duplicate.
    chi, xi = 0.05, 0.4
    run = channel.run_event_channel("spdc", channel.ChannelParams(xi=xi), chi=chi)
    rho = run.reduced
    idx_vac = fock.vacuum_state(rho.mode_labels, rho.cutoff).index_of({})
    s = channel.spdc_state(chi, rho.cutoff)
    idx_pair = s.index_of({"1": 1, "2": 1})
    idx_10 = s.index_of({"1": 1})
    idx_01 = s.index_of({"2": 1})
    assert rho.matrix[idx_vac, idx_pair].real == pytest.approx(
        math.sqrt(xi) * chi, rel=0.02
    )
    assert rho.matrix[idx_10, idx_10].real == pytest.approx((1 - xi) * chi**2, rel=0.05)
    assert rho.matrix[idx_01, idx_01].real == pytest.approx((1 - xi) * chi**2, rel=0.05)


def test_run_event_channel_argument_validation():
    with pytest.raises(InvalidArgumentError):
        channel.run_event_channel("spdc", channel.ChannelParams(xi=0.5))
    with pytest.raises(InvalidArgumentError):
        channel.run_event_channel("laser", channel.ChannelParams(xi=0.5), chi=0.1)
    with pytest.raises(InvalidArgumentError):
        channel.ChannelParams(xi=1.5)


def test_oracle_table_covers_grid():
    rows = channel.oracle_vs_analytic_table(chis=(0.05,), xis=(0.3, 0.7), etas=(1.0,))
    assert len(rows) == 2
    assert all(r["deviation"] <= r["bound_5chi4"] for r in rows)
