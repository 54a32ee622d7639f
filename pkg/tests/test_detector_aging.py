"""Radiation-driven dark-count model against the published calibration rows."""

import math

import numpy as np
import pytest

from questsim import detector_aging as da
from questsim.errors import CalibrationError, InvalidArgumentError, UnreachableRateError

EOL_FLUENCE = 5e8


@pytest.fixture(scope="module")
def models():
    return da.builtin_models()


def test_calibrated_slopes(models):
    assert models["SLiK"].beta_per_c == pytest.approx(0.0814, abs=0.001)
    assert models["C30921SH"].beta_per_c == pytest.approx(0.0727, abs=0.001)
    assert models["SAP500"].beta_per_c == pytest.approx(0.0645, abs=0.001)


def test_all_nine_reference_temperatures_within_one_degree(models):
    for name, rows in da.CALIBRATION_ROWS.items():
        model = models[name]
        for temp_ref, rate in rows:
            temp = da.temperature_for_target(model, rate, EOL_FLUENCE)
            assert temp == pytest.approx(temp_ref, abs=1.0), (name, rate)


def test_cross_model_temperature_ordering(models):
    # warmer operation suffices for the sturdier diode at any common target
    for target in (200.0, 660.0, 2000.0):
        temps = [
            da.temperature_for_target(models[n], target, EOL_FLUENCE)
            for n in ("SLiK", "C30921SH", "SAP500")
        ]
        assert temps[0] > temps[1] > temps[2]


def test_dark_count_rate_examples(models):
    slik = models["SLiK"]
    assert da.dark_count_rate(slik, -29.1, EOL_FLUENCE) == pytest.approx(2000.0, rel=0.06)
    assert da.dark_count_rate(slik, -57.4, EOL_FLUENCE) == pytest.approx(200.0, rel=0.06)
    # undamaged detector at operating temperature stays at the intrinsic floor
    assert da.dark_count_rate(slik, -29.1, 0.0) <= 100.0 + 1e-9


def test_rate_affine_in_fluence(models):
    slik = models["SLiK"]
    f = np.linspace(0, 1e9, 7)
    rates = np.array([da.dark_count_rate(slik, -40.0, x) for x in f])
    diffs = np.diff(rates)
    assert np.allclose(diffs, diffs[0], rtol=1e-12)


def test_temperature_inversion_roundtrip(models):
    slik = models["SLiK"]
    t = da.temperature_for_target(slik, 700.0, EOL_FLUENCE)
    assert da.dark_count_rate(slik, t, EOL_FLUENCE) == pytest.approx(700.0, rel=1e-9)
    # doubling the target warms by ln2/beta
    t2 = da.temperature_for_target(slik, 1400.0, EOL_FLUENCE)
    assert t2 - t == pytest.approx(math.log(2) / slik.beta_per_c, abs=1e-9)
    with pytest.raises(UnreachableRateError):
        da.temperature_for_target(slik, 50.0, EOL_FLUENCE)


def test_reserve_margin(models):
    assert da.reserve_margin(models["SLiK"], 3.0) == pytest.approx(13.5, abs=0.1)
    assert da.reserve_margin(models["SLiK"], 1.0) == 0.0
    assert da.reserve_margin(models["SAP500"], 3.0) == pytest.approx(17.0, abs=0.1)
    # consistent with the quoted ~15 C extra cooling within 2 C
    assert abs(da.reserve_margin(models["SLiK"], 3.0) - 15.0) <= 2.0


def test_fluence_accrual():
    assert da.fluence_at_time(0.0) == 0.0
    assert da.fluence_at_time(da.TWO_YEARS_S) == pytest.approx(5e8)
    assert da.fluence_at_time(0.5 * da.SECONDS_PER_YEAR) == pytest.approx(1.25e8)
    env = da.MissionEnvironment()
    assert env.ddd_two_year == pytest.approx(1.27e6)


def test_calibration_guards():
    with pytest.raises(CalibrationError):
        da.calibrate_apd("custom", rows=[(-50.0, 200.0)])
    with pytest.raises(CalibrationError):
        da.calibrate_apd("custom", rows=[(-50.0, 200.0), (-50.0, 300.0)])
    with pytest.raises(CalibrationError):
        da.calibrate_apd("custom", rows=[(-60.0, 500.0), (-50.0, 300.0)])
    with pytest.raises(CalibrationError):
        da.calibrate_apd("unknown-model")


def test_temperature_guard(models):
    with pytest.raises(InvalidArgumentError):
        da.dark_count_rate(models["SLiK"], -150.0, 0.0)


def test_background_allowance_over_mission(models):
    slik = models["SLiK"]
    budget = lambda pair_rate: 5000.0  # flat stand-in for the solver
    at_start = da.max_background_over_mission(0.0, 350e6, -29.1, slik, budget)
    assert at_start == pytest.approx(5000.0 - 100.0, abs=1e-6)
    at_eol = da.max_background_over_mission(da.TWO_YEARS_S, 350e6, -29.1, slik, budget)
    assert at_eol == pytest.approx(5000.0 - 2100.0, abs=1e-6)
    # allowance is monotone decreasing in mission time and clips at zero
    times = np.linspace(0, da.TWO_YEARS_S, 9)
    vals = [da.max_background_over_mission(t, 350e6, -29.1, slik, budget) for t in times]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    tiny = da.max_background_over_mission(da.TWO_YEARS_S, 350e6, -29.1, slik, lambda r: 500.0)
    assert tiny == 0.0
