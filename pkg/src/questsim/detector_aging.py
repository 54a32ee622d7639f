"""Dark-count growth of single-photon avalanche diodes under proton damage.

The model is exponential in temperature and affine in accumulated fluence:

    rate(T, F) = (intrinsic + anchor_rate * F / anchor_fluence) * exp(beta (T - anchor_T))

Each diode model is calibrated from three published (temperature, rate)
end-of-life points; the warmest row anchors the damage term and the slope of
ln(rate) vs temperature gives beta.  The intrinsic (undamaged) dark rate
shares the temperature slope, which keeps the calibration consistent with
the quoted sub-100 Hz start-of-life rates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CalibrationError, InvalidArgumentError, UnreachableRateError

SECONDS_PER_YEAR = 365.25 * 86400.0
TWO_YEARS_S = 2.0 * SECONDS_PER_YEAR

# End-of-life calibration rows: (temperature degC, dark rate Hz) after the
# reference two-year fluence.
CALIBRATION_ROWS = {
    "SLiK": ((-57.4, 200.0), (-42.7, 660.0), (-29.1, 2000.0)),
    "C30921SH": ((-81.5, 200.0), (-65.1, 660.0), (-49.8, 2000.0)),
    "SAP500": ((-95.6, 200.0), (-77.1, 660.0), (-59.9, 2000.0)),
}

TEMP_GUARD_C = (-100.0, 20.0)
DEFAULT_INTRINSIC_RATE_HZ = 100.0


@dataclass(frozen=True)
class MissionEnvironment:
    """Radiation exposure accrued linearly over the mission."""

    fluence_equivalent_two_year: float = 5e8  # protons/cm^2 at the reference energy
    ddd_two_year: float = 1.27e6  # MeV/g
    accrual_period_s: float = TWO_YEARS_S

    @property
    def equivalent_fluence_rate(self) -> float:
        return self.fluence_equivalent_two_year / self.accrual_period_s


@dataclass(frozen=True)
class ApdModel:
    name: str
    beta_per_c: float
    anchor_temp_c: float
    anchor_rate_hz: float
    anchor_fluence: float
    intrinsic_dark_rate_hz: float = DEFAULT_INTRINSIC_RATE_HZ

    def __post_init__(self):
        if self.beta_per_c <= 0:
            raise InvalidArgumentError("beta must be positive")
        if self.anchor_rate_hz <= 0:
            raise InvalidArgumentError("anchor rate must be positive")
        if self.intrinsic_dark_rate_hz < 0:
            raise InvalidArgumentError("intrinsic dark rate must be >= 0")


def calibrate_apd(
    name: str,
    rows=None,
    anchor_fluence: float = 5e8,
    intrinsic_dark_rate_hz: float = DEFAULT_INTRINSIC_RATE_HZ,
) -> ApdModel:
    """Least-squares fit of ln(rate) vs temperature over the given rows.

    Rows default to the built-in table for the named diode.  The warmest row
    becomes the damage anchor at the reference fluence.
    """
    if rows is None:
        try:
            rows = CALIBRATION_ROWS[name]
        except KeyError:
            raise CalibrationError(
                f"no built-in rows for {name!r}; pass (temp, rate) rows explicitly"
            ) from None
    rows = sorted((float(t), float(r)) for t, r in rows)
    if len(rows) < 2:
        raise CalibrationError("need at least two calibration rows")
    temps = np.array([t for t, _ in rows])
    rates = np.array([r for _, r in rows])
    if np.any(np.diff(temps) == 0):
        raise CalibrationError("calibration temperatures must be distinct")
    if np.any(rates <= 0):
        raise CalibrationError("calibration rates must be positive")
    if np.any(np.diff(rates) <= 0):
        raise CalibrationError("dark rate must increase with temperature")
    slope, _ = np.polyfit(temps, np.log(rates), 1)
    anchor_temp, anchor_rate = rows[-1]
    return ApdModel(
        name=name,
        beta_per_c=float(slope),
        anchor_temp_c=anchor_temp,
        anchor_rate_hz=anchor_rate,
        anchor_fluence=anchor_fluence,
        intrinsic_dark_rate_hz=intrinsic_dark_rate_hz,
    )


def builtin_models() -> dict[str, ApdModel]:
    return {name: calibrate_apd(name) for name in CALIBRATION_ROWS}


def fluence_at_time(t_seconds: float, env: MissionEnvironment | None = None) -> float:
    """Accumulated equivalent fluence after t seconds in orbit (linear accrual)."""
    if t_seconds < 0:
        raise InvalidArgumentError("mission time must be >= 0")
    env = env or MissionEnvironment()
    return env.equivalent_fluence_rate * t_seconds


def dark_count_rate(model: ApdModel, temp_c: float, fluence: float) -> float:
    """Dark counts per second at the given temperature and accrued fluence."""
    lo, hi = TEMP_GUARD_C
    if not lo <= temp_c <= hi:
        raise InvalidArgumentError(f"temperature {temp_c} C outside guard [{lo}, {hi}] C")
    if fluence < 0:
        raise InvalidArgumentError("fluence must be >= 0")
    damage = model.anchor_rate_hz * fluence / model.anchor_fluence
    return (model.intrinsic_dark_rate_hz + damage) * math.exp(
        model.beta_per_c * (temp_c - model.anchor_temp_c)
    )


def temperature_for_target(model: ApdModel, target_rate_hz: float, fluence: float) -> float:
    """Closed-form inversion: temperature reaching the target dark rate."""
    if target_rate_hz <= model.intrinsic_dark_rate_hz:
        raise UnreachableRateError(
            f"target {target_rate_hz}/s not above the intrinsic floor "
            f"{model.intrinsic_dark_rate_hz}/s"
        )
    base = model.intrinsic_dark_rate_hz + model.anchor_rate_hz * fluence / model.anchor_fluence
    return model.anchor_temp_c + math.log(target_rate_hz / base) / model.beta_per_c


def reserve_margin(model: ApdModel, reserve_factor: float) -> float:
    """Extra cooling (degC) absorbing a sample-to-sample rate factor."""
    if reserve_factor < 1.0:
        raise InvalidArgumentError("reserve factor must be >= 1")
    return math.log(reserve_factor) / model.beta_per_c


def table_temperatures(model: ApdModel, targets=(200.0, 660.0, 2000.0), fluence: float = 5e8):
    """Temperatures reaching each target after the reference exposure."""
    return {target: temperature_for_target(model, target, fluence) for target in targets}


def max_background_over_mission(
    mission_t_seconds: float,
    pair_production_rate: float,
    operating_temp_c: float,
    model: ApdModel,
    noise_budget_fn,
    env: MissionEnvironment | None = None,
) -> float:
    """Background allowance left after radiation-driven dark counts.

    noise_budget_fn(pair_production_rate) -> tolerable total noise per
    detector (counts/s); the dark-count prediction at the mission time is
    subtracted from it and the result clipped at zero.
    """
    budget = noise_budget_fn(pair_production_rate)
    dark = dark_count_rate(model, operating_temp_c, fluence_at_time(mission_t_seconds, env))
    return max(0.0, budget - dark)
