"""Uplink loss components and the end-to-end transmission in dB.

Losses are stored as positive dB magnitudes; the total budget is their sum,
with the linear transmission 10^(-total/10).  Beam sizes are visible-spot
(FWHM) figures by default; the 1/e^2 intensity radius used internally is
FWHM / sqrt(2 ln 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError, NonUnimodalObjectiveError

# FWHM diameter = sqrt(2 ln 2) * (1/e^2 intensity radius)
FWHM_PER_E2_RADIUS = math.sqrt(2.0 * math.log(2.0))

MAX_COMPONENT_DB = 80.0


@dataclass(frozen=True)
class LossComponents:
    """Positive dB magnitudes of the four uplink loss contributions."""

    atmospheric_db: float
    clipping_db: float
    pointing_db: float
    optics_db: float

    def __post_init__(self):
        for name in ("atmospheric_db", "clipping_db", "pointing_db", "optics_db"):
            v = getattr(self, name)
            if not 0.0 <= v <= MAX_COMPONENT_DB:
                raise InvalidArgumentError(f"{name}={v} outside [0, {MAX_COMPONENT_DB}] dB")

    @property
    def total_db(self) -> float:
        return self.atmospheric_db + self.clipping_db + self.pointing_db + self.optics_db


@dataclass(frozen=True)
class BeamParams:
    wavelength_m: float
    tx_diameter_m: float
    fried_r0_m: float
    pointing_jitter_rad: float
    rx_clear_aperture_m: float
    obscuration_fraction: float = 0.35

    def __post_init__(self):
        for name in (
            "wavelength_m",
            "tx_diameter_m",
            "fried_r0_m",
            "pointing_jitter_rad",
            "rx_clear_aperture_m",
        ):
            if getattr(self, name) <= 0:
                raise InvalidArgumentError(f"{name} must be positive")
        if not 0.05 <= self.fried_r0_m <= 1.0:
            raise InvalidArgumentError(f"fried_r0_m={self.fried_r0_m} outside guard [0.05, 1.0] m")
        if not 0.0 <= self.obscuration_fraction < 1.0:
            raise InvalidArgumentError("obscuration fraction must lie in [0, 1)")


def db_from_transmission(transmission: float) -> float:
    if not 0.0 < transmission <= 1.0:
        raise InvalidArgumentError(f"transmission must lie in (0, 1], got {transmission}")
    return -10.0 * math.log10(transmission)


def transmission_from_db(loss_db: float) -> float:
    return 10.0 ** (-loss_db / 10.0)


def fwhm_to_e2_radius(fwhm_diameter_m: float) -> float:
    return fwhm_diameter_m / FWHM_PER_E2_RADIUS


def fwhm_to_e2_diameter(fwhm_diameter_m: float) -> float:
    return 2.0 * fwhm_to_e2_radius(fwhm_diameter_m)


def atmospheric_loss_db(zenith_angle_rad: float, zenith_loss_db: float) -> float:
    """Airmass scaling of the zenith extinction, sec(theta) up to 70 deg."""
    if not 0.0 <= zenith_angle_rad <= math.radians(70.0):
        raise InvalidArgumentError("airmass model only valid for zenith angles in [0, 70 deg]")
    if zenith_loss_db < 0:
        raise InvalidArgumentError("zenith loss must be >= 0 dB")
    return zenith_loss_db / math.cos(zenith_angle_rad)


def diffraction_spot_diameter(
    tx_diameter_m: float,
    range_m: float,
    wavelength_m: float,
    convention: str = "fwhm",
) -> float:
    """Far-field spot of a Gaussian beam launched with waist tx_diameter/2."""
    for v in (tx_diameter_m, range_m, wavelength_m):
        if v <= 0:
            raise InvalidArgumentError("diffraction model needs positive inputs")
    w0 = tx_diameter_m / 2.0
    w = wavelength_m * range_m / (math.pi * w0)
    if convention == "fwhm":
        return FWHM_PER_E2_RADIUS * w
    if convention == "e2":
        return 2.0 * w
    raise InvalidArgumentError(f"unknown convention {convention!r}; use 'fwhm' or 'e2'")


def turbulent_spot_diameter(
    tx_diameter_m: float,
    fried_r0_m: float,
    range_m: float,
    wavelength_m: float,
    convention: str = "fwhm",
) -> float:
    """Long-term spot including turbulent spreading of the launched beam.

    Model: 1/e^2 radius w = (2 lambda L / pi) sqrt(1/D^2 + D^2/r0^4).  The
    second term is a tilt-dominated spreading penalty for apertures beyond
    the atmospheric coherence scale, calibrated so that the best transmit
    aperture equals r0 (the optimal-aperture rule of thumb for uplinks
    through Kolmogorov turbulence).  r0 -> infinity recovers diffraction.
    """
    for v in (tx_diameter_m, fried_r0_m, range_m, wavelength_m):
        if v <= 0:
            raise InvalidArgumentError("spot model needs positive inputs")
    d = tx_diameter_m
    scale = 2.0 * wavelength_m * range_m / math.pi
    w = scale * math.sqrt(1.0 / (d * d) + (d * d) / fried_r0_m**4)
    if convention == "fwhm":
        return FWHM_PER_E2_RADIUS * w
    if convention == "e2":
        return 2.0 * w
    raise InvalidArgumentError(f"unknown convention {convention!r}; use 'fwhm' or 'e2'")


def optimal_tx_diameter(
    fried_r0_m: float,
    range_m: float,
    wavelength_m: float,
    bounds: tuple[float, float] = (0.02, 1.0),
    tol_m: float = 1e-3,
) -> float:
    """Transmit aperture minimising the delivered long-term spot.

    Golden-section search over the bounds; a coarse pre-scan guards against
    a non-unimodal objective (raises with the scan attached if found).
    """
    if not 0.1 <= fried_r0_m <= 0.5:
        raise InvalidArgumentError(f"fried_r0_m={fried_r0_m} outside guard [0.1, 0.5] m")

    def spot(d):
        return turbulent_spot_diameter(d, fried_r0_m, range_m, wavelength_m)

    grid = np.linspace(bounds[0], bounds[1], 128)
    values = np.array([spot(d) for d in grid])
    diffs = np.sign(np.diff(values))
    # ignore flat segments when counting direction changes
    moving = diffs[diffs != 0]
    changes = int(np.sum(moving[1:] != moving[:-1]))
    if changes > 1:
        raise NonUnimodalObjectiveError(
            "spot size is not unimodal over the aperture range",
            scan=list(zip(grid.tolist(), values.tolist())),
        )

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    lo, hi = bounds
    c = hi - invphi * (hi - lo)
    d = lo + invphi * (hi - lo)
    fc, fd = spot(c), spot(d)
    while hi - lo > tol_m:
        if fc < fd:
            hi, d, fd = d, c, fc
            c = hi - invphi * (hi - lo)
            fc = spot(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + invphi * (hi - lo)
            fd = spot(d)
    return 0.5 * (lo + hi)


def clipping_loss_db(
    beam_diameter_e2_m: float,
    rx_aperture_m: float,
    obscuration_fraction: float = 0.35,
) -> float:
    """Gaussian power-in-bucket loss at the receive aperture.

    T = (1 - obsc^2)(1 - exp(-2 a^2 / w^2)) with a the aperture radius and w
    the 1/e^2 beam radius; the linear obscuration fraction models the
    secondary mirror.
    """
    if beam_diameter_e2_m <= 0 or rx_aperture_m <= 0:
        raise InvalidArgumentError("beam and aperture must be positive")
    if not 0.0 <= obscuration_fraction <= 0.5:
        raise InvalidArgumentError("obscuration fraction must lie in [0, 0.5]")
    w = beam_diameter_e2_m / 2.0
    a = rx_aperture_m / 2.0
    bucket = -math.expm1(-2.0 * a * a / (w * w))
    t = (1.0 - obscuration_fraction**2) * bucket
    return db_from_transmission(min(t, 1.0))


def pointing_loss_db(total_jitter_rad: float, range_m: float, beam_e2_radius_m: float) -> float:
    """Jitter-averaged Gaussian coupling, T = w^2 / (w^2 + 2 sigma^2)."""
    if total_jitter_rad < 0 or range_m <= 0 or beam_e2_radius_m <= 0:
        raise InvalidArgumentError("pointing model needs jitter >= 0 and positive range/beam")
    sigma = total_jitter_rad * range_m
    w2 = beam_e2_radius_m**2
    return db_from_transmission(w2 / (w2 + 2.0 * sigma * sigma))


def optics_loss_db(
    detector_efficiency: float,
    tx_transmission: float,
    window_transmission: float,
    rx_transmission: float,
) -> float:
    """Combined instrument throughput expressed as a dB loss."""
    product = 1.0
    for name, v in (
        ("detector_efficiency", detector_efficiency),
        ("tx_transmission", tx_transmission),
        ("window_transmission", window_transmission),
        ("rx_transmission", rx_transmission),
    ):
        if not 0.0 < v <= 1.0:
            raise InvalidArgumentError(f"{name} must lie in (0, 1], got {v}")
        product *= v
    return db_from_transmission(product)


@dataclass(frozen=True)
class LinkBudget:
    components: LossComponents

    @property
    def total_db(self) -> float:
        return self.components.total_db

    @property
    def transmission(self) -> float:
        return transmission_from_db(self.total_db)


def total_link_budget(components: LossComponents) -> LinkBudget:
    return LinkBudget(components)


def worst_case_components() -> LossComponents:
    """The quoted worst-case component set (sums to 46 dB)."""
    return LossComponents(atmospheric_db=4.5, clipping_db=28.0, pointing_db=6.0, optics_db=7.5)


def best_case_components() -> LossComponents:
    """Best-case set; its sum (~42 dB) is reported as-is, see README."""
    return LossComponents(
        atmospheric_db=3.5,
        clipping_db=26.0,
        pointing_db=6.0,
        optics_db=optics_loss_db(0.6, 0.7, 0.75, 0.7),
    )
