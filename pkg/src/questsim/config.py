"""Scenario configuration: sectioned key-value text with units in key names.

The format is plain INI so configs stay diff-able and hand-editable.  Every
guard of the constituent models is checked at load time and all violations
are reported together.
"""

from __future__ import annotations

import configparser
import hashlib
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .counting_stats import RateModel, SensitivityScenario, TurbulenceModel
from .errors import ConfigValidationError
from .link_budget import LossComponents

DEFAULT_CONFIG_TEXT = """\
# Worst-case uplink scenario (all values editable).

[geometry]
altitude_km = 400
zenith_deg = 0
max_zenith_deg = 37
fov_annotation_deg = 22

[spectral]
coherence_time_ps = 0.8
wavelength_nm = 830

[link]
# Budget components entering the total transmission (positive dB losses).
atmospheric_db = 4.5
clipping_db = 28.0
pointing_db = 6.0
optics_db = 7.5
# Model inputs behind those components.
zenith_atmospheric_db = 3.5
tx_diameter_cm = 13.0
fried_r0_cm = 15.0
pointing_jitter_urad = 10.0
rx_aperture_cm = 23.5
obscuration_fraction = 0.35
worst_beam_fwhm_m = 4.5

[rates]
pair_production_per_s = 350e6
intrinsic_heralding = 0.2
ground_background_per_s = 200000
space_noise_per_detector_per_s = 6000
noise_distribution = lognormal-modulated
coincidence_window_ns = 2.0

[turbulence]
scintillation_index = 0.05
correlation_window_ms = 10

[detector]
apd_model = SLiK
operating_temp_c = -29.1
mission_years = 2.0

[schedule]
dark_cal = 0.05
background_cal = 0.15
link_cal = 0.10
fps = 0.29
epps = 0.40
switching = 0.01

[sensitivity]
windows_per_condition = 4
window_s = 1.0
effective_coincidence_window_ns = 0.2
confidence_sigmas = 1.0
delta_df_targets = 0.05, 0.04, 0.025, 0.01
pair_rate_grid_min_per_s = 5e7
pair_rate_grid_max_per_s = 3e9
pair_rate_grid_points = 13

[channel]
chi = 0.1
cutoff = 2

[run]
seed = 20260809
pass_duration_s = 300
"""


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario parameters in SI units."""

    altitude_m: float
    zenith_rad: float
    max_zenith_rad: float
    fov_annotation_rad: float
    coherence_time_s: float
    wavelength_m: float
    loss_components: LossComponents
    zenith_atmospheric_db: float
    tx_diameter_m: float
    fried_r0_m: float
    pointing_jitter_rad: float
    rx_aperture_m: float
    obscuration_fraction: float
    worst_beam_fwhm_m: float
    pair_production_per_s: float
    intrinsic_heralding: float
    ground_background_per_s: float
    space_noise_per_detector_per_s: float
    noise_distribution: str
    coincidence_window_s: float
    scintillation_index: float
    correlation_window_s: float
    apd_model: str
    operating_temp_c: float
    mission_years: float
    schedule: dict
    windows_per_condition: int
    sensitivity_window_s: float
    effective_coincidence_window_s: float
    confidence_sigmas: float
    delta_df_targets: tuple
    pair_rate_grid: tuple
    chi: float
    cutoff: int
    seed: int
    pass_duration_s: float
    sha256: str = ""

    @property
    def link_transmission(self) -> float:
        return 10.0 ** (-self.loss_components.total_db / 10.0)

    @property
    def ground_singles_per_s(self) -> float:
        return self.pair_production_per_s * self.intrinsic_heralding + self.ground_background_per_s

    def rate_model(self) -> RateModel:
        return RateModel(
            pair_production_rate=self.pair_production_per_s,
            intrinsic_heralding=self.intrinsic_heralding,
            link_transmission=self.link_transmission,
            ground_singles_rate=self.ground_singles_per_s,
            space_noise_per_detector=self.space_noise_per_detector_per_s,
            noise_distribution=self.noise_distribution,
            coincidence_window_s=self.coincidence_window_s,
        )

    def turbulence_model(self) -> TurbulenceModel:
        return TurbulenceModel(
            scintillation_index=self.scintillation_index,
            correlation_window_s=self.correlation_window_s,
        )

    def sensitivity_scenario(self) -> SensitivityScenario:
        return SensitivityScenario(
            rates=self.rate_model(),
            scintillation_index=self.scintillation_index,
            window_duration_s=self.sensitivity_window_s,
            windows_per_condition=self.windows_per_condition,
            confidence_sigmas=self.confidence_sigmas,
            effective_coincidence_window_s=self.effective_coincidence_window_s,
        )


def _get(parser, problems, section, key, cast=float, default=None):
    try:
        raw = parser.get(section, key)
    except (configparser.NoSectionError, configparser.NoOptionError):
        if default is not None:
            return default
        problems.append(f"[{section}] missing key {key!r}")
        return None
    try:
        return cast(raw)
    except ValueError:
        problems.append(f"[{section}] {key} = {raw!r} is not a valid {cast.__name__}")
        return None


def parse_config_text(text: str) -> ScenarioConfig:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        parser.read_file(io.StringIO(text))
    except configparser.Error as exc:
        raise ConfigValidationError([f"parse error: {exc}"]) from exc

    problems: list[str] = []
    g = lambda *a, **k: _get(parser, problems, *a, **k)

    altitude_km = g("geometry", "altitude_km")
    zenith_deg = g("geometry", "zenith_deg")
    max_zenith_deg = g("geometry", "max_zenith_deg")
    fov_deg = g("geometry", "fov_annotation_deg", default=22.0)
    coherence_ps = g("spectral", "coherence_time_ps")
    wavelength_nm = g("spectral", "wavelength_nm")
    atm_db = g("link", "atmospheric_db")
    clip_db = g("link", "clipping_db")
    point_db = g("link", "pointing_db")
    optics_db = g("link", "optics_db")
    zen_atm_db = g("link", "zenith_atmospheric_db")
    tx_cm = g("link", "tx_diameter_cm")
    r0_cm = g("link", "fried_r0_cm")
    jitter_urad = g("link", "pointing_jitter_urad")
    rx_cm = g("link", "rx_aperture_cm")
    obsc = g("link", "obscuration_fraction")
    beam_fwhm = g("link", "worst_beam_fwhm_m")
    pair_rate = g("rates", "pair_production_per_s")
    heralding = g("rates", "intrinsic_heralding")
    ground_bg = g("rates", "ground_background_per_s")
    space_noise = g("rates", "space_noise_per_detector_per_s")
    noise_dist = g("rates", "noise_distribution", cast=str, default="lognormal-modulated")
    coin_ns = g("rates", "coincidence_window_ns")
    si = g("turbulence", "scintillation_index")
    corr_ms = g("turbulence", "correlation_window_ms")
    apd = g("detector", "apd_model", cast=str)
    temp_c = g("detector", "operating_temp_c")
    mission_years = g("detector", "mission_years")
    schedule = {}
    for key, canonical in (
        ("dark_cal", "dark-cal"),
        ("background_cal", "background-cal"),
        ("link_cal", "link-cal"),
        ("fps", "FPS"),
        ("epps", "EPPS"),
        ("switching", "switching"),
    ):
        v = g("schedule", key)
        if v is not None:
            schedule[canonical] = v
    windows = g("sensitivity", "windows_per_condition", cast=int)
    sens_window = g("sensitivity", "window_s")
    eff_coin_ns = g("sensitivity", "effective_coincidence_window_ns")
    sigmas = g("sensitivity", "confidence_sigmas")
    targets_raw = g("sensitivity", "delta_df_targets", cast=str)
    grid_min = g("sensitivity", "pair_rate_grid_min_per_s")
    grid_max = g("sensitivity", "pair_rate_grid_max_per_s")
    grid_points = g("sensitivity", "pair_rate_grid_points", cast=int)
    chi = g("channel", "chi")
    cutoff = g("channel", "cutoff", cast=int)
    seed = g("run", "seed", cast=int)
    pass_duration = g("run", "pass_duration_s")

    targets = ()
    if targets_raw is not None:
        try:
            targets = tuple(float(t.strip()) for t in targets_raw.split(",") if t.strip())
        except ValueError:
            problems.append(f"[sensitivity] delta_df_targets = {targets_raw!r} is not a float list")

    if problems:
        raise ConfigValidationError(problems)

    # Guard checks, all collected before raising.
    if not 200.0 <= altitude_km <= 1000.0:
        problems.append(f"[geometry] altitude_km={altitude_km} outside [200, 1000]")
    if not 0.0 <= zenith_deg < 90.0:
        problems.append(f"[geometry] zenith_deg={zenith_deg} outside [0, 90)")
    if not 0.0 < max_zenith_deg <= 80.0:
        problems.append(f"[geometry] max_zenith_deg={max_zenith_deg} outside (0, 80]")
    if not 0.1 <= coherence_ps <= 10.0:
        problems.append(f"[spectral] coherence_time_ps={coherence_ps} outside [0.1, 10]")
    if wavelength_nm <= 0:
        problems.append("[spectral] wavelength_nm must be positive")
    for name, v in (
        ("atmospheric_db", atm_db),
        ("clipping_db", clip_db),
        ("pointing_db", point_db),
        ("optics_db", optics_db),
    ):
        if not 0.0 <= v <= 80.0:
            problems.append(f"[link] {name}={v} outside [0, 80]")
    if not 0.05 <= r0_cm / 100.0 <= 1.0:
        problems.append(f"[link] fried_r0_cm={r0_cm} outside [5, 100]")
    if not 0.0 <= obsc < 1.0:
        problems.append(f"[link] obscuration_fraction={obsc} outside [0, 1)")
    if pair_rate <= 0:
        problems.append("[rates] pair_production_per_s must be positive")
    if not 0.0 < heralding <= 1.0:
        problems.append(f"[rates] intrinsic_heralding={heralding} outside (0, 1]")
    if ground_bg < 0 or space_noise < 0:
        problems.append("[rates] background/noise rates must be >= 0")
    if noise_dist not in ("poisson", "lognormal-modulated"):
        problems.append(f"[rates] noise_distribution={noise_dist!r} unknown")
    if coin_ns <= 0:
        problems.append("[rates] coincidence_window_ns must be positive")
    if not 0.0 <= si <= 1.0:
        problems.append(f"[turbulence] scintillation_index={si} outside [0, 1]")
    if corr_ms <= 0:
        problems.append("[turbulence] correlation_window_ms must be positive")
    if apd not in ("SLiK", "C30921SH", "SAP500"):
        problems.append(f"[detector] apd_model={apd!r} not one of SLiK, C30921SH, SAP500")
    if not -100.0 <= temp_c <= 20.0:
        problems.append(f"[detector] operating_temp_c={temp_c} outside [-100, 20]")
    if mission_years < 0:
        problems.append("[detector] mission_years must be >= 0")
    sched_total = sum(schedule.values())
    if abs(sched_total - 1.0) > 1e-9:
        problems.append(f"[schedule] fractions sum to {sched_total}, expected 1.0")
    if any(v < 0 for v in schedule.values()):
        problems.append("[schedule] fractions must be >= 0")
    if windows < 1:
        problems.append("[sensitivity] windows_per_condition must be >= 1")
    if sens_window <= 0 or eff_coin_ns <= 0:
        problems.append("[sensitivity] window_s and effective_coincidence_window_ns must be positive")
    if not targets or any(not 0.0 < t < 1.0 for t in targets):
        problems.append("[sensitivity] delta_df_targets must be fractions in (0, 1)")
    if grid_min <= 0 or grid_max <= grid_min or grid_points < 2:
        problems.append("[sensitivity] pair rate grid must satisfy 0 < min < max, points >= 2")
    if not 0.0 <= chi <= 0.3:
        problems.append(f"[channel] chi={chi} outside [0, 0.3]")
    if cutoff < 2:
        problems.append("[channel] cutoff must be >= 2")
    if not 0 <= seed < 2**64:
        problems.append("[run] seed must be a 64-bit unsigned integer")
    if pass_duration < 10.0:
        problems.append("[run] pass_duration_s must be >= 10")

    if problems:
        raise ConfigValidationError(problems)

    grid = tuple(float(x) for x in np.geomspace(grid_min, grid_max, grid_points))
    return ScenarioConfig(
        altitude_m=altitude_km * 1e3,
        zenith_rad=math.radians(zenith_deg),
        max_zenith_rad=math.radians(max_zenith_deg),
        fov_annotation_rad=math.radians(fov_deg),
        coherence_time_s=coherence_ps * 1e-12,
        wavelength_m=wavelength_nm * 1e-9,
        loss_components=LossComponents(atm_db, clip_db, point_db, optics_db),
        zenith_atmospheric_db=zen_atm_db,
        tx_diameter_m=tx_cm / 100.0,
        fried_r0_m=r0_cm / 100.0,
        pointing_jitter_rad=jitter_urad * 1e-6,
        rx_aperture_m=rx_cm / 100.0,
        obscuration_fraction=obsc,
        worst_beam_fwhm_m=beam_fwhm,
        pair_production_per_s=pair_rate,
        intrinsic_heralding=heralding,
        ground_background_per_s=ground_bg,
        space_noise_per_detector_per_s=space_noise,
        noise_distribution=noise_dist,
        coincidence_window_s=coin_ns * 1e-9,
        scintillation_index=si,
        correlation_window_s=corr_ms * 1e-3,
        apd_model=apd,
        operating_temp_c=temp_c,
        mission_years=mission_years,
        schedule=schedule,
        windows_per_condition=windows,
        sensitivity_window_s=sens_window,
        effective_coincidence_window_s=eff_coin_ns * 1e-9,
        confidence_sigmas=sigmas,
        delta_df_targets=targets,
        pair_rate_grid=grid,
        chi=chi,
        cutoff=cutoff,
        seed=seed,
        pass_duration_s=pass_duration,
        sha256=hashlib.sha256(text.encode("utf-8")).hexdigest(),
    )


def load_config(path: str | Path | None = None) -> ScenarioConfig:
    """Load and validate a scenario file; None loads the built-in default."""
    if path is None:
        return parse_config_text(DEFAULT_CONFIG_TEXT)
    text = Path(path).read_text(encoding="utf-8")
    return parse_config_text(text)


def write_default_config(path: str | Path) -> None:
    Path(path).write_text(DEFAULT_CONFIG_TEXT, encoding="utf-8")
