"""Photon-counting statistics under atmospheric turbulence.

Count rates through the uplink are Poissonian with a multiplicative
log-normal intensity factor whose normalised variance is the scintillation
index.  This module provides the per-window Monte Carlo, arrival-time
cross-correlation histograms, heralding-efficiency estimators and the
noise-budget solver that determines how small a change in the decoherence
factor remains resolvable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidArgumentError, UndefinedEstimateError

WINDOW_SOURCES = ("EPPS", "FPS", "dark-cal", "background-cal", "link-cal")

# Fractions of each integration window spent per activity.
DEFAULT_SCHEDULE = {
    "dark-cal": 0.05,
    "background-cal": 0.15,
    "link-cal": 0.10,
    "FPS": 0.29,
    "EPPS": 0.40,
    "switching": 0.01,
}


@dataclass(frozen=True)
class TurbulenceModel:
    """Log-normal intensity modulation with unit mean.

    The scintillation index is the normalised intensity variance, so the
    underlying normal has sigma^2 = ln(1 + s_i).  The factor is constant
    over one correlation window and independent across windows.
    """

    scintillation_index: float
    correlation_window_s: float = 0.010

    def __post_init__(self):
        if not 0.0 <= self.scintillation_index <= 1.0:
            raise InvalidArgumentError(
                f"scintillation index {self.scintillation_index} outside guard [0, 1]"
            )
        if self.correlation_window_s <= 0:
            raise InvalidArgumentError("correlation window must be positive")


def lognormal_factor(scintillation_index: float, rng: np.random.Generator) -> float:
    """One mean-1 intensity factor; variance equals the scintillation index."""
    if scintillation_index < 0:
        raise InvalidArgumentError("scintillation index must be >= 0")
    if scintillation_index == 0:
        return 1.0
    sigma2 = math.log1p(scintillation_index)
    return float(rng.lognormal(mean=-0.5 * sigma2, sigma=math.sqrt(sigma2)))


@dataclass(frozen=True)
class RateModel:
    """Scenario count rates, all in events per second.

    ground_singles_rate is the full tag stream entering the coincidence
    search on the ground (detected partner photons plus ground background);
    space_noise_per_detector covers background light and dark counts for
    each of the two orbital detectors.
    """

    pair_production_rate: float
    intrinsic_heralding: float
    link_transmission: float
    ground_singles_rate: float
    space_noise_per_detector: float
    noise_distribution: str = "lognormal-modulated"
    space_detectors: int = 2
    coincidence_window_s: float = 2e-9

    def __post_init__(self):
        for name in (
            "pair_production_rate",
            "ground_singles_rate",
            "space_noise_per_detector",
        ):
            if getattr(self, name) < 0:
                raise InvalidArgumentError(f"{name} must be >= 0")
        if not 0.0 < self.intrinsic_heralding <= 1.0:
            raise InvalidArgumentError("intrinsic heralding must lie in (0, 1]")
        if not 0.0 < self.link_transmission <= 1.0:
            raise InvalidArgumentError("link transmission must lie in (0, 1]")
        if self.noise_distribution not in ("poisson", "lognormal-modulated"):
            raise InvalidArgumentError(
                f"noise_distribution must be 'poisson' or 'lognormal-modulated', "
                f"got {self.noise_distribution!r}"
            )
        if self.coincidence_window_s <= 0:
            raise InvalidArgumentError("coincidence window must be positive")

    @property
    def space_signal_rate(self) -> float:
        return self.pair_production_rate * self.link_transmission

    @property
    def space_noise_rate(self) -> float:
        return self.space_detectors * self.space_noise_per_detector

    def detected_pair_rate(self, df: float = 1.0) -> float:
        return self.space_signal_rate * self.intrinsic_heralding * df


@dataclass(frozen=True)
class CountRecord:
    window_start_s: float
    duration_s: float
    source: str
    singles_ground: int
    singles_space: int
    coincidences: int
    accidentals: int
    turbulence_factor: float

    def __post_init__(self):
        if self.source not in WINDOW_SOURCES:
            raise InvalidArgumentError(f"unknown source {self.source!r}")
        for name in ("singles_ground", "singles_space", "coincidences", "accidentals"):
            if getattr(self, name) < 0:
                raise InvalidArgumentError(f"{name} must be >= 0")
        cap = min(self.singles_ground, self.singles_space) + self.accidentals
        if self.coincidences > cap:
            raise InvalidArgumentError(
                f"coincidences {self.coincidences} exceed min(singles) + accidentals {cap}"
            )


def accidental_rate(s1_rate: float, s2_rate: float, coincidence_window_s: float) -> float:
    """Uncorrelated two-detector coincidence rate S1*S2*tau."""
    return s1_rate * s2_rate * coincidence_window_s


def _window_factors(turb: TurbulenceModel, duration: float, rng, factors=None):
    """(factor, dt) blocks covering the window, one factor per correlation window."""
    n_full, rem = divmod(duration, turb.correlation_window_s)
    blocks = [turb.correlation_window_s] * int(n_full)
    if rem > 1e-12:
        blocks.append(rem)
    if factors is None:
        factors = [lognormal_factor(turb.scintillation_index, rng) for _ in blocks]
    else:
        if len(factors) < len(blocks):
            raise InvalidArgumentError("not enough precomputed turbulence factors")
        factors = list(factors[: len(blocks)])
    return list(zip(factors, blocks))


def simulate_window(
    rates: RateModel,
    turb: TurbulenceModel,
    duration_s: float,
    source: str,
    rng: np.random.Generator,
    df: float = 1.0,
    window_start_s: float = 0.0,
    turbulence_factors=None,
) -> CountRecord:
    """Sample one integration window of counts.

    A fresh log-normal factor applies per turbulence correlation window;
    within a block the uplinked signal (and, in the worst case, the orbital
    noise) scales with it while ground counts stay Poissonian.  Decohered
    pairs still arrive as singles, so the pair-rate factor df never touches
    the singles rates.
    """
    if duration_s <= 0:
        raise InvalidArgumentError("duration must be positive")
    if source not in WINDOW_SOURCES:
        raise InvalidArgumentError(f"unknown source {source!r}")

    noise_lnd = rates.noise_distribution == "lognormal-modulated"
    signal_on = source in ("EPPS", "FPS", "link-cal")
    pairs_on = source in ("EPPS", "FPS")
    shutter_closed = source == "dark-cal"
    uplink_blocked = source in ("dark-cal", "background-cal")

    s_ground = s_space = pairs = acc = 0
    f_weighted = 0.0
    for f, dt in _window_factors(turb, duration_s, rng, turbulence_factors):
        f_weighted += f * dt
        signal = rates.space_signal_rate * f if (signal_on and not uplink_blocked) else 0.0
        noise = 0.0 if shutter_closed else rates.space_noise_rate * (f if noise_lnd else 1.0)
        space_rate = signal + noise
        ground_rate = rates.ground_singles_rate if not shutter_closed else 0.0
        acc_rate = accidental_rate(space_rate, ground_rate, rates.coincidence_window_s)

        s_space += int(rng.poisson(space_rate * dt))
        s_ground += int(rng.poisson(ground_rate * dt))
        acc += int(rng.poisson(acc_rate * dt))
        if pairs_on:
            pairs += int(rng.poisson(rates.detected_pair_rate(df) * f * dt))

    pairs = min(pairs, max(0, min(s_ground, s_space)))
    return CountRecord(
        window_start_s=window_start_s,
        duration_s=duration_s,
        source=source,
        singles_ground=s_ground,
        singles_space=s_space,
        coincidences=pairs + acc,
        accidentals=acc,
        turbulence_factor=f_weighted / duration_s,
    )


def heralding_efficiency(coincidences: float, singles1: float, singles2: float) -> float:
    """Pair fraction C / sqrt(S1 S2)."""
    if singles1 <= 0 or singles2 <= 0:
        raise UndefinedEstimateError("heralding efficiency undefined for zero singles")
    return coincidences / math.sqrt(singles1 * singles2)


def record_heralding(record: CountRecord, floor_subtracted: bool = False) -> float:
    """Heralding efficiency of one window.

    With floor_subtracted the accidental background is removed from the
    coincidences first, the way a pair count is read off a correlation
    histogram as the area above the flat floor.
    """
    c = record.coincidences
    if floor_subtracted:
        c = max(0, c - record.accidentals)
    return heralding_efficiency(c, record.singles_space, record.singles_ground)


def heralding_standard_error(
    records,
    scintillation_index: float | None = None,
    method: str = "propagated",
) -> float:
    """Standard error of the mean heralding efficiency over the records.

    ``propagated`` combines per-count shot noise with the common log-normal
    modulation of the space-side counts: the efficiency scales as the square
    root of the shared intensity factor, contributing ln(1+s_i)/4 of
    relative variance per window on top of the Poisson terms.
    ``empirical`` is the standard deviation of per-window estimates over
    sqrt(windows).  When the scintillation index is not given it is
    estimated from the recorded turbulence factors.
    """
    records = list(records)
    if len(records) < 2:
        raise InvalidArgumentError("need at least two windows to estimate a standard error")
    if scintillation_index is None:
        scintillation_index = si_from_records(records)
    effs = np.array([record_heralding(r) for r in records])
    if method == "empirical":
        return float(np.std(effs, ddof=1) / math.sqrt(len(effs)))
    if method != "propagated":
        raise InvalidArgumentError("method must be 'propagated' or 'empirical'")
    c = float(np.mean([r.coincidences for r in records]))
    s1 = float(np.mean([r.singles_space for r in records]))
    s2 = float(np.mean([r.singles_ground for r in records]))
    if min(c, s1, s2) <= 0:
        raise UndefinedEstimateError("propagated SE undefined for zero mean counts")
    rel_var = 1.0 / c + 1.0 / (4.0 * s1) + 1.0 / (4.0 * s2)
    rel_var += math.log1p(scintillation_index) / 4.0
    mean_eff = float(np.mean(effs))
    return mean_eff * math.sqrt(rel_var / len(records))


def bin_collision_probability(local_rate: float, bin_width_s: float) -> float:
    """Probability that a second event lands in the same time bin."""
    if local_rate < 0 or bin_width_s < 0:
        raise InvalidArgumentError("rate and bin width must be >= 0")
    return -math.expm1(-local_rate * bin_width_s)


@dataclass(frozen=True)
class G2Histogram:
    """Cross-correlation histogram of two detectors' arrival-time offsets."""

    bin_width_s: float
    span_s: float
    bins: np.ndarray
    peak_center_s: float
    peak_sigma_s: float

    @property
    def bin_centers_s(self) -> np.ndarray:
        edges = np.arange(self.bins.size + 1) * self.bin_width_s - self.span_s / 2.0
        return (edges[:-1] + edges[1:]) / 2.0

    @property
    def total_events(self) -> int:
        return int(np.sum(self.bins))


def _fit_peak(centers: np.ndarray, bins: np.ndarray) -> tuple[float, float]:
    """Gaussian-plus-floor fit; returns (center, sigma), zeros if featureless."""
    from scipy.optimize import curve_fit

    floor0 = float(np.median(bins))
    excess = bins.astype(float) - floor0
    peak_idx = int(np.argmax(bins))
    amp0 = float(excess[peak_idx])
    if amp0 <= 5.0 * math.sqrt(floor0 + 1.0):
        return 0.0, 0.0
    mask = excess > 0.25 * amp0
    sigma0 = max(
        float(np.sqrt(np.sum((centers[mask] - centers[peak_idx]) ** 2 * excess[mask]
                             / np.sum(excess[mask])))),
        centers[1] - centers[0],
    )

    def model(t, amp, center, sigma, floor):
        return amp * np.exp(-0.5 * ((t - center) / sigma) ** 2) + floor

    try:
        popt, _ = curve_fit(
            model,
            centers,
            bins.astype(float),
            p0=(amp0, centers[peak_idx], sigma0, floor0),
            maxfev=10000,
        )
    except RuntimeError:
        return float(centers[peak_idx]), sigma0
    return float(popt[1]), abs(float(popt[2]))


def g2_histogram(
    rates: RateModel,
    jitter_space_sigma_s: float,
    jitter_ground_sigma_s: float,
    bin_width_s: float,
    span_s: float,
    duration_s: float,
    rng: np.random.Generator,
    df: float = 1.0,
    peak_center_s: float = 0.0,
) -> G2Histogram:
    """Synthesise the pair peak plus accidental floor.

    True pairs contribute a Gaussian peak whose width is both detectors'
    jitter in quadrature and whose area is the detected pair count scaled by
    df; uncorrelated tags contribute a flat floor at the accidental rate.
    Decohered pairs spread over the whole delay axis and are absorbed into
    the (negligible per-bin) floor.
    """
    if bin_width_s < 10e-12:
        raise InvalidArgumentError("bin width must be >= 10 ps")
    if bin_width_s > span_s / 10.0:
        raise InvalidArgumentError("bin width must be <= span/10")
    n_bins = int(round(span_s / bin_width_s))
    sigma = math.hypot(jitter_space_sigma_s, jitter_ground_sigma_s)

    n_pairs = int(rng.poisson(rates.detected_pair_rate(df) * duration_s))
    deltas = rng.normal(peak_center_s, sigma, size=n_pairs)
    counts, _ = np.histogram(deltas, bins=n_bins, range=(-span_s / 2.0, span_s / 2.0))

    floor_per_bin = accidental_rate(
        rates.space_signal_rate + rates.space_noise_rate,
        rates.ground_singles_rate,
        bin_width_s,
    ) * duration_s
    counts = counts + rng.poisson(floor_per_bin, size=n_bins)

    edges = np.arange(n_bins + 1) * bin_width_s - span_s / 2.0
    centers = (edges[:-1] + edges[1:]) / 2.0
    fit_center, fit_sigma = _fit_peak(centers, counts)
    return G2Histogram(bin_width_s, span_s, counts, fit_center, fit_sigma)


def g2_peak_area(hist: G2Histogram, n_sigmas: float = 4.0) -> float:
    """Floor-subtracted counts within +-n_sigmas of the fitted peak."""
    centers = hist.bin_centers_s
    mask = np.abs(centers - hist.peak_center_s) <= n_sigmas * hist.peak_sigma_s
    if not np.any(mask) or np.all(mask):
        return float(np.sum(hist.bins))
    floor = float(np.median(hist.bins[~mask]))
    return float(np.sum(hist.bins[mask]) - floor * np.count_nonzero(mask))


def g2_floor_level(hist: G2Histogram, n_sigmas: float = 4.0) -> float:
    centers = hist.bin_centers_s
    mask = np.abs(centers - hist.peak_center_s) > n_sigmas * hist.peak_sigma_s
    if not np.any(mask):
        return 0.0
    return float(np.mean(hist.bins[mask]))


# ---------------------------------------------------------------------------
# Sensitivity: which change in the decoherence factor is resolvable?
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SensitivityScenario:
    """Inputs of the noise-budget solver.

    The comparison is between two otherwise identical measurement
    conditions, each integrated for ``windows_per_condition`` windows.  The
    interleaved control source cancels the common turbulent modulation of
    the pair signal, so the residual per-window variance model keeps the
    log-normal term only on what does not ratio out: the noise counts on
    the orbital detectors and the accidental background they feed.  The
    effective accidental window and the window count are calibration
    constants of this simplified error model; together they pin the solver
    to the quoted tolerable-noise levels.  This is the single largest
    modelling choice of the toolkit; the Monte Carlo windows provide the
    empirical cross-check.
    """

    rates: RateModel
    scintillation_index: float = 0.05
    window_duration_s: float = 1.0
    windows_per_condition: int = 4
    confidence_sigmas: float = 1.0
    effective_coincidence_window_s: float = 2e-10

    def __post_init__(self):
        if self.scintillation_index < 0:
            raise InvalidArgumentError("scintillation index must be >= 0")
        if self.window_duration_s <= 0 or self.windows_per_condition < 1:
            raise InvalidArgumentError("need a positive window duration and count")
        if self.effective_coincidence_window_s <= 0:
            raise InvalidArgumentError("effective coincidence window must be positive")


def _per_window_moments(sc: SensitivityScenario, noise_per_detector: float):
    """Mean signal coincidences and the variance entering the gap test."""
    r = sc.rates
    tw = sc.window_duration_s
    tau = sc.effective_coincidence_window_s
    si = sc.scintillation_index if r.noise_distribution == "lognormal-modulated" else 0.0

    noise = r.space_detectors * noise_per_detector
    s1 = (r.space_signal_rate + noise) * tw
    s2 = r.ground_singles_rate * tw
    c_sig = r.detected_pair_rate() * tw
    acc = accidental_rate(r.space_signal_rate + noise, r.ground_singles_rate, tau) * tw
    acc_noise = accidental_rate(noise, r.ground_singles_rate, tau) * tw
    c_tot = c_sig + acc

    noise_counts = noise * tw
    var_c = c_tot + si * acc_noise**2
    var_s1 = s1 + si * noise_counts**2
    var_s2 = s2
    sigma2 = var_c + c_tot**2 * var_s1 / (4.0 * s1 * s1) + c_tot**2 * var_s2 / (4.0 * s2 * s2)
    return c_sig, sigma2


def resolvable(
    delta_df: float,
    scenario: SensitivityScenario,
    noise_per_detector: float | None = None,
    confidence_sigmas: float | None = None,
) -> bool:
    """True when a decoherence-factor change delta_df separates at the
    requested significance under the scenario's integration time."""
    if not 0.0 < delta_df < 1.0:
        raise InvalidArgumentError("delta_df must lie in (0, 1)")
    n = (
        noise_per_detector
        if noise_per_detector is not None
        else scenario.rates.space_noise_per_detector
    )
    k = confidence_sigmas if confidence_sigmas is not None else scenario.confidence_sigmas
    c_sig, sigma2 = _per_window_moments(scenario, n)
    if c_sig <= 0:
        return False
    gap = delta_df * c_sig
    threshold = k * math.sqrt(2.0 * sigma2 / scenario.windows_per_condition)
    return gap >= threshold


@dataclass(frozen=True)
class MaxNoiseResult:
    noise_per_detector: float
    resolvable_at_zero: bool


def max_tolerable_noise(
    delta_df: float,
    scenario: SensitivityScenario,
    rel_tol: float = 0.01,
    noise_cap: float = 1e9,
    *,
    pair_production_rate: float | None = None,
    loss_db: float | None = None,
    scintillation_index: float | None = None,
) -> MaxNoiseResult:
    """Largest per-detector noise rate that keeps delta_df resolvable.

    Bisection between zero noise and a doubling upper bracket; returns 0
    with the flag cleared when the change is unresolvable even noise-free.
    The keyword overrides rebuild the scenario around a different pair
    production rate, link loss or scintillation index.
    """
    if pair_production_rate is not None or loss_db is not None or scintillation_index is not None:
        rates = scenario.rates
        new_rate = pair_production_rate if pair_production_rate is not None else rates.pair_production_rate
        rates = replace(
            rates,
            pair_production_rate=new_rate,
            ground_singles_rate=new_rate * rates.intrinsic_heralding + _ground_background(rates),
            link_transmission=(
                10.0 ** (-loss_db / 10.0) if loss_db is not None else rates.link_transmission
            ),
        )
        scenario = replace(
            scenario,
            rates=rates,
            scintillation_index=(
                scintillation_index
                if scintillation_index is not None
                else scenario.scintillation_index
            ),
        )
    if not resolvable(delta_df, scenario, 0.0):
        return MaxNoiseResult(0.0, False)
    lo, hi = 0.0, 1000.0
    while resolvable(delta_df, scenario, hi):
        lo = hi
        hi *= 2.0
        if hi > noise_cap:
            return MaxNoiseResult(noise_cap, True)
    while hi - lo > rel_tol * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        if resolvable(delta_df, scenario, mid):
            lo = mid
        else:
            hi = mid
    return MaxNoiseResult(0.5 * (lo + hi), True)


def sensitivity_curve(
    scenario: SensitivityScenario,
    pair_rates,
    delta_dfs=(0.05, 0.04, 0.025, 0.01),
):
    """Maximum tolerable noise vs pair production rate, one curve per delta."""
    rows = []
    for rate in pair_rates:
        row = {"pair_production_rate": float(rate)}
        rates = replace(
            scenario.rates,
            pair_production_rate=float(rate),
            ground_singles_rate=float(rate) * scenario.rates.intrinsic_heralding
            + _ground_background(scenario.rates),
        )
        sc = replace(scenario, rates=rates)
        for delta in delta_dfs:
            row[f"max_noise_delta_{delta}"] = max_tolerable_noise(delta, sc).noise_per_detector
        rows.append(row)
    return rows


def _ground_background(rates: RateModel) -> float:
    """Ground tag stream not attributable to detected partner photons."""
    return max(
        0.0,
        rates.ground_singles_rate - rates.pair_production_rate * rates.intrinsic_heralding,
    )


# ---------------------------------------------------------------------------
# Full pass simulation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurvePoint:
    zenith_mid_deg: float
    heralding: float
    se_propagated: float
    se_empirical: float
    windows: int


@dataclass(frozen=True)
class PassSimResult:
    records: tuple[CountRecord, ...]
    epps_curve: tuple[CurvePoint, ...]
    fps_curve: tuple[CurvePoint, ...]
    schedule_counts: dict


def _schedule_sequence(n_windows: int, schedule: dict) -> list[str]:
    """Deterministic interleaving matching the fractions within one window."""
    total = sum(schedule.values())
    if abs(total - 1.0) > 1e-9:
        raise InvalidArgumentError(f"schedule fractions sum to {total}, expected 1")
    cats = list(schedule)
    assigned = {c: 0 for c in cats}
    seq = []
    for i in range(1, n_windows + 1):
        deficits = {c: schedule[c] * i - assigned[c] for c in cats}
        pick = max(cats, key=lambda c: deficits[c])
        assigned[pick] += 1
        seq.append(pick)
    return seq


def _curve(records, zenith_by_index, bins_deg) -> tuple[CurvePoint, ...]:
    points = []
    for lo, hi in zip(bins_deg[:-1], bins_deg[1:]):
        sel = [r for i, r in records if lo <= zenith_by_index[i] < hi]
        if len(sel) < 2:
            continue
        effs = [record_heralding(r, floor_subtracted=True) for r in sel]
        points.append(
            CurvePoint(
                zenith_mid_deg=0.5 * (lo + hi),
                heralding=float(np.mean(effs)),
                se_propagated=heralding_standard_error(sel, si_from_records(sel)),
                se_empirical=float(np.std(effs, ddof=1) / math.sqrt(len(effs))),
                windows=len(sel),
            )
        )
    return tuple(points)


def si_from_records(records) -> float:
    """Scintillation index implied by the recorded turbulence factors."""
    factors = np.array([r.turbulence_factor for r in records])
    if factors.size < 2:
        return 0.0
    return float(max(0.0, np.var(factors, ddof=1)))


def simulate_pass(
    rates: RateModel,
    turb: TurbulenceModel,
    pass_duration_s: float,
    df_of_time,
    rng: np.random.Generator,
    schedule: dict | None = None,
    zenith_of_time=None,
    window_duration_s: float = 1.0,
    curve_bins: int = 10,
) -> PassSimResult:
    """Simulate scheduled integration windows over one pass.

    df_of_time(t) gives the pair-correlation factor applied to entangled
    windows (control windows always use 1); zenith_of_time(t), when given,
    labels the heralding curves.  Turbulence factors are drawn per
    correlation window of the absolute pass timeline, so interleaved
    sources experience the same atmosphere.
    """
    schedule = dict(schedule or DEFAULT_SCHEDULE)
    n_windows = int(pass_duration_s // window_duration_s)
    if n_windows < 1:
        raise InvalidArgumentError("pass too short for a single window")
    seq = _schedule_sequence(n_windows, schedule)

    blocks_per_window = max(1, int(round(window_duration_s / turb.correlation_window_s)))
    all_factors = [
        lognormal_factor(turb.scintillation_index, rng)
        for _ in range(blocks_per_window * n_windows)
    ]

    records = []
    epps, fps = [], []
    zeniths = {}
    for i, source in enumerate(seq):
        t0 = i * window_duration_s
        t_mid = t0 + window_duration_s / 2.0
        zeniths[i] = math.degrees(zenith_of_time(t_mid)) if zenith_of_time else 0.0
        if source == "switching":
            continue
        factors = all_factors[i * blocks_per_window : (i + 1) * blocks_per_window]
        df = df_of_time(t_mid) if source == "EPPS" else 1.0
        rec = simulate_window(
            rates,
            turb,
            window_duration_s,
            source,
            rng,
            df=df,
            window_start_s=t0,
            turbulence_factors=factors,
        )
        records.append(rec)
        if source == "EPPS":
            epps.append((i, rec))
        elif source == "FPS":
            fps.append((i, rec))

    zen_values = [zeniths[i] for i, _ in epps + fps] or [0.0]
    lo, hi = min(zen_values), max(zen_values) + 1e-9
    bins = np.linspace(lo, hi, curve_bins + 1)
    counts = {c: sum(1 for s in seq if s == c) for c in schedule}
    return PassSimResult(
        records=tuple(records),
        epps_curve=_curve(epps, zeniths, bins),
        fps_curve=_curve(fps, zeniths, bins),
        schedule_counts=counts,
    )


def data_volume(
    tag_rate_per_s: float,
    bytes_per_tag: float,
    duty_cycle: float,
    mission_seconds: float,
) -> float:
    """Stored bytes for a tag stream recorded at the given duty cycle."""
    for name, v in (
        ("tag_rate_per_s", tag_rate_per_s),
        ("bytes_per_tag", bytes_per_tag),
        ("duty_cycle", duty_cycle),
        ("mission_seconds", mission_seconds),
    ):
        if v < 0:
            raise InvalidArgumentError(f"{name} must be >= 0")
    return tag_rate_per_s * bytes_per_tag * duty_cycle * mission_seconds
