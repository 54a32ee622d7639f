"""quest-sim command line: deterministic scenario runs emitting CSV/JSON.

Exit codes: 0 success, 1 configuration/validation error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import counting_stats as stats
from . import detector_aging as aging
from . import event_channel as channel
from . import link_budget as budget
from . import spacetime
from .config import ScenarioConfig, load_config
from .errors import ConfigValidationError, NumericError, QuestSimError
from .manifest import build_manifest


def _write_rows(path: Path, fieldnames, rows, fmt: str) -> list[Path]:
    """Write rows as CSV (LF, UTF-8, '.' decimals) and/or a JSON mirror."""
    written = []
    if fmt in ("csv", "both"):
        with open(path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        written.append(path)
    if fmt in ("json", "both"):
        jpath = path.with_suffix(".json")
        jpath.write_text(json.dumps(list(rows), indent=2) + "\n", encoding="utf-8")
        written.append(jpath)
    return written


def _decoherence_vs(cfg: ScenarioConfig, altitudes_m=None, zeniths_rad=None, coherence_s=None):
    spectral = spacetime.PhotonSpectralParams(cfg.coherence_time_s, cfg.wavelength_m)
    if coherence_s is not None:
        rows = []
        geom = spacetime.LinkGeometry(cfg.altitude_m, cfg.zenith_rad)
        delta_t = spacetime.time_dilation(geom)
        for dt in coherence_s:
            rows.append(
                {
                    "coherence_time_ps": dt * 1e12,
                    "decoherence_factor": spacetime.event_overlap(delta_t, dt),
                }
            )
        return rows
    if altitudes_m is not None:
        return [
            {
                "altitude_km": h / 1e3,
                "decoherence_factor": spacetime.event_overlap(
                    spacetime.time_dilation(spacetime.LinkGeometry(h, cfg.zenith_rad)), spectral
                ),
            }
            for h in altitudes_m
        ]
    rows = []
    for theta in zeniths_rad:
        geom = spacetime.LinkGeometry(cfg.altitude_m, theta)
        rows.append(
            {
                "zenith_deg": math.degrees(theta),
                "decoherence_factor": spacetime.event_overlap(
                    spacetime.time_dilation(geom), spectral
                ),
                "within_fov": int(theta <= cfg.fov_annotation_rad),
            }
        )
    return rows


def cmd_overlap_curve(cfg, out, fmt, seed):
    grid = np.linspace(0.3e-12, 3e-12, 55)
    rows = _decoherence_vs(cfg, coherence_s=grid)
    return _write_rows(out / "overlap_curve.csv", list(rows[0]), rows, fmt)


def cmd_altitude_curve(cfg, out, fmt, seed):
    grid = np.linspace(300e3, 500e3, 81)
    rows = _decoherence_vs(cfg, altitudes_m=grid)
    return _write_rows(out / "altitude_curve.csv", list(rows[0]), rows, fmt)


def cmd_zenith_curve(cfg, out, fmt, seed):
    grid = np.linspace(0.0, cfg.max_zenith_rad, 75)
    rows = _decoherence_vs(cfg, zeniths_rad=grid)
    return _write_rows(out / "zenith_curve.csv", list(rows[0]), rows, fmt)


def cmd_link_budget(cfg, out, fmt, seed):
    derived_atm = budget.atmospheric_loss_db(cfg.max_zenith_rad, cfg.zenith_atmospheric_db)
    beam_e2_diam = budget.fwhm_to_e2_diameter(cfg.worst_beam_fwhm_m)
    derived_clip = budget.clipping_loss_db(beam_e2_diam, cfg.rx_aperture_m, cfg.obscuration_fraction)
    slant = spacetime.slant_range(cfg.altitude_m, cfg.max_zenith_rad)
    derived_point = budget.pointing_loss_db(
        cfg.pointing_jitter_rad, slant, beam_e2_diam / 2.0
    )
    derived_optics = budget.optics_loss_db(0.6, 0.7, 0.6, 0.7)
    comp = cfg.loss_components
    rows = [
        {"component": "atmospheric", "budget_db": comp.atmospheric_db, "model_db": derived_atm},
        {"component": "clipping", "budget_db": comp.clipping_db, "model_db": derived_clip},
        {"component": "pointing", "budget_db": comp.pointing_db, "model_db": derived_point},
        {"component": "optics", "budget_db": comp.optics_db, "model_db": derived_optics},
        {
            "component": "total",
            "budget_db": comp.total_db,
            "model_db": derived_atm + derived_clip + derived_point + derived_optics,
        },
    ]
    total = budget.total_link_budget(comp)
    print(f"{'component':<12} {'budget dB':>10} {'model dB':>10}")
    for r in rows:
        print(f"{r['component']:<12} {r['budget_db']:>10.2f} {r['model_db']:>10.2f}")
    print(f"linear transmission: {total.transmission:.4e}")
    return _write_rows(out / "link_budget.csv", list(rows[0]), rows, fmt)


def cmd_pass_sim(cfg, out, fmt, seed):
    rng = np.random.default_rng(seed)
    profile = spacetime.overhead_pass_profile(cfg.altitude_m, cfg.max_zenith_rad, samples=201)
    spectral = spacetime.PhotonSpectralParams(cfg.coherence_time_s, cfg.wavelength_m)
    duration = min(cfg.pass_duration_s, profile.duration_s)
    half = duration / 2.0

    def zenith_of_time(t):
        return profile.zenith_at(t - half)

    def df_of_time(t):
        geom = spacetime.LinkGeometry(cfg.altitude_m, min(zenith_of_time(t), math.radians(79.9)))
        return spacetime.event_overlap(spacetime.time_dilation(geom), spectral)

    result = stats.simulate_pass(
        cfg.rate_model(),
        cfg.turbulence_model(),
        duration,
        df_of_time,
        rng,
        schedule=cfg.schedule,
        zenith_of_time=zenith_of_time,
    )
    rec_rows = [
        {
            "window_start_s": r.window_start_s,
            "duration_s": r.duration_s,
            "source": r.source,
            "singles_ground": r.singles_ground,
            "singles_space": r.singles_space,
            "coincidences": r.coincidences,
            "accidentals": r.accidentals,
            "turbulence_factor": r.turbulence_factor,
        }
        for r in result.records
    ]
    curve_rows = []
    for source, curve in (("EPPS", result.epps_curve), ("FPS", result.fps_curve)):
        for p in curve:
            curve_rows.append(
                {
                    "source": source,
                    "zenith_mid_deg": p.zenith_mid_deg,
                    "heralding": p.heralding,
                    "se_propagated": p.se_propagated,
                    "se_empirical": p.se_empirical,
                    "windows": p.windows,
                }
            )
    paths = _write_rows(out / "pass_windows.csv", list(rec_rows[0]), rec_rows, fmt)
    paths += _write_rows(out / "pass_heralding_curve.csv", list(curve_rows[0]), curve_rows, fmt)

    # Arrival-time cross-correlation at culmination for both sources.
    df_peak = df_of_time(half)
    hists = {
        "epps": stats.g2_histogram(
            cfg.rate_model(), 2e-9, 0.2e-9, 0.1e-9, 100e-9, 60.0, rng, df=df_peak
        ),
        "fps": stats.g2_histogram(
            cfg.rate_model(), 2e-9, 0.2e-9, 0.1e-9, 100e-9, 60.0, rng, df=1.0
        ),
    }
    centers = hists["epps"].bin_centers_s
    g2_rows = [
        {
            "bin_center_ns": centers[i] * 1e9,
            "count_epps": int(hists["epps"].bins[i]),
            "count_fps": int(hists["fps"].bins[i]),
        }
        for i in range(centers.size)
    ]
    paths += _write_rows(out / "pass_g2_histogram.csv", list(g2_rows[0]), g2_rows, fmt)
    return paths


def cmd_sensitivity(cfg, out, fmt, seed):
    scenario = cfg.sensitivity_scenario()
    rows = stats.sensitivity_curve(scenario, cfg.pair_rate_grid, cfg.delta_df_targets)
    return _write_rows(out / "sensitivity.csv", list(rows[0]), rows, fmt)


def cmd_detector_aging(cfg, out, fmt, seed):
    models = aging.builtin_models()
    table_rows = []
    for name, model in models.items():
        for target, temp in aging.table_temperatures(model).items():
            table_rows.append(
                {"apd_model": name, "target_hz": target, "temperature_c": temp}
            )
    scenario = cfg.sensitivity_scenario()
    model = models[cfg.apd_model]

    def noise_budget(pair_rate):
        rates = stats.RateModel(
            pair_production_rate=pair_rate,
            intrinsic_heralding=cfg.intrinsic_heralding,
            link_transmission=cfg.link_transmission,
            ground_singles_rate=pair_rate * cfg.intrinsic_heralding + cfg.ground_background_per_s,
            space_noise_per_detector=cfg.space_noise_per_detector_per_s,
            noise_distribution=cfg.noise_distribution,
            coincidence_window_s=cfg.coincidence_window_s,
        )
        sc = stats.SensitivityScenario(
            rates=rates,
            scintillation_index=cfg.scintillation_index,
            window_duration_s=cfg.sensitivity_window_s,
            windows_per_condition=cfg.windows_per_condition,
            confidence_sigmas=cfg.confidence_sigmas,
            effective_coincidence_window_s=cfg.effective_coincidence_window_s,
        )
        return stats.max_tolerable_noise(0.04, sc).noise_per_detector

    months = np.arange(0, 25, 2)
    pair_rates = (2e8, 3e8, cfg.pair_production_per_s, 1e9)
    aging_rows = []
    for m in months:
        t = m / 12.0 * aging.SECONDS_PER_YEAR
        row = {
            "mission_months": int(m),
            "dark_count_hz": aging.dark_count_rate(
                model, cfg.operating_temp_c, aging.fluence_at_time(t)
            ),
        }
        for rate in pair_rates:
            row[f"allowance_per_s_at_{rate:.0e}"] = aging.max_background_over_mission(
                t, rate, cfg.operating_temp_c, model, noise_budget
            )
        aging_rows.append(row)
    paths = _write_rows(out / "apd_table.csv", list(table_rows[0]), table_rows, fmt)
    paths += _write_rows(out / "background_allowance.csv", list(aging_rows[0]), aging_rows, fmt)
    return paths


def cmd_channel_verify(cfg, out, fmt, seed):
    rows = channel.oracle_vs_analytic_table(cutoff=cfg.cutoff)
    worst = max(r["deviation"] / r["bound_5chi4"] for r in rows)
    singles_spread = []
    for chi in (0.01, 0.05, 0.1):
        runs = [
            channel.run_event_channel("spdc", channel.ChannelParams(xi=x), chi=chi, cutoff=cfg.cutoff)
            for x in (0.1, 0.5, 0.9, 1.0)
        ]
        vals = [r.singles["1"] for r in runs]
        singles_spread.append(max(vals) - min(vals))
    verdict = "PASS" if worst <= 1.0 and max(singles_spread) <= 1e-12 else "FAIL"
    print(
        f"{verdict}: worst coincidence deviation {worst:.3f} of the 5|chi|^4 bound; "
        f"singles spread over the overlap grid {max(singles_spread):.3e}"
    )
    return _write_rows(out / "channel_verify.csv", list(rows[0]), rows, fmt)


COMMANDS = {
    "overlap-curve": cmd_overlap_curve,
    "altitude-curve": cmd_altitude_curve,
    "zenith-curve": cmd_zenith_curve,
    "link-budget": cmd_link_budget,
    "pass-sim": cmd_pass_sim,
    "sensitivity": cmd_sensitivity,
    "detector-aging": cmd_detector_aging,
    "channel-verify": cmd_channel_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quest-sim",
        description="Deterministic feasibility simulations for a ground-to-orbit entanglement link",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None, help="scenario file (default: built-in)")
        p.add_argument("--seed", type=int, default=None, help="override the config seed")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory")
        p.add_argument("--format", choices=("csv", "json", "both"), default="csv")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigValidationError as exc:
        print(exc, file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return 1
    seed = args.seed if args.seed is not None else cfg.seed
    args.out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()
    try:
        outputs = COMMANDS[args.command](cfg, args.out, args.format, seed)
    except (NumericError, FloatingPointError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2
    except QuestSimError as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 1
    manifest = build_manifest(
        args.command, cfg.sha256, seed, outputs, time.perf_counter() - start
    )
    manifest.write(args.out / f"{args.command.replace('-', '_')}_manifest.json")
    for p in outputs:
        print(f"wrote {p}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
