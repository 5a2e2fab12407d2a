"""
Command-line front end: one subcommand per study
"""
import json
import time
import argparse
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from bouncer import (
    BouncerSpectrum,
    classical_turning_height,
    required_gradient,
    resonant_velocity,
    transition_frequency,
    z_matrix,
)
from bouncer.constants import MM, MILLITESLA, MICRON, PhysicalConstants
from magnetics import (
    dc_mode_config,
    extract_excitation_params,
    field_map_arrays,
    ripple_spectrum,
    zero_crossings,
)
from spin import RestFrameFieldModel, adiabaticity_scan, default_step, integrate_bloch
from transitions import (
    ExcitationModel,
    fourier_coefficients,
    reconstruct_waveform,
    resonance_curve,
    summarize_resonance,
    waveform_value,
)
from utilities.errors import ConfigError, GranitError, NoPeakError
from utilities.logger import SimulationLogger
from utilities.sweep_runner import default_workers
from utilities.velocity_spectrum import VelocitySpectrum
from .config_loader import ConfigLoader
from .config_schema import RunConfig
from .outputs import write_report, write_table

FIELD_MAP_COLUMNS = ["x_mm", "Bx_mT", "Bz_mT", "dBxdz_Tpm", "dBzdz_Tpm", "gradAbsB_Tpm"]
ADIABATICITY_COLUMNS = ["B0y_mT", "f_Hz", "pmax_avg"]
TRACE_COLUMNS = ["t_s", "p", "Pi_x", "Pi_y", "Pi_z"]
RESONANCE_COLUMNS = ["f_Hz", "P_avg", "P_spin_up", "P_spin_down"]
FOURIER_COLUMNS = ["t_s", "beta_Tpm", "beta_first_order_Tpm", "beta_series_Tpm"]

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_USAGE = 2


@dataclass
class RunContext:
    """Validated configuration plus run-wide services"""
    config: RunConfig
    constants: PhysicalConstants
    output_dir: Path
    fmt: str
    workers: int
    logger: SimulationLogger


def _banner(title: str):
    print("=" * 80)
    print(title)
    print("=" * 80)


def _table(ctx: RunContext, rows, columns, stem: str) -> Path:
    path = write_table(rows, columns, ctx.output_dir, stem, ctx.fmt)
    ctx.logger.log_output(stem, str(path))
    return path


def _report(ctx: RunContext, report: Dict[str, Any], stem: str) -> Path:
    path = write_report(report, ctx.output_dir, stem)
    ctx.logger.log_output(stem, str(path))
    return path


def cmd_eigen(ctx: RunContext) -> Dict[str, Any]:
    """Eigensystem, matrix elements and pi-pulse gradients"""
    section = ctx.config.eigen
    spectrum = BouncerSpectrum(n_states=section.n_states, constants=ctx.constants)
    print(f"\n[1/2] Bouncer eigensystem ({section.n_states} states)...")
    print(f"  z0 = {spectrum.z0 / MICRON:.4f} um, f0 = {spectrum.f0:.3f} Hz")

    state_rows = []
    for n in range(1, section.n_states + 1):
        row = {
            "n": n,
            "epsilon": spectrum.epsilon[n - 1],
            "E_peV": spectrum.energies_peV[n - 1],
            "turning_height_um": classical_turning_height(spectrum, n) / MICRON,
        }
        state_rows.append(row)
        print(f"  n={n}: eps={row['epsilon']:.6f}  E={row['E_peV']:.4f} peV")

    transition_rows = []
    for n, m in section.transitions:
        row = {
            "n": n,
            "m": m,
            "f_Hz": transition_frequency(spectrum, n, m),
            "beta_needed_Tpm": required_gradient(spectrum, n, m, section.excitation_time_s),
            "dc_resonant_velocity_mps": resonant_velocity(
                spectrum, n, m, ctx.config.transition_region.spatial_period_m
            ),
        }
        transition_rows.append(row)
        print(f"  f{n}{m} = {row['f_Hz']:.3f} Hz, beta_needed = {row['beta_needed_Tpm']:.4f} T/m")

    print("\n[2/2] Writing tables...")
    _table(ctx, state_rows, ["n", "epsilon", "E_peV", "turning_height_um"], "eigen_states")
    _table(ctx, transition_rows, ["n", "m", "f_Hz", "beta_needed_Tpm", "dc_resonant_velocity_mps"],
           "eigen_transitions")
    report = {
        "z0_um": spectrum.z0 / MICRON,
        "f0_Hz": spectrum.f0,
        "epsilon": list(spectrum.epsilon),
        "energies_peV": spectrum.energies_peV.tolist(),
        "z_matrix_um": (z_matrix(spectrum, signed=False) / MICRON).tolist(),
        "transitions": transition_rows,
    }
    _report(ctx, report, "eigen_report")
    return report


def cmd_fieldmap(ctx: RunContext) -> Dict[str, Any]:
    """Field and d|B|/dz along the mirror"""
    section = ctx.config.field_map
    array = ctx.config.wire_array.build()
    if section.mode == "dc":
        array = dc_mode_config(array, tuple(b * MILLITESLA for b in section.dc_external_field_mT))
    if section.x_min_mm is None:
        x_range = (-0.5 * array.span, 0.5 * array.span)
    else:
        x_range = (section.x_min_mm * MM, section.x_max_mm * MM)

    print(f"\n[1/3] Scanning {section.n_points} points at z = {section.z_mm} mm ({section.mode} mode)...")
    start = time.perf_counter()
    scan = field_map_arrays(array, section.z_mm * MM, x_range, section.n_points, ctx.workers)
    ctx.logger.log_sweep("fieldmap", section.n_points, ctx.workers, time.perf_counter() - start)

    print("[2/3] Analyzing central window...")
    window = array.central_window(section.window_fraction)
    n_central = max(2, int(scan.window(*window).sum()))
    central = field_map_arrays(array, section.z_mm * MM, window, n_central, ctx.workers)
    regular = ~central.singular
    report: Dict[str, Any] = {
        "mode": section.mode,
        "z_mm": section.z_mm,
        "window_mm": [window[0] / MM, window[1] / MM],
        "singular_points": int(central.singular.sum()),
    }
    if regular.sum() >= 2:
        grad = central.grad_absB[regular]
        report["mean_gradAbsB_Tpm"] = float(grad.mean())
        report["peak_deviation_Tpm"] = float(np.max(np.abs(grad - grad.mean())))
        report["mean_absB_mT"] = float(central.abs_B[regular].mean() / MILLITESLA)
    if section.mode == "ac" and not central.singular.any():
        ripple = ripple_spectrum(central, section.ripple_velocity)
        report["ripple_wavelength_mm"] = ripple.wavelength / MM
        report["ripple_frequency_Hz"] = ripple.frequency
    crossings = zero_crossings(central)
    if len(crossings) >= 2:
        report["zero_crossing_spacing_mm"] = float(np.mean(np.diff(crossings)) / MM)
    for key, value in report.items():
        print(f"  {key}: {value}")

    print("[3/3] Writing field map...")
    rows = [
        {
            "x_mm": scan.x[i] / MM,
            "Bx_mT": scan.Bx[i] / MILLITESLA,
            "Bz_mT": scan.Bz[i] / MILLITESLA,
            "dBxdz_Tpm": scan.dBx_dz[i],
            "dBzdz_Tpm": scan.dBz_dz[i],
            "gradAbsB_Tpm": scan.grad_absB[i],
        }
        for i in range(len(scan.x))
    ]
    _table(ctx, rows, FIELD_MAP_COLUMNS, f"fieldmap_{section.mode}")
    _report(ctx, report, f"fieldmap_{section.mode}_report")
    return report


def cmd_adiabaticity(ctx: RunContext) -> Dict[str, Any]:
    """Spin-flip probability over holding field and driving frequency"""
    section = ctx.config.adiabaticity
    region = ctx.config.transition_region
    budget = ctx.config.solver.bloch_phase_budget

    if section.single_point is not None:
        point = section.single_point
        print(f"\n[1/2] Single passage f={point.f_Hz} Hz, B0y={point.B0y_mT} mT, v={point.velocity} m/s...")
        model = RestFrameFieldModel(
            B1=section.B1_mT * MILLITESLA, B0y=point.B0y_mT * MILLITESLA,
            period=region.spatial_period_m, frequency=point.f_Hz, phase=point.phase,
            velocity=point.velocity
        )
        step = default_step(model, ctx.constants, budget)
        trajectory = integrate_bloch(model, region.length_m / point.velocity, step, ctx.constants, max_samples=None)
        print(f"  p_max = {trajectory.p_max:.3e} over {trajectory.n_steps} steps")
        print("[2/2] Writing trace...")
        rows = [
            {
                "t_s": trajectory.times[i],
                "p": trajectory.flip_probability[i],
                "Pi_x": trajectory.polarization[i, 0],
                "Pi_y": trajectory.polarization[i, 1],
                "Pi_z": trajectory.polarization[i, 2],
            }
            for i in range(len(trajectory.times))
        ]
        _table(ctx, rows, TRACE_COLUMNS, "adiabaticity_trace")
        report = {"p_max": trajectory.p_max, "n_steps": trajectory.n_steps,
                  "step_s": trajectory.step, "max_norm_error": trajectory.max_norm_error}
        _report(ctx, report, "adiabaticity_trace_report")
        return report

    frequencies = section.frequencies()
    print(f"\n[1/2] Scanning {len(section.B0y_mT)} holding fields x {len(frequencies)} frequencies...")
    start = time.perf_counter()
    scan = adiabaticity_scan(
        [b * MILLITESLA for b in section.B0y_mT], frequencies,
        velocity_spec=ctx.config.velocity.build(),
        phase_samples=section.phase_samples,
        B1=section.B1_mT * MILLITESLA,
        length=region.length_m,
        period=region.spatial_period_m,
        constants=ctx.constants,
        phase_budget=budget,
        workers=ctx.workers,
    )
    ctx.logger.log_sweep("adiabaticity", scan.n_cells, ctx.workers, time.perf_counter() - start)
    print("[2/2] Writing scan...")
    _table(ctx, scan.rows(), ADIABATICITY_COLUMNS, "adiabaticity")
    report = {
        "cells": scan.n_cells,
        "max_pmax_avg_by_B0y_mT": {
            f"{b0y / MILLITESLA:g}": float(scan.pmax_avg[i].max()) for i, b0y in enumerate(scan.B0y_values)
        },
    }
    for key, value in report["max_pmax_avg_by_B0y_mT"].items():
        print(f"  B0y = {key} mT: max averaged p_max = {value:.3e}")
    _report(ctx, report, "adiabaticity_report")
    return report


def _excitation(ctx: RunContext):
    section = ctx.config.excitation
    if section.derive_from_array:
        beta_hat, b1 = extract_excitation_params(ctx.config.wire_array.build(),
                                                 ctx.config.field_map.window_fraction)
        print(f"  Derived from array: beta_hat = {beta_hat:.4f} T/m, B1 = {b1 / MILLITESLA:.4f} mT")
        return ExcitationModel(beta_hat=beta_hat, B1=b1, B0y=section.B0y_mT * MILLITESLA), True
    return section.build(), False


def cmd_resonance(ctx: RunContext) -> Dict[str, Any]:
    """Resonance curve, peaks and frequency extraction"""
    section = ctx.config.resonance
    print("\n[1/3] Preparing excitation...")
    excitation, derived = _excitation(ctx)
    spectrum = BouncerSpectrum(n_states=ctx.config.solver.n_states, constants=ctx.constants)
    if section.single_velocity is not None:
        velocity_spec = VelocitySpectrum.single(section.single_velocity)
    else:
        velocity_spec = ctx.config.velocity.build()
    frequencies = section.frequencies()

    print(f"[2/3] Integrating {len(frequencies)} frequencies...")
    start = time.perf_counter()
    curve = resonance_curve(
        spectrum, excitation, frequencies,
        velocity_spec=velocity_spec,
        phase_samples=section.phase_samples,
        length=ctx.config.transition_region.length_m,
        initial_state=section.initial_state,
        final_state=section.final_state,
        drive=section.drive,
        phase_budget=ctx.config.solver.schrodinger_phase_budget,
        workers=ctx.workers,
    )
    ctx.logger.log_sweep("resonance", curve.n_cells, ctx.workers, time.perf_counter() - start)

    print("[3/3] Locating peaks...")
    _table(ctx, curve.rows(), RESONANCE_COLUMNS, "resonance")
    coefficients = fourier_coefficients(excitation.waveform(1.0))
    try:
        summary = summarize_resonance(curve, spectrum, excitation, coefficients, derived)
        report = {"status": "ok", **summary.to_dict()}
        print(f"  f+ = {summary.f_plus:.2f} Hz, f- = {summary.f_minus:.2f} Hz")
        print(f"  extracted = {summary.f12_extracted:.2f} Hz, true = {summary.f12_true:.2f} Hz, "
              f"bias = {summary.bias:+.2f} Hz")
    except NoPeakError as e:
        print(f"  No peak: {e}")
        report = {
            "status": "no_peak",
            "message": str(e),
            "beta0": coefficients.beta0,
            "beta1": coefficients.beta1,
            "beta_hat": excitation.beta_hat,
            "B1": excitation.B1,
            "B0y": excitation.B0y,
            "derived_from_array": derived,
        }
    _report(ctx, report, "resonance_report")
    return report


def cmd_fourier(ctx: RunContext) -> Dict[str, Any]:
    """Gradient waveform over one period with its Fourier reconstructions"""
    section = ctx.config.fourier
    excitation, derived = _excitation(ctx)
    w = excitation.waveform(section.frequency_Hz, section.phase)
    print(f"\n[1/2] Fourier analysis with {section.n_harmonics} harmonics...")
    series = fourier_coefficients(w, section.n_harmonics, section.n_points)
    first_order = fourier_coefficients(w, 1, section.n_points)
    t = np.linspace(0.0, w.period, section.samples)
    exact = waveform_value(w, t)
    approx = reconstruct_waveform(first_order, w, t)
    full = reconstruct_waveform(series, w, t)
    print(f"  beta0 = {series.beta0:.4f} T/m, beta1 = {series.beta1:.4f} T/m")

    print("[2/2] Writing waveform...")
    rows = [
        {"t_s": t[i], "beta_Tpm": exact[i], "beta_first_order_Tpm": approx[i], "beta_series_Tpm": full[i]}
        for i in range(len(t))
    ]
    _table(ctx, rows, FOURIER_COLUMNS, "fourier")
    report = {
        "beta0": series.beta0,
        "beta1": series.beta1,
        "harmonics": list(series.harmonics),
        "beta_max": w.maximum,
        "first_order_max_error": float(np.max(np.abs(exact - approx))),
        "derived_from_array": derived,
    }
    _report(ctx, report, "fourier_report")
    return report


COMMANDS = {
    "eigen": cmd_eigen,
    "fieldmap": cmd_fieldmap,
    "adiabaticity": cmd_adiabaticity,
    "resonance": cmd_resonance,
    "fourier": cmd_fourier,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default=None, help='Path to run configuration (JSON)')
    common.add_argument('--set', dest='overrides', action='append', default=[], metavar='KEY=VAL',
                        help='Override a configuration value, e.g. resonance.f_step_Hz=2')
    common.add_argument('--out', type=str, default=None, help='Output directory')
    common.add_argument('--workers', type=int, default=None, help='Worker threads for sweeps')
    common.add_argument('--format', choices=['csv', 'json'], default=None, help='Table format')
    common.add_argument('--log-level', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], default=None,
                        help='Logging level')

    parser = argparse.ArgumentParser(description='GRANIT AC-mode resonance simulation')
    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('eigen', parents=[common], help='Bouncer eigensystem and pi-pulse gradients')
    fieldmap = sub.add_parser('fieldmap', parents=[common], help='Wire-array field map at the mirror')
    fieldmap.add_argument('--mode', choices=['ac', 'dc'], default=None, help='Field-map mode')
    sub.add_parser('adiabaticity', parents=[common], help='Spin-flip probability scan')
    sub.add_parser('resonance', parents=[common], help='Resonance curve and frequency extraction')
    sub.add_parser('fourier', parents=[common], help='Gradient waveform and Fourier coefficients')
    return parser


def _flag_overrides(args) -> List[str]:
    overrides = list(args.overrides)
    if args.out is not None:
        overrides.append(f"output.directory={json.dumps(args.out)}")
    if args.format is not None:
        overrides.append(f"output.format={json.dumps(args.format)}")
    if args.workers is not None:
        overrides.append(f"solver.workers={args.workers}")
    if args.log_level is not None:
        overrides.append(f"logging.log_level={json.dumps(args.log_level)}")
    if getattr(args, 'mode', None) is not None:
        overrides.append(f"field_map.mode={json.dumps(args.mode)}")
    return overrides


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main execution function; returns the process exit code"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE

    try:
        loader = ConfigLoader(args.config, _flag_overrides(args))
        config = loader.config
        constants = config.constants.build()
    except (ConfigError, GranitError) as e:
        print(f"\nError: {e}")
        return EXIT_USAGE

    _banner(f"GRANIT simulation: {args.command}")
    print(f"Config: {loader.config_path}")
    print(f"Output: {config.output.directory} ({config.output.format})")
    print("=" * 80)

    logger = SimulationLogger(config.logging.model_dump())
    ctx = RunContext(
        config=config,
        constants=constants,
        output_dir=Path(config.output.directory),
        fmt=config.output.format,
        workers=config.solver.workers or default_workers(),
        logger=logger,
    )
    logger.log_study_start(args.command, config.model_dump(mode="json"))

    try:
        report = COMMANDS[args.command](ctx)
        logger.log_result(args.command, report)
    except GranitError as e:
        print(f"\nError: {e}")
        logger.save_logs(str(ctx.output_dir / "run_log.json"))
        return EXIT_RUNTIME

    logger.save_logs(str(ctx.output_dir / "run_log.json"))
    print("\n" + "=" * 80)
    print("Run Complete!")
    print("=" * 80)
    return EXIT_OK
