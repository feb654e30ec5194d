"""Command-line front end.

Exit codes: 0 success, 2 configuration error, 3 solver non-convergence,
4 disagreement between the time- and frequency-domain models.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .errors import DomainError, GateDisabledError, PoleSearchError, ScenarioError, SpectralCoverageError
from .io import (
    fluxmap_rows,
    heatmap_svg,
    line_plot_svg,
    spectrum_rows,
    trace_rows,
    write_csv,
)
from .materials import get_material, load_material_db, material_table
from .response import acoustic_reflection, acoustic_transmission, evaluate, gate_reflection, transduction
from .scenario import bundled_scenarios, load_scenario
from .spectral import (
    cavity_criterion,
    charge_peaks,
    find_poles,
    flux_map,
    minimal_n,
    resonant_flux,
)
from .timedomain import GaussianPulse, Impulse, build_delay_system, energy_audit, integrate, scattering_from_time_domain

EXIT_OK, EXIT_CONFIG, EXIT_SOLVER, EXIT_ORACLE = 0, 2, 3, 4
ORACLE_TOL = 1e-3
PHASE_TOL = 1e-6
GATE_OBSERVABLES = {"r_g", "t_ac_g", "t_g_ac"}


def _scenario(args):
    db = load_material_db(args.materials_db)
    return load_scenario(args.scenario, db, True if args.approx_csigma else None)


def _out(args, scenario_name):
    base = Path(args.out_dir)
    base.mkdir(parents=True, exist_ok=True)
    return base, scenario_name


def cmd_spectrum(args) -> int:
    sc = _scenario(args)
    model = sc.model
    base, name = _out(args, sc.name)
    grid = sc.frequency_grid(args.points)
    series = []
    for i, obs in enumerate(sc.outputs):
        if obs in GATE_OBSERVABLES and not model.has_gate:
            raise ScenarioError(f"{obs} requires atom.C_g_F > 0", f"outputs.{i}")
        spectrum = evaluate(model, obs, grid)
        header, rows = spectrum_rows(spectrum)
        write_csv(base / f"{name}_{obs}.csv", header, rows)
        a2 = spectrum.abs2
        series.append((f"|{obs}|^2 (norm.)", grid / model.omega_idt, a2 / a2.max() if a2.max() > 0 else a2))
    line_plot_svg(base / f"{name}_spectrum.svg", series, "omega / omega_IDT", "normalized |.|^2", name)
    peaks = charge_peaks(model, grid)
    print(f"{name}: {len(peaks)} charge-response peak(s)")
    for p in peaks:
        print(f"  omega/omega_IDT = {p.omega / model.omega_idt:.6f}  FWHM/omega_0 = {p.fwhm / model.omega_0:.4g}")
    return EXIT_OK


def _criterion_rows(K2, ns):
    yield f"{'n':>5}{'lhs':>12}{'satisfied':>11}{'g0/w0':>12}{'g0*T0':>12}"
    for n in ns:
        c = cavity_criterion(K2, n)
        yield f"{n:>5}{c.lhs:>12.5g}{str(c.satisfied):>11}{c.gamma0_over_omega0:>12.5g}{c.gamma0_T0:>12.5g}"


def cmd_criterion(args) -> int:
    db = load_material_db(args.materials_db)
    if args.K2 is not None:
        K2, label = args.K2, f"K2 = {args.K2:g}"
    else:
        mat = get_material(args.material, db)
        K2, label = mat.K2, f"{mat.name} (K2 = {mat.K2_percent:g} %)"
    if args.n is not None:
        ns = [args.n]
    else:
        ns = range(args.n_min, args.n_max + 1)
    print(label)
    for line in _criterion_rows(K2, ns):
        print(line)
    nmin = minimal_n(K2)
    print(f"threshold: n = {nmin}" if nmin else "threshold: never satisfied")
    return EXIT_OK


def cmd_poles(args) -> int:
    sc = _scenario(args)
    base, name = _out(args, sc.name)
    try:
        ps = find_poles(sc.model)
    except PoleSearchError as exc:
        print(f"pole search failed: {exc}; candidates: {exc.candidates}", file=sys.stderr)
        return EXIT_SOLVER
    doc = ps.to_dict()
    text = json.dumps(doc, indent=2, sort_keys=True)
    (base / f"{name}_poles.json").write_text(text + "\n")
    print(text)
    return EXIT_OK


def cmd_fluxmap(args) -> int:
    sc = _scenario(args)
    model = sc.model
    base, name = _out(args, sc.name)
    flux = sc.flux_grid()
    freq = sc.frequency_grid(args.points)
    wanted = [o for o in sc.outputs if o in ("r_g", "r_ac")] or ["r_ac"]
    if args.observable:
        wanted = [args.observable]
    for obs in wanted:
        if obs == "r_g" and not model.has_gate:
            raise ScenarioError("r_g requires atom.C_g_F > 0", "outputs")
        fm = flux_map(model, flux, freq, obs)
        header, rows = fluxmap_rows(fm)
        write_csv(base / f"{name}_fluxmap_{obs}.csv", header, rows)
        shown = fm.inverted if obs == "r_g" else fm.values
        label = "1 - |r_g|^2 (normalized)" if obs == "r_g" else "|r_ac|^2"
        heatmap_svg(base / f"{name}_fluxmap_{obs}.svg", freq / (2e9 * math.pi), flux, shown, "f [GHz]", "flux [Phi_0]", f"{name}: {label}")
        bad = int((~fm.valid).sum())
        print(f"{obs}: {flux.size} x {freq.size} map, {bad} invalid flux row(s)")
    try:
        print(f"resonant flux (omega_0 = omega_IDT): {resonant_flux(model):.6f} Phi_0")
    except DomainError as exc:
        print(f"resonant flux: {exc}")
    return EXIT_OK


def cmd_timedomain(args) -> int:
    sc = _scenario(args)
    model = sc.model
    base, name = _out(args, sc.name)
    td = sc.raw.get("timedomain", {})
    port = td.get("port", "left")
    drive = Impulse(port=port) if td.get("drive") == "impulse" else GaussianPulse(port=port)
    sysm = build_delay_system(model, model.tau / td.get("steps_per_tau", 64), drive)
    try:
        res = scattering_from_time_domain(sysm, extrapolate=td.get("extrapolate", True))
    except SpectralCoverageError as exc:
        print(f"spectral coverage: {exc} (margin {exc.margin_db:.1f} dB)", file=sys.stderr)
        return EXIT_ORACLE
    trace = integrate(sysm, res.duration)
    header, rows = trace_rows(trace)
    write_csv(base / f"{name}_trace.csv", header, rows)
    audit = energy_audit(trace, sysm)

    w = res.r.grid
    if port == "gate":
        ref_r, ref_t = gate_reflection(model, w), transduction(model, w)
    else:
        ref_r, ref_t = acoustic_reflection(model, w), acoustic_transmission(model, w)
    dev_r = float(np.max(np.abs(res.r.values - ref_r)) / max(np.max(np.abs(ref_r)), 1e-300)) if np.any(ref_r) else float(np.max(np.abs(res.r.values)))
    dev_t = float(np.max(np.abs(res.t.values - ref_t)) / np.max(np.abs(ref_t)))
    print(f"{name}: dt = tau/{sysm.steps_per_tau}, record {res.duration / model.tau:.1f} tau, {w.size} bins in band")
    print(f"  max relative deviation  r: {dev_r:.3e}  t: {dev_t:.3e}  (tolerance {ORACLE_TOL:g})")
    print(f"  energy: {audit.breakdown()}")
    ok = dev_r < ORACLE_TOL and dev_t < ORACLE_TOL and audit.ok
    if model.mat.K2 == 0 and port != "gate":
        phase = np.angle(res.t.values * np.exp(1j * w * model.tau * model.n))
        pmax = float(np.max(np.abs(phase)))
        print(f"  pure-delay phase error: {pmax:.3e} rad (tolerance {PHASE_TOL:g})")
        ok = ok and pmax < PHASE_TOL
    return EXIT_OK if ok else EXIT_ORACLE


def cmd_materials(args) -> int:
    db = load_material_db(args.materials_db)
    for line in material_table(db):
        print(line)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--materials-db", default=None, help="JSON material database (built-ins if absent)")
    scen = argparse.ArgumentParser(add_help=False)
    scen.add_argument("--scenario", required=True, help=f"scenario file or bundled name ({', '.join(sorted(bundled_scenarios()))})")
    scen.add_argument("--out-dir", default="out")
    scen.add_argument("--points", type=int, default=None, help="override the frequency grid size")
    scen.add_argument("--approx-csigma", action="store_true", help="use C_sigma = n*C_c")

    p = argparse.ArgumentParser(prog="sawatom", description="SAW-coupled transmon: spectra, poles, flux maps and time-domain checks")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common, scen], help="frequency sweep to CSV + SVG").set_defaults(func=cmd_spectrum)
    c = sub.add_parser("criterion", parents=[common], help="cavity criterion table")
    g = c.add_mutually_exclusive_group()
    g.add_argument("--material", default="LiNbO3")
    g.add_argument("--K2", type=float, default=None, help="coupling as a fraction")
    c.add_argument("--n", type=int, default=None)
    c.add_argument("--n-min", type=int, default=1)
    c.add_argument("--n-max", type=int, default=12)
    c.set_defaults(func=cmd_criterion)
    sub.add_parser("poles", parents=[common, scen], help="complex poles as JSON").set_defaults(func=cmd_poles)
    f = sub.add_parser("fluxmap", parents=[common, scen], help="flux x frequency map to CSV + SVG")
    f.add_argument("--observable", choices=["r_g", "r_ac"], default=None)
    f.set_defaults(func=cmd_fluxmap)
    sub.add_parser("timedomain", parents=[common, scen], help="time-domain oracle run").set_defaults(func=cmd_timedomain)
    m = sub.add_parser("materials", parents=[common], help="material database")
    m.add_argument("action", choices=["list"])
    m.set_defaults(func=cmd_materials)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, DomainError, GateDisabledError, json.JSONDecodeError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PoleSearchError as exc:
        print(f"solver did not converge: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
