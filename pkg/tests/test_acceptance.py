"""Acceptance suite: one PASS/FAIL line per criterion.

Each test prints ``CRITERION k: PASS|FAIL <measured values>`` to the
terminal (even under output capture) and then asserts.  Tolerances and
runtime budgets are pinned as module constants.  Run directly with
``python3 tests/test_acceptance.py`` for the summary alone.
"""

import math
import sys
import time

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from sawatom.idt import array_factor, h_factor, h_factor_sinc_approx
from sawatom.materials import get_material
from sawatom.response import (
    acoustic_reflection,
    acoustic_transmission,
    admittance_response,
    charge_transfer,
    default_model,
    damping,
    gate_reflection,
    normalized_decay,
)
from sawatom.scenario import load_scenario
from sawatom.spectral import (
    cavity_criterion,
    charge_peaks,
    find_poles,
    find_spectrum_peaks,
    flux_map,
    main_lobe,
    minimal_n,
    real_axis_resonances,
    resonant_flux,
    splitting,
)
from sawatom.timedomain import GaussianPulse, build_delay_system, energy_audit, integrate, scattering_from_time_domain

# published reference values for the two normalized decays
DECAY_LINBO3_REF, DECAY_LINBO3_TOL = 0.23, 0.05
DECAY_GAAS_REF, DECAY_GAAS_TOL = 0.004, 0.15
DECAY_IDENTITY_TOL = 1e-12
FWHM_MAX = 0.10
FULL_REFLECTION_TOL = 1e-9
EQUIVALENCE_TOL = 0.05
EQUIVALENCE_SPAN = 3.0  # half-width of the compared window, in IDT bandwidths omega_idt/n
SPLIT_POLE_TOL = 0.01
SWEEP_POINTS, SWEEP_RANGE, SWEEP_EXCLUDED = 40, (0.1, 30.0), (0.8, 1.25)
ROOT_TOL = 1e-9
ORACLE_TOL, ENERGY_TOL = 1e-3, 1e-6
UNITARITY_TOL, IDENTITY_TOL, ADMITTANCE_TOL, SINC_TOL = 1e-12, 1e-12, 1e-10, 0.05
PROPERTY_CASES = 200
ANTICROSSING_TOL = 0.02
GAP_CLOSED_TOL = 1e-6  # the gate line removes ~5e-8 of the reflected power


def report(k, ok, detail, elapsed, budget):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    line = f"CRITERION {k}: {status} {detail} [runtime {elapsed:.2f} s < {budget:g} s: {within}]"
    return status, line


@pytest.fixture
def emit(capsys):
    def _emit(k, ok, detail, elapsed, budget):
        status, line = report(k, ok, detail, elapsed, budget)
        with capsys.disabled():
            print("\n" + line)
        assert ok, line
        assert elapsed < budget, line

    return _emit


def test_criterion_1_thresholds(emit):
    t0 = time.perf_counter()
    n_linbo3 = minimal_n(get_material("LiNbO3").K2)
    n_gaas = minimal_n(get_material("GaAs").K2)
    elapsed = time.perf_counter() - t0
    ok = n_linbo3 == 4 and n_gaas == 31
    emit(1, ok, f"n_min(LiNbO3) = {n_linbo3} (want 4), n_min(GaAs) = {n_gaas} (want 31)", elapsed, 1.0)


def test_criterion_2_normalized_decay(emit):
    t0 = time.perf_counter()
    vals, ident = {}, 0.0
    for name in ("LiNbO3", "GaAs"):
        m = default_model(name, n=10, C_g=0.0, approx_csigma=True)
        g = damping(m, m.omega_0).real / m.omega_0
        closed = normalized_decay(m.mat.K2, m.n)
        ident = max(ident, abs(g - closed) / closed)
        vals[name] = g
    elapsed = time.perf_counter() - t0
    dev_l = abs(vals["LiNbO3"] - DECAY_LINBO3_REF) / DECAY_LINBO3_REF
    dev_g = abs(vals["GaAs"] - DECAY_GAAS_REF) / DECAY_GAAS_REF
    ok = ident < DECAY_IDENTITY_TOL and dev_l <= DECAY_LINBO3_TOL and dev_g <= DECAY_GAAS_TOL
    detail = (
        f"closed-form identity {ident:.1e} (< {DECAY_IDENTITY_TOL:g}); "
        f"LiNbO3 {vals['LiNbO3']:.4f} vs {DECAY_LINBO3_REF} ({dev_l:.1%}, <= {DECAY_LINBO3_TOL:.0%}); "
        f"GaAs {vals['GaAs']:.2e} vs {DECAY_GAAS_REF} ({dev_g:.1%}, <= {DECAY_GAAS_TOL:.0%})"
    )
    emit(2, ok, detail, elapsed, 1.0)


def test_criterion_3_regimes(emit):
    t0 = time.perf_counter()
    out, ok = [], True
    for name, want in (("GaAs", 1), ("LiNbO3", 2)):
        m = default_model(name, n=10, C_g=0.0)
        grid = m.omega_idt * np.linspace(0.8, 1.2, 10001)
        peaks = charge_peaks(m, grid)
        widths = [p.fwhm / m.omega_0 for p in peaks]
        r0 = abs(acoustic_reflection(m, m.omega_0))
        good = len(peaks) == want and all(w < FWHM_MAX for w in widths) and abs(r0 - 1) < FULL_REFLECTION_TOL
        ok = ok and good
        out.append(f"{name}: {len(peaks)} peak(s) (want {want}), FWHM/w0 {', '.join(f'{w:.4f}' for w in widths)}, ||r(w0)|-1| = {abs(r0 - 1):.1e}")
    elapsed = time.perf_counter() - t0
    emit(3, ok, "; ".join(out), elapsed, 10.0)


def test_criterion_4_equivalence(emit):
    t0 = time.perf_counter()
    a = default_model("LiNbO3", n=10, C_g=0.0)
    b = default_model("GaAs", n=82, C_g=0.0)
    x = np.linspace(-EQUIVALENCE_SPAN, EQUIVALENCE_SPAN, 4001)  # detuning in bandwidths
    ra = np.abs(acoustic_reflection(a, a.omega_idt * (1 + x / a.n))) ** 2
    rb = np.abs(acoustic_reflection(b, b.omega_idt * (1 + x / b.n))) ** 2
    dev = float(np.max(np.abs(ra - rb)))
    where = float(x[np.argmax(np.abs(ra - rb))])
    elapsed = time.perf_counter() - t0
    ok = dev <= EQUIVALENCE_TOL
    detail = (
        f"max ||r|^2 difference| = {dev:.3f} at detuning {where:+.2f} bandwidths (tolerance {EQUIVALENCE_TOL}); "
        f"lhs {cavity_criterion(a.mat.K2, 10).lhs:.3f} vs {cavity_criterion(b.mat.K2, 82).lhs:.3f}"
    )
    emit(4, ok, detail, elapsed, 10.0)


def _sweep_values():
    lo, hi = SWEEP_RANGE
    vals = np.geomspace(lo, hi, SWEEP_POINTS)
    return vals[(vals < SWEEP_EXCLUDED[0]) | (vals > SWEEP_EXCLUDED[1])]


def test_criterion_5_poles_and_peaks(emit):
    t0 = time.perf_counter()
    m = default_model("LiNbO3", n=10)
    s = splitting(m)
    a, b = sorted(find_poles(m).lobe_poles(main_lobe(m)), key=lambda z: z.real)
    gap = b.real - a.real
    dev = abs(s - gap) / gap
    mismatches = []
    sweep = _sweep_values()
    base = get_material("LiNbO3")
    for lhs in sweep:
        K2 = 2 * lhs / (math.pi * 100)
        mk = default_model(base.with_K2(K2), n=10)
        want = "split" if cavity_criterion(K2, 10).satisfied else "single"
        got = find_poles(mk).classification
        if got != want:
            mismatches.append(f"{lhs:.3g}:{got}")
    elapsed = time.perf_counter() - t0
    ok = dev < SPLIT_POLE_TOL and not mismatches
    detail = (
        f"splitting/w_IDT {s / m.omega_idt:.5f} vs pole gap {gap / m.omega_idt:.5f} ({dev:.2%} < {SPLIT_POLE_TOL:.0%}); "
        f"{len(mismatches)} classification mismatch(es) over {sweep.size} sweep points {mismatches}"
    )
    emit(5, ok, detail, elapsed, 60.0)


def test_criterion_6_three_roots(emit):
    t0 = time.perf_counter()
    m = default_model("LiNbO3", n=10, C_g=0.0)
    roots = real_axis_resonances(m)
    elapsed = time.perf_counter() - t0
    ok = len(roots) == 3 and abs(roots[1].omega - m.omega_0) < ROOT_TOL * m.omega_0 and roots[1].suppressed
    ok = ok and not roots[0].suppressed and not roots[2].suppressed
    detail = "roots/w0 = [" + ", ".join(f"{r.omega / m.omega_0:.6f}{'*' if r.suppressed else ''}" for r in roots) + "] (* suppressed)"
    detail += f"; |middle - w0|/w0 = {abs(roots[1].omega - m.omega_0) / m.omega_0:.1e}" if len(roots) == 3 else ""
    emit(6, ok, detail, elapsed, 5.0)


@pytest.mark.parametrize("scenario", ["gaas_n10", "linbo3_n10"])
def test_criterion_7_oracle(emit, scenario):
    t0 = time.perf_counter()
    m = load_scenario(scenario).model
    sysm = build_delay_system(m, m.tau / 64, GaussianPulse("left"))
    res = scattering_from_time_domain(sysm)
    w = res.r.grid
    ref_r, ref_t = acoustic_reflection(m, w), acoustic_transmission(m, w)
    dr = float(np.max(np.abs(res.r.values - ref_r)) / np.max(np.abs(ref_r)))
    dt_ = float(np.max(np.abs(res.t.values - ref_t)) / np.max(np.abs(ref_t)))
    audit = energy_audit(integrate(sysm, res.duration), sysm, tol=ENERGY_TOL)
    elapsed = time.perf_counter() - t0
    lo, hi = main_lobe(m)
    covers = w[0] - lo < 2 * (w[1] - w[0]) and hi - w[-1] < 2 * (w[1] - w[0])
    ok = dr < ORACLE_TOL and dt_ < ORACLE_TOL and audit.ok and covers
    detail = (
        f"{scenario}: max rel error r {dr:.1e}, t {dt_:.1e} (< {ORACLE_TOL:g}) over {w.size} main-lobe bins; "
        f"energy out/in = {audit.ratio:.10f} (1 +- {ENERGY_TOL:g})"
    )
    emit(7, ok, detail, elapsed, 120.0)


def test_criterion_8_properties(emit):
    worst = {"unitarity": 0.0, "H=|A|^2": 0.0, "admittance": 0.0, "sinc": 0.0}
    cases = []

    @settings(max_examples=PROPERTY_CASES, deadline=None, database=None, suppress_health_check=list(HealthCheck))
    @given(
        K2=st.floats(1e-4, 0.2),
        n=st.integers(3, 200),
        C_J=st.floats(1e-16, 1e-14),
        ratio=st.floats(0.8, 1.2),
        x=st.floats(-1.0, 1.0),
        detune=st.floats(-0.05, 0.05),
    )
    def prop(K2, n, C_J, ratio, x, detune):
        cases.append(1)
        m = default_model(get_material("GaAs").with_K2(K2), n=n, C_J=C_J, C_g=0.0, frequency_ratio=ratio)
        w = m.omega_idt * (1 + x * 2.0 / n)
        r, t = acoustic_reflection(m, w), acoustic_transmission(m, w)
        worst["unitarity"] = max(worst["unitarity"], abs(abs(r) ** 2 + abs(t) ** 2 - 1))
        H, A = h_factor(n, w, m.tau), array_factor(n, w, m.tau)
        worst["H=|A|^2"] = max(worst["H=|A|^2"], abs(H.real - abs(A) ** 2) / n**2)
        a, c = admittance_response(m, w), charge_transfer(m, w)
        worst["admittance"] = max(worst["admittance"], abs(a - c) / abs(c))
        wd = m.omega_idt * (1 + detune)
        worst["sinc"] = max(worst["sinc"], abs(h_factor_sinc_approx(n, wd, m.omega_idt) - h_factor(n, wd, m.tau)) / n**2)

    t0 = time.perf_counter()
    prop()
    elapsed = time.perf_counter() - t0
    ok = (
        worst["unitarity"] < UNITARITY_TOL
        and worst["H=|A|^2"] < IDENTITY_TOL
        and worst["admittance"] < ADMITTANCE_TOL
        and worst["sinc"] < SINC_TOL
    )
    detail = (
        f"{len(cases)} cases; worst |r|^2+|t|^2-1 {worst['unitarity']:.1e} (< {UNITARITY_TOL:g}), "
        f"Re H - |A|^2 {worst['H=|A|^2']:.1e} n^2 (< {IDENTITY_TOL:g}), "
        f"admittance {worst['admittance']:.1e} (< {ADMITTANCE_TOL:g}), "
        f"sinc {worst['sinc']:.3f} n^2 (< {SINC_TOL})"
    )
    emit(8, ok, detail, elapsed, 30.0)


def test_criterion_9_anticrossing(emit):
    t0 = time.perf_counter()
    sc = load_scenario("linbo3_fluxmap")
    m = sc.model
    fmap = flux_map(m, sc.flux_grid(), sc.frequency_grid(), "r_g")
    phi = resonant_flux(m)
    tuned = m.with_phi_ext(phi)
    # the resonant column, resolved finely; minima of |r_g|^2 are peaks of its complement
    grid = sc.frequency_grid(20001)
    col = np.abs(gate_reflection(tuned, grid)) ** 2
    dips = sorted(find_spectrum_peaks(grid, 1 - col), key=lambda p: p.height, reverse=True)[:2]
    gap = abs(dips[0].omega - dips[1].omega) if len(dips) == 2 else float("nan")
    ref = splitting(default_model("LiNbO3", n=10))
    dev = abs(gap - ref) / ref
    r2 = abs(acoustic_reflection(tuned, tuned.omega_idt)) ** 2
    elapsed = time.perf_counter() - t0
    ok = dev <= ANTICROSSING_TOL and abs(r2 - 1) < GAP_CLOSED_TOL and fmap.values.shape == (101, 400)
    detail = (
        f"flux {phi:.6f} Phi0; r_g minima at "
        + ", ".join(f"{d.omega / m.omega_idt:.4f}" for d in sorted(dips, key=lambda p: p.omega))
        + f" w_IDT, gap {gap / m.omega_idt:.4f} vs splitting {ref / m.omega_idt:.4f} ({dev:.1%}, <= {ANTICROSSING_TOL:.0%}); "
        f"|r_ac(w_IDT)|^2 = {r2:.8f} (1 +- {GAP_CLOSED_TOL:g}); map {fmap.values.shape[0]}x{fmap.values.shape[1]}"
    )
    emit(9, ok, detail, elapsed, 60.0)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
