"""Regime classification, complex poles, peak observables and flux maps.

Pole convention
---------------
Roots of ``denominator`` lie in the upper half plane because the model uses
``exp(+1j*omega*t)``.  :class:`PoleSet` reports their complex conjugates, so
poles carry ``Im < 0`` in the usual ``exp(-1j*omega*t)`` picture and the
imaginary part is minus the amplitude decay rate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.ndimage import minimum_filter
from scipy.optimize import brentq
from scipy.signal import find_peaks

from .errors import DomainError, FluxBranchError, NotSplitError, PoleSearchError
from .response import (
    SystemModel,
    acoustic_reflection,
    charge_response,
    damping,
    denominator,
    flux_inductance,
    gate_reflection,
)

__all__ = [
    "CriterionResult",
    "PoleSet",
    "Peak",
    "RealResonance",
    "FluxMap",
    "cavity_criterion",
    "minimal_n",
    "main_lobe",
    "default_region",
    "find_poles",
    "real_axis_resonances",
    "find_spectrum_peaks",
    "charge_peaks",
    "splitting",
    "flux_inductance",
    "resonant_flux",
    "flux_map",
]

NEWTON_BUDGET = 80
NEWTON_TOL = 1e-12  # relative to omega_idt
MERGE_RADIUS = 1e-9  # relative to omega_idt
RESIDUAL_TOL = 1e-8  # |D| relative to omega_idt**2


# -- cavity criterion ---------------------------------------------------------


@dataclass(frozen=True)
class CriterionResult:
    """Cavity criterion for one (K2, n).

    ``gamma0_T0 = pi * n**2 * K2`` is reported separately: composing
    ``gamma0/omega0 = 0.5 n K2`` with ``T0 = n*tau`` gives twice ``lhs``.
    """

    K2: float
    n: int
    lhs: float
    satisfied: bool
    gamma0_over_omega0: float
    gamma0_T0: float


def cavity_criterion(K2: float, n: int) -> CriterionResult:
    """Evaluate ``0.5*pi*K2*n**2 >= 1``."""
    if not (0 <= K2 < 1):
        raise DomainError(f"K2 must be a fraction in [0, 1), got {K2!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    lhs = 0.5 * math.pi * K2 * n * n
    return CriterionResult(
        K2=K2,
        n=n,
        lhs=lhs,
        satisfied=lhs >= 1.0,
        gamma0_over_omega0=0.5 * n * K2,
        gamma0_T0=math.pi * n * n * K2,
    )


def minimal_n(K2: float) -> Optional[int]:
    """Smallest n satisfying the cavity criterion, or None for K2 = 0."""
    if K2 <= 0:
        return None
    n = max(1, math.ceil(math.sqrt(2.0 / (math.pi * K2))))
    # guard the ceil against rounding on either side
    while n > 1 and cavity_criterion(K2, n - 1).satisfied:
        n -= 1
    while not cavity_criterion(K2, n).satisfied:
        n += 1
    return n


# -- poles --------------------------------------------------------------------


def main_lobe(model: SystemModel) -> Tuple[float, float]:
    """Interval between the first zeros of the array factor, ``omega_idt*(1 -+ 1/n)``."""
    w = model.omega_idt
    return w * (1.0 - 1.0 / model.n), w * (1.0 + 1.0 / model.n)


def default_region(model: SystemModel) -> Tuple[float, float, float, float]:
    """``(re_lo, re_hi, im_lo, im_hi)`` in rad/s, pole convention (Im <= 0).

    Real extent ``omega_idt*(1 -+ 1.5/n)`` widened to contain omega_0; depth
    ``2*max(|gamma_n(omega_idt)|, 1/T0)``, capped at omega_idt.
    """
    w = model.omega_idt
    half = min(1.5 / model.n, 0.9) * w
    re_lo = min(w - half, 0.95 * model.omega_0)
    re_hi = max(w + half, 1.05 * model.omega_0)
    depth = 2.0 * max(abs(damping(model, w)), 1.0 / model.transit_time)
    return max(re_lo, 1e-3 * w), re_hi, -min(depth, w), 0.0


@dataclass(frozen=True)
class PoleSet:
    """Located poles of the charge response.

    Attributes
    ----------
    poles : ndarray of complex
        Sorted by real part, ``Im < 0``.
    residuals : ndarray
        ``|denominator(conj(pole))| / omega_idt**2``.
    converged : ndarray of bool
        Newton reached ``|dz| < 1e-12*omega_idt``.  Near the exceptional
        point the root is double and Newton stalls at the roundoff floor;
        such poles are kept when their residual passes.
    classification : {"single", "split"}
        From the two least-damped poles of the search region: "split" when
        their real parts differ by more than their imaginary parts.  The
        whole region is used, not only the main lobe, because at strong
        coupling the dressed poles move past ``omega_idt*(1 -+ 1/n)``.
    """

    poles: np.ndarray
    search_region: Tuple[float, float, float, float]
    classification: str
    residuals: np.ndarray
    converged: np.ndarray
    omega_idt: float

    def lobe_poles(self, lobe: Tuple[float, float]) -> np.ndarray:
        lo, hi = lobe
        return self.poles[(self.poles.real >= lo) & (self.poles.real <= hi)]

    def to_dict(self) -> dict:
        return {
            "poles": [{"re_rad_s": float(p.real), "im_rad_s": float(p.imag)} for p in self.poles],
            "classification": self.classification,
            "residual_norms": [float(r) for r in self.residuals],
        }


def _classify(poles: np.ndarray, lobe) -> str:
    inside = poles[(poles.real >= lobe[0]) & (poles.real <= lobe[1])]
    if inside.size < 2:
        return "single"
    a, b = inside[np.argsort(np.abs(inside.imag))[:2]]
    # two least-damped modes: split once they separate more in frequency than in width
    return "split" if abs(a.real - b.real) > abs(a.imag - b.imag) else "single"


def _newton(f, z0, scale, h):
    z = complex(z0)
    for _ in range(NEWTON_BUDGET):
        d = (f(z + h) - f(z - h)) / (2.0 * h)
        if d == 0:
            return z, False
        step = f(z) / d
        z -= step
        if abs(step) < NEWTON_TOL * scale:
            return z, True
    return z, False


def find_poles(
    model: SystemModel,
    region: Optional[Sequence[float]] = None,
    shape: Tuple[int, int] = (400, 200),
) -> PoleSet:
    """Locate the complex poles of ``charge_response`` inside ``region``.

    A ``shape[0] x shape[1]`` grid of ``log|D|`` is scanned for local minima,
    which seed Newton iterations with a central-difference derivative.
    Duplicates within ``1e-9*omega_idt`` are merged.

    Parameters
    ----------
    region : (re_lo, re_hi, im_lo, im_hi), optional
        Rectangle in the pole convention (``im_lo < im_hi <= 0``).  Must
        contain omega_idt on its real extent and be shallower than omega_idt.

    Raises
    ------
    PoleSearchError
        A seed neither converged nor reached the residual tolerance.
    """
    w = model.omega_idt
    re_lo, re_hi, im_lo, im_hi = region if region is not None else default_region(model)
    if not (re_lo < w < re_hi):
        raise DomainError("region must contain omega_idt on its real extent")
    if not (im_lo < im_hi) or im_hi - im_lo > w:
        raise DomainError("region height must be positive and below omega_idt")

    f = lambda z: denominator(model, z)  # noqa: E731
    re = np.linspace(re_lo, re_hi, shape[0])
    # roots of D sit at conj(pole)
    im = np.linspace(-im_hi, -im_lo, shape[1])
    Z = re[None, :] + 1j * im[:, None]
    logd = np.log(np.abs(f(Z)) + 1e-300)
    seeds = Z[logd == minimum_filter(logd, size=3, mode="nearest")]

    h = 1e-7 * w
    roots, flags, failed = [], [], []
    for s in seeds:
        z, ok = _newton(f, s, w, h)
        if not np.isfinite(z):
            failed.append(complex(s))
            continue
        if not (re_lo <= z.real <= re_hi and -im_hi - 1e-9 * w <= z.imag <= -im_lo):
            continue
        if abs(f(z)) > RESIDUAL_TOL * w * w:
            if ok:
                continue
            failed.append(complex(s))
            continue
        if any(abs(z - r) < MERGE_RADIUS * w for r in roots):
            continue
        roots.append(z)
        flags.append(ok)

    if failed and not roots:
        raise PoleSearchError(f"no seed converged within {NEWTON_BUDGET} Newton steps", failed)

    order = np.argsort([r.real for r in roots])
    roots = np.array(roots, dtype=complex)[order]
    poles = np.conj(roots)
    residuals = np.abs(f(roots)) / w**2 if roots.size else np.zeros(0)
    return PoleSet(
        poles=poles,
        search_region=(re_lo, re_hi, im_lo, im_hi),
        classification=_classify(poles, (re_lo, re_hi)),
        residuals=residuals,
        converged=np.array(flags, dtype=bool)[order],
        omega_idt=w,
    )


# -- real-axis resonances -----------------------------------------------------


@dataclass(frozen=True)
class RealResonance:
    """Root of ``omega**2 - omega_0**2 + Im[gamma_n]*omega``.

    ``linewidth`` is ``Re[gamma_n]*omega / |d/domega(...)|``; the root is
    ``suppressed`` when that width exceeds the distance to its nearest
    neighbouring root, so no separate peak can form there.
    ``re_gamma_ratio`` is Re[gamma_n] at the root over its main-lobe maximum.
    """

    omega: float
    linewidth: float
    re_gamma_ratio: float
    suppressed: bool


def real_axis_resonances(
    model: SystemModel,
    window: Optional[Tuple[float, float]] = None,
    points: int = 20001,
) -> List[RealResonance]:
    """All real roots of ``omega**2 - omega_0**2 + Im[gamma_n(omega)]*omega``.

    The default window is the main lobe, widened by omega_idt/n on each side
    and extended to contain omega_0.
    """
    w = model.omega_idt
    if window is None:
        lo, hi = main_lobe(model)
        pad = w / model.n
        window = (max(min(lo, model.omega_0) - pad, 1e-3 * w), max(hi, model.omega_0) + pad)

    def a(x):
        return x * x - model.omega_0**2 + damping(model, x).imag * x

    grid = np.linspace(window[0], window[1], points)
    vals = a(grid)
    roots = list(grid[vals == 0.0])
    for i in np.nonzero(vals[:-1] * vals[1:] < 0)[0]:
        roots.append(brentq(a, grid[i], grid[i + 1], xtol=1e-15 * w, rtol=1e-15))
    roots = np.sort(np.array(roots, dtype=float))

    lobe = np.linspace(*main_lobe(model), 4001)
    re_max = damping(model, lobe).real.max()
    h = 1e-7 * w
    out = []
    for i, r in enumerate(roots):
        slope = abs(a(r + h) - a(r - h)) / (2 * h)
        g = damping(model, r).real
        width = g * r / slope if slope > 0 else math.inf
        gaps = [abs(r - roots[j]) for j in (i - 1, i + 1) if 0 <= j < roots.size]
        suppressed = bool(gaps) and width > min(gaps)
        out.append(RealResonance(float(r), float(width), float(g / re_max) if re_max > 0 else 0.0, suppressed))
    return out


# -- peaks ----------------------------------------------------------------------


@dataclass(frozen=True)
class Peak:
    omega: float
    height: float
    fwhm: float  # nan when the half-maximum is not reached before a neighbouring peak


def _half_crossing(grid, y, i, half, step):
    j = i
    while 0 <= j + step < y.size:
        nxt = j + step
        if y[nxt] <= half:
            x0, x1, y0, y1 = grid[j], grid[nxt], y[j], y[nxt]
            return x0 + (half - y0) * (x1 - x0) / (y1 - y0)
        if y[nxt] > y[j]:
            return math.nan  # climbing into the next peak
        j = nxt
    return math.nan


def find_spectrum_peaks(grid, y, rel_prominence: float = 1e-3) -> List[Peak]:
    """Local maxima of a sampled spectrum with 3-point quadratic refinement.

    Maxima with prominence below ``rel_prominence * max(y)`` are ignored.
    FWHM uses linear interpolation at each peak's own half maximum.
    """
    grid = np.asarray(grid, dtype=float)
    y = np.asarray(y, dtype=float)
    idx, _ = find_peaks(y, prominence=rel_prominence * y.max())
    peaks = []
    for i in idx:
        y0, y1, y2 = y[i - 1], y[i], y[i + 1]
        denom = y0 - 2 * y1 + y2
        shift = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
        dx = grid[i + 1] - grid[i]
        x = grid[i] + shift * dx
        height = y1 - 0.25 * (y0 - y2) * shift
        half = 0.5 * height
        left = _half_crossing(grid, y, i, half, -1)
        right = _half_crossing(grid, y, i, half, +1)
        peaks.append(Peak(float(x), float(height), float(right - left)))
    return peaks


def charge_peaks(model: SystemModel, grid=None, points: int = 20001) -> List[Peak]:
    """Peaks of ``|chi_n|**2`` (default grid: omega_idt*(1 -+ 2/n) widened to contain omega_0)."""
    if grid is None:
        w = model.omega_idt
        half = min(2.0 / model.n, 0.9) * w
        grid = np.linspace(min(w - half, 0.9 * model.omega_0), max(w + half, 1.1 * model.omega_0), points)
    chi2 = np.abs(charge_response(model, grid)) ** 2
    return find_spectrum_peaks(grid, chi2)


def splitting(model: SystemModel, grid=None, points: int = 20001) -> float:
    """Distance between the two dominant ``|chi|**2`` peaks, rad/s.

    Raises
    ------
    NotSplitError
        If the charge response has a single peak.
    """
    peaks = charge_peaks(model, grid, points)
    if len(peaks) < 2:
        raise NotSplitError(f"charge response has {len(peaks)} peak(s)")
    top = sorted(peaks, key=lambda p: p.height, reverse=True)[:2]
    return abs(top[0].omega - top[1].omega)


# -- flux tuning --------------------------------------------------------------


def resonant_flux(model: SystemModel) -> float:
    """Smallest non-negative phi_ext with ``omega_0(phi_ext) = omega_idt``."""
    L_target = 1.0 / (model.omega_idt**2 * model.C_sigma)
    ratio = model.atom.L_J0 / L_target
    if not 0 < ratio <= 1:
        raise DomainError(
            f"omega_0 cannot be tuned down to omega_idt: L_J0/L_target = {ratio:.6g} (need <= 1)"
        )
    return math.acos(ratio) / (2.0 * math.pi)


@dataclass(frozen=True)
class FluxMap:
    """``|observable|**2`` on a flux x frequency grid.

    ``values[i, j]`` belongs to ``flux_grid[i]`` and ``freq_grid[j]``.  Rows
    whose flux lies on an invalid branch are nan and ``valid[i]`` is False.
    For ``r_g`` the attribute ``inverted`` holds ``(1 - |r_g|**2)`` normalized
    to its maximum over the map, which turns reflection dips into peaks.
    """

    flux_grid: np.ndarray
    freq_grid: np.ndarray
    values: np.ndarray
    valid: np.ndarray
    observable: str
    inverted: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        if self.values.shape != (self.flux_grid.size, self.freq_grid.size):
            raise DomainError("values shape must be (len(flux_grid), len(freq_grid))")


def flux_map(model: SystemModel, flux_grid, freq_grid, observable: str = "r_g") -> FluxMap:
    """Sweep the external flux and record ``|r_g|**2`` or ``|r_ac|**2``.

    ``freq_grid`` is angular frequency in rad/s.
    """
    fns = {"r_g": gate_reflection, "r_ac": acoustic_reflection}
    if observable not in fns:
        raise DomainError(f"observable must be 'r_g' or 'r_ac', got {observable!r}")
    fn = fns[observable]
    flux_grid = np.asarray(flux_grid, dtype=float)
    freq_grid = np.asarray(freq_grid, dtype=float)
    values = np.full((flux_grid.size, freq_grid.size), np.nan)
    valid = np.zeros(flux_grid.size, dtype=bool)
    for i, phi in enumerate(flux_grid):
        try:
            m = model.with_phi_ext(phi)
        except FluxBranchError:
            continue
        values[i] = np.abs(fn(m, freq_grid)) ** 2
        valid[i] = True
    inverted = None
    if observable == "r_g":
        dip = 1.0 - values
        peak = np.nanmax(dip) if valid.any() else np.nan
        inverted = dip / peak if peak > 0 else dip
    return FluxMap(flux_grid, freq_grid, values, valid, observable, inverted)
