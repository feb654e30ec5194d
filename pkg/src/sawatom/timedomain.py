"""Fixed-step integration of the linearized delay equations.

State variables are the junction flux ``phi_J`` and the scaled charge
``psi = p_J / (C_sigma * omega_0)``:

    dphi_J/dt = omega_0*psi - (kappa*n + gamma_g)*phi_J
                - kappa * sum_{m>=1} h_m * phi_J(t - m*tau)
                + (C_c/C_sigma) dU/dt + 2*(C_g/C_sigma) dg_in/dt
    dpsi/dt   = -omega_0*phi_J

with ``kappa = Z0*C_c**2/(2*L_J*C_sigma**2)``, ``h_m`` the integer stencil of
H_n and ``U(t) = sum_j (a + b)(t - j*tau)`` the acoustic drive summed over
the fingers (``a`` enters at the left outer finger, ``b`` at the right one).
The delayed derivative of ``p_J`` has been replaced by ``-phi_J/L_J`` before
delaying, so no neutral (derivative-of-delay) terms remain.

Outputs::

    out_left  = b(t - (n-1)*tau) + g * sum_j p_J(t - j*tau)
    out_right = a(t - (n-1)*tau) + g * sum_j p_J(t - j*tau)
    out_gate  = g_in + Z_el*(C_g/C_sigma) * p_J

with ``g = Z0*C_c/(2*C_sigma)``.  Acoustic ports sit at the outer fingers.

Discretization is the trapezoidal rule with drives entering as exact
increments.  Delays are whole multiples of the step (``tau = M*dt``).  The
rule maps ``1j*omega`` onto ``1j*(2/dt)*tan(omega*dt/2)``, which keeps the
network exactly lossless but moves the atom resonance; ``omega_0`` is
therefore prewarped to ``(2/dt)*tan(omega_0*dt/2)`` (by rescaling L_J) so the
discrete resonance sits at the physical frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

import numpy as np

from .errors import DomainError, InstabilityError, SpectralCoverageError
from .idt import array_stencil, h_stencil
from .response import ResponseSpectrum, SystemModel, damping, gate_damping

__all__ = [
    "Impulse",
    "GaussianPulse",
    "CW",
    "DelaySystem",
    "TimeTrace",
    "EnergyReport",
    "TimeDomainScattering",
    "build_delay_system",
    "integrate",
    "scattering_from_time_domain",
    "energy_audit",
]

DEFAULT_STEPS_PER_TAU = 64
BLOWUP_FACTOR = 1e12
PORTS = ("left", "right", "gate")


def _check_port(port):
    if port not in PORTS:
        raise DomainError(f"port must be one of {PORTS}, got {port!r}")


@dataclass(frozen=True)
class Impulse:
    """Voltage impulse: a unit flux step at ``t0`` (default one tau)."""

    port: str = "left"
    amplitude: float = 1.0
    t0: Optional[float] = None

    def __post_init__(self):
        _check_port(self.port)

    def waveform(self, t, model):
        t0 = model.tau if self.t0 is None else self.t0
        return np.where(t >= t0, self.amplitude, 0.0)

    def end_time(self, model):
        return model.tau if self.t0 is None else self.t0


@dataclass(frozen=True)
class GaussianPulse:
    """Gaussian-enveloped carrier, ``exp(-(sigma*(t-t0))**2/2) * cos(center*(t-t0))``.

    Defaults: ``center = omega_idt``, ``sigma = 0.2*omega_idt`` (spectral
    standard deviation, rad/s), ``t0 = 6/sigma``.
    """

    port: str = "left"
    center: Optional[float] = None
    sigma: Optional[float] = None
    t0: Optional[float] = None
    amplitude: float = 1.0

    def __post_init__(self):
        _check_port(self.port)

    def _params(self, model):
        center = model.omega_idt if self.center is None else self.center
        sigma = 0.2 * model.omega_idt if self.sigma is None else self.sigma
        t0 = 6.0 / sigma if self.t0 is None else self.t0
        return center, sigma, t0

    def waveform(self, t, model):
        center, sigma, t0 = self._params(model)
        x = t - t0
        return self.amplitude * np.exp(-0.5 * (sigma * x) ** 2) * np.cos(center * x)

    def end_time(self, model):
        _, sigma, t0 = self._params(model)
        return t0 + 6.0 / sigma


@dataclass(frozen=True)
class CW:
    """Continuous wave switched on with a raised-cosine ramp of ``ramp`` seconds."""

    omega: float
    port: str = "left"
    amplitude: float = 1.0
    ramp: float = 0.0

    def __post_init__(self):
        _check_port(self.port)

    def waveform(self, t, model):
        env = np.ones_like(t)
        if self.ramp > 0:
            env = np.where(t < self.ramp, 0.5 * (1 - np.cos(np.pi * t / self.ramp)), 1.0)
        return self.amplitude * env * np.sin(self.omega * t)

    def end_time(self, model):
        return math.inf


@dataclass(frozen=True)
class DelaySystem:
    """Discretized model: ``tau = steps_per_tau * dt`` exactly.

    ``stencil_h`` and ``stencil_a`` hold the integer coefficients of H_n and
    A_n at delays ``0, tau, ..., (n-1)*tau``.
    """

    model: SystemModel
    dt: float
    steps_per_tau: int
    drive: object
    stencil_h: np.ndarray = field(repr=False)
    stencil_a: np.ndarray = field(repr=False)
    prewarp: bool = True

    @property
    def history_depth(self) -> int:
        return (self.model.n - 1) * self.steps_per_tau + 1

    @property
    def omega_0_discrete(self) -> float:
        w0 = self.model.omega_0
        if not self.prewarp:
            return w0
        return 2.0 / self.dt * math.tan(0.5 * w0 * self.dt)


def build_delay_system(model: SystemModel, dt_target: Optional[float] = None, drive=None, prewarp: bool = True) -> DelaySystem:
    """Snap ``dt`` to the largest divisor ``tau/M`` not exceeding ``dt_target``.

    Raises
    ------
    DomainError
        ``dt_target >= tau``, a non-positive step, or a model that evaluates
        Z0 per frequency (which has no finite delay stencil).
    """
    if model.z0_per_frequency:
        raise DomainError("the time-domain model needs a frequency-independent Z0")
    tau = model.tau
    if dt_target is None:
        dt_target = tau / DEFAULT_STEPS_PER_TAU
    if not dt_target > 0:
        raise DomainError(f"dt_target must be positive, got {dt_target!r}")
    if dt_target >= tau:
        raise DomainError(f"dt_target = {dt_target:g} s does not resolve tau = {tau:g} s")
    M = math.ceil(tau / dt_target * (1 - 1e-12))
    if drive is None:
        drive = GaussianPulse()
    return DelaySystem(
        model=model,
        dt=tau / M,
        steps_per_tau=M,
        drive=drive,
        stencil_h=h_stencil(model.n),
        stencil_a=array_stencil(model.n),
        prewarp=prewarp,
    )


@dataclass(frozen=True)
class TimeTrace:
    """Sampled trajectory.  Fields are flux (Wb) except ``pJ`` (C)."""

    t: np.ndarray
    pJ: np.ndarray
    phiJ: np.ndarray
    phi_in: Dict[str, np.ndarray]
    phi_out_left: np.ndarray
    phi_out_right: np.ndarray
    phi_out_gate: np.ndarray

    @property
    def phi_out(self) -> Dict[str, np.ndarray]:
        return {"left": self.phi_out_left, "right": self.phi_out_right, "gate": self.phi_out_gate}


def _delay(x, shift):
    if shift == 0:
        return x
    y = np.zeros_like(x)
    if shift < x.size:
        y[shift:] = x[: x.size - shift]
    return y


def _stencil_sum(x, weights, M):
    out = np.zeros_like(x)
    for m, w in enumerate(weights):
        if w:
            out += w * _delay(x, m * M)
    return out


def integrate(sys: DelaySystem, duration: float) -> TimeTrace:
    """Integrate from rest over ``duration`` seconds, sampling every step.

    Raises
    ------
    InstabilityError
        Any state sample exceeds ``1e12`` times the drive amplitude.
    """
    model = sys.model
    M, dt, n = sys.steps_per_tau, sys.dt, model.n
    if not duration > (n - 1) * model.tau:
        raise DomainError("duration must exceed the longest delay (n-1)*tau")
    N = int(math.ceil(duration / dt - 1e-9)) + 1
    t = np.arange(N) * dt

    drive_wave = np.asarray(sys.drive.waveform(t, model), dtype=float)
    phi_in = {p: np.zeros(N) for p in PORTS}
    phi_in[sys.drive.port] = drive_wave
    if sys.drive.port == "gate" and not model.has_gate:
        raise DomainError("gate drive requested but the model has no gate")
    scale = max(float(np.max(np.abs(drive_wave))), 1e-300)

    C_sigma = model.C_sigma
    w0 = sys.omega_0_discrete
    # prewarping omega_0 means prewarping L_J everywhere it appears, else the
    # discrete network stops being lossless
    L = 1.0 / (C_sigma * w0**2)
    kappa = model.Z0 * model.C_c**2 / (2.0 * L * C_sigma**2)
    c = kappa * n + model.atom.Z_el * model.atom.C_g**2 / (L * C_sigma**2)
    U = _stencil_sum(phi_in["left"] + phi_in["right"], sys.stencil_a, M)
    forcing = (model.C_c / C_sigma) * np.diff(U) + 2.0 * (model.atom.C_g / C_sigma) * np.diff(phi_in["gate"])

    h = 0.5 * dt
    J = np.array([[-c, w0], [-w0, 0.0]])
    Minv = np.linalg.inv(np.eye(2) - h * J)
    P = Minv @ (np.eye(2) + h * J)
    bvec = Minv[:, 0]
    P00, P01, P10, P11 = P.ravel()
    b0, b1 = bvec

    hs = sys.stencil_h[1:].astype(float)
    phi = np.zeros(N)
    psi = np.zeros(N)
    limit = BLOWUP_FACTOR * scale
    x0 = y0 = 0.0
    k = 0
    while k < N - 1:
        k_end = min(k + M, N - 1)
        # delayed self-coupling S_j for j = k .. k_end, all from finished samples
        idx = np.arange(k, k_end + 1)
        S = np.zeros(idx.size)
        for m, w in enumerate(hs, start=1):
            src = idx - m * M
            ok = src >= 0
            S[ok] += w * phi[src[ok]]
        u = forcing[k:k_end] - h * kappa * (S[:-1] + S[1:])
        for j in range(k_end - k):
            uj = u[j]
            x0, y0 = P00 * x0 + P01 * y0 + b0 * uj, P10 * x0 + P11 * y0 + b1 * uj
            phi[k + j + 1] = x0
            psi[k + j + 1] = y0
        if not (abs(x0) < limit and abs(y0) < limit and math.isfinite(x0) and math.isfinite(y0)):
            bad = k + 1 + int(np.argmax(~(np.abs(phi[k + 1 : k_end + 1]) < limit) | ~(np.abs(psi[k + 1 : k_end + 1]) < limit)))
            raise InstabilityError(f"state exceeded {BLOWUP_FACTOR:g} x drive scale at step {bad}", bad)
        k = k_end

    pJ = C_sigma * w0 * psi
    g = model.Z0 * model.C_c / (2.0 * C_sigma)
    emitted = g * _stencil_sum(pJ, sys.stencil_a, M)
    shift = (n - 1) * M
    out_left = _delay(phi_in["right"], shift) + emitted
    out_right = _delay(phi_in["left"], shift) + emitted
    out_gate = phi_in["gate"] + model.atom.Z_el * (model.atom.C_g / C_sigma) * pJ
    return TimeTrace(t, pJ, phi, phi_in, out_left, out_right, out_gate)


# -- energy ------------------------------------------------------------------


@dataclass(frozen=True)
class EnergyReport:
    """Port energies ``sum(diff(phi)**2) / (Z dt)`` in joule.

    ``ratio`` is out/in; ``ok`` tests ``|ratio - 1| <= tol``.  ``passive``
    checks that cumulative output never exceeds cumulative input.
    """

    energy_in: Dict[str, float]
    energy_out: Dict[str, float]
    ratio: float
    ok: bool
    passive: bool
    tol: float

    def breakdown(self) -> str:
        e_in = sum(self.energy_in.values())
        parts = [f"{p}: in {self.energy_in[p] / e_in:.9f}, out {self.energy_out[p] / e_in:.9f}" for p in PORTS]
        return f"out/in = {self.ratio:.12f} ({'; '.join(parts)})"


def _port_weights(model):
    # relative to the acoustic port; avoids dividing by Z0 = 0 on a decoupled line
    gate = model.Z0 / model.atom.Z_el if model.has_gate else 0.0
    return {"left": 1.0, "right": 1.0, "gate": gate}, (model.Z0 if model.Z0 > 0 else 1.0)


def energy_audit(trace: TimeTrace, sys: DelaySystem, tol: float = 1e-6) -> EnergyReport:
    """Compare outgoing and incoming energy over all three ports."""
    if isinstance(sys.drive, CW):
        raise DomainError("energy audit needs a drive of finite energy")
    weights, Z_ref = _port_weights(sys.model)
    dt = sys.dt
    cum_in = np.zeros(trace.t.size - 1)
    cum_out = np.zeros(trace.t.size - 1)
    e_in, e_out = {}, {}
    for p in PORTS:
        pin = weights[p] * np.diff(trace.phi_in[p]) ** 2 / (Z_ref * dt)
        pout = weights[p] * np.diff(trace.phi_out[p]) ** 2 / (Z_ref * dt)
        e_in[p] = float(pin.sum())
        e_out[p] = float(pout.sum())
        cum_in += pin
        cum_out += pout
    total_in = sum(e_in.values())
    if total_in <= 0:
        raise DomainError("drive injects no energy")
    ratio = sum(e_out.values()) / total_in
    ci, co = np.cumsum(cum_in), np.cumsum(cum_out)
    passive = bool(np.all(co <= ci + 1e-12 * total_in))
    return EnergyReport(e_in, e_out, ratio, abs(ratio - 1.0) <= tol, passive, tol)


# -- scattering -----------------------------------------------------------------


@dataclass(frozen=True)
class TimeDomainScattering:
    """Scattering extracted from time traces.

    For an acoustic drive ``r`` is the reflection at the IDT center and ``t``
    the transmission between ports half a pitch outside the outer fingers.
    For a gate drive ``r`` is the gate reflection and ``t`` the acoustic
    output at the near outer finger.  ``raw`` holds the unextrapolated
    ``(r, t)`` at the coarse step.
    """

    r: ResponseSpectrum
    t: ResponseSpectrum
    raw: Tuple[ResponseSpectrum, ResponseSpectrum]
    margin_db: float
    dt: float
    duration: float
    extrapolated: bool


def _ringdown_rate(model):
    # slowest amplitude decay: the least-damped pole, or gamma_g/2 on a decoupled line
    from .spectral import find_poles

    if model.mat.K2 == 0:
        return 0.5 * gate_damping(model)
    poles = find_poles(model).poles
    return float(np.min(np.abs(poles.imag))) if poles.size else 0.5 * damping(model, model.omega_0).real


def _default_duration(sys: DelaySystem, decay_lengths: float = 20.0) -> float:
    model = sys.model
    start = sys.drive.end_time(model) + (model.n + 2) * model.tau
    # at least ~100 frequency bins across the main lobe
    floor = 50.0 * model.n * model.tau
    rate = _ringdown_rate(model)
    if rate <= 1e-9 * model.omega_idt:
        return max(start + model.tau, floor)
    return max(start + decay_lengths / rate, floor)


def _spectra(sys: DelaySystem, duration: float, band, margin_check: bool):
    model = sys.model
    trace = integrate(sys, duration)
    port = sys.drive.port
    din = np.fft.fft(np.diff(trace.phi_in[port]))
    freqs = 2.0 * np.pi * np.fft.fftfreq(din.size, sys.dt)
    sel = (freqs >= band[0]) & (freqs <= band[1])
    if not sel.any():
        raise DomainError("band contains no frequency bins; lengthen the record")
    mag = np.abs(din)
    margin_db = 20.0 * math.log10(max(mag[sel].min(), 1e-300) / mag[freqs > 0].max())
    if margin_check and margin_db < -20.0:
        raise SpectralCoverageError(f"drive spectrum falls {-margin_db:.1f} dB below its peak inside the band", margin_db)
    w = freqs[sel]
    ratio = lambda out: np.fft.fft(np.diff(out))[sel] / din[sel]  # noqa: E731
    tau, n = model.tau, model.n
    if port == "gate":
        r = ratio(trace.phi_out_gate)
        t = ratio(trace.phi_out_left)
    else:
        near, far = ("left", "right") if port == "left" else ("right", "left")
        r = ratio(trace.phi_out[near]) * np.exp(1j * w * tau * (n - 1))
        t = ratio(trace.phi_out[far]) * np.exp(-1j * w * tau)
    return w, r, t, margin_db, trace


def scattering_from_time_domain(
    sys: DelaySystem,
    band: Optional[Tuple[float, float]] = None,
    duration: Optional[float] = None,
    extrapolate: bool = True,
) -> TimeDomainScattering:
    """Fourier quotient of output over input increments on ``band`` (rad/s).

    With ``extrapolate`` the run is repeated at ``dt/2`` over the same record
    and the two spectra are combined as ``(4*X(dt/2) - X(dt))/3``, cancelling
    the second-order step error.

    Raises
    ------
    SpectralCoverageError
        The drive spectrum inside the band drops more than 20 dB below its peak.
    """
    model = sys.model
    if isinstance(sys.drive, CW):
        raise DomainError("scattering extraction needs a pulse or impulse drive")
    if band is None:
        band = (model.omega_idt * (1 - 1 / model.n), model.omega_idt * (1 + 1 / model.n))
    if duration is None:
        duration = _default_duration(sys)
    # whole number of coarse steps so the fine run shares the frequency bins
    steps = int(math.ceil(duration / sys.dt - 1e-9))
    duration = steps * sys.dt
    w, r1, t1, margin_db, _ = _spectra(sys, duration, band, True)
    raw = (ResponseSpectrum(w, r1, "r"), ResponseSpectrum(w, t1, "t"))
    if not extrapolate:
        return TimeDomainScattering(raw[0], raw[1], raw, margin_db, sys.dt, duration, False)
    fine = DelaySystem(sys.model, sys.dt / 2, sys.steps_per_tau * 2, sys.drive, sys.stencil_h, sys.stencil_a, sys.prewarp)
    w2, r2, t2, _, _ = _spectra(fine, duration, band, False)
    if w2.size != w.size or not np.allclose(w2, w, rtol=1e-12):
        raise DomainError("coarse and fine runs produced different frequency bins")
    r = (4.0 * r2 - r1) / 3.0
    t = (4.0 * t2 - t1) / 3.0
    return TimeDomainScattering(
        ResponseSpectrum(w, r, "r"), ResponseSpectrum(w, t, "t"), raw, margin_db, sys.dt, duration, True
    )
