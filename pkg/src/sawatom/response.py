"""Linear response of the SAW-coupled transmon.

The atom is a linearized LC oscillator (Josephson inductance ``L_J``, total
capacitance ``C_sigma``) whose damping is the complex, frequency-dependent
function

    gamma_n(omega) = Z0 * C_c**2 / (2 * L_J * C_sigma**2) * H_n(omega)

so that every observable shares the denominator

    D(omega) = omega**2 - omega_0**2 - 1j * (gamma_n(omega) + gamma_g) * omega

with ``gamma_g = C_g**2 * Z_el / (L_J * C_sigma**2)`` the loss into an optional
electric gate.  Time dependence is ``exp(+1j*omega*t)``, matching the delay
factor ``exp(-1j*omega*tau)`` of the IDT.

Reference planes
----------------
``acoustic_reflection`` is quoted at the IDT center, which makes it purely
``1j*Re[gamma]*omega/D``.  ``acoustic_transmission`` is quoted between ports
half a pitch outside the outer fingers, so a decoupled line gives the pure
delay ``exp(-1j*omega*tau*n)``.  ``transduction`` is quoted at the outer finger.
Magnitudes are plane independent.

Power normalization
-------------------
A flux wave ``phi`` carries power ``|phi|**2 omega**2 / (2 Z)`` on a line of
impedance ``Z`` (``Z0`` acoustically, ``Z_el`` on the gate).  With these
weights the three-port network is lossless: see :func:`power_balance`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np
from scipy.constants import physical_constants

from .errors import DomainError, FluxBranchError, FluxDivergenceError, GateDisabledError
from .idt import IdtGeometry, array_factor, h_factor, idt_center_frequency, idt_delay, pitch_for_frequency
from .materials import (
    BUILTIN_MATERIALS,
    MaterialParams,
    characteristic_impedance,
    coupling_capacitance,
    get_material,
)

__all__ = [
    "FLUX_QUANTUM",
    "TransmonParams",
    "SystemModel",
    "ResponseSpectrum",
    "OBSERVABLES",
    "flux_inductance",
    "josephson_inductance",
    "lock_to_idt",
    "default_model",
    "damping",
    "gate_damping",
    "normalized_decay",
    "denominator",
    "charge_response",
    "charge_transfer",
    "acoustic_reflection",
    "acoustic_transmission",
    "gate_reflection",
    "transduction",
    "gate_from_acoustic",
    "admittance_response",
    "power_balance",
    "evaluate",
]

FLUX_QUANTUM = physical_constants["mag. flux quantum"][0]


def josephson_inductance(E_J: float) -> float:
    """``L_J = Phi_0**2 / (4 pi**2 E_J)`` for a Josephson energy in joule."""
    if not E_J > 0:
        raise DomainError(f"E_J must be positive, got {E_J!r}")
    return FLUX_QUANTUM**2 / (4.0 * math.pi**2 * E_J)


def flux_inductance(L_J0: float, phi_ext: float) -> float:
    """Flux-tuned inductance ``L_J0 / cos(2 pi phi_ext)`` (phi_ext in flux quanta).

    Raises
    ------
    FluxDivergenceError
        If ``|cos(2 pi phi_ext)| < 1e-9``.
    FluxBranchError
        If the cosine is negative, where the linear model has no atom frequency.
    """
    c = math.cos(2.0 * math.pi * phi_ext)
    if abs(c) < 1e-9:
        raise FluxDivergenceError(f"L_J diverges at phi_ext = {phi_ext!r}")
    if c < 0:
        raise FluxBranchError(f"cos(2 pi phi_ext) < 0 at phi_ext = {phi_ext!r}")
    return L_J0 / c


@dataclass(frozen=True)
class TransmonParams:
    """Linearized transmon.

    Parameters
    ----------
    C_J : float
        Junction capacitance, F.
    L_J0 : float
        Josephson inductance at zero flux, H.
    C_g : float
        Gate capacitance, F.  Zero disables the gate.
    Z_el : float
        Gate line impedance, ohm.
    phi_ext : float
        External flux through the SQUID loop in units of the flux quantum.
    """

    C_J: float
    L_J0: float
    C_g: float = 0.0
    Z_el: float = 50.0
    phi_ext: float = 0.0

    def __post_init__(self):
        if not self.C_J >= 0:
            raise DomainError(f"C_J must be non-negative, got {self.C_J!r}")
        if not self.L_J0 > 0:
            raise DomainError(f"L_J0 must be positive, got {self.L_J0!r}")
        if not self.C_g >= 0:
            raise DomainError(f"C_g must be non-negative, got {self.C_g!r}")
        if not self.Z_el > 0:
            raise DomainError(f"Z_el must be positive, got {self.Z_el!r}")

    @classmethod
    def from_EJ(cls, C_J, E_J, C_g=0.0, Z_el=50.0, phi_ext=0.0):
        return cls(C_J=C_J, L_J0=josephson_inductance(E_J), C_g=C_g, Z_el=Z_el, phi_ext=phi_ext)

    @property
    def L_J(self) -> float:
        return flux_inductance(self.L_J0, self.phi_ext)

    @property
    def has_gate(self) -> bool:
        return self.C_g > 0


@dataclass(frozen=True)
class SystemModel:
    """Immutable composition of substrate, IDT and atom.

    Derived quantities (``Z0``, ``C_c``, ``C_sigma``, ``tau``, ``omega_idt``,
    ``L_J``, ``omega_0``) are computed on construction.  ``omega_z0`` is the
    frequency at which ``Z0`` was actually evaluated.

    Parameters
    ----------
    approx_csigma : bool
        Use ``C_sigma = n*C_c`` instead of ``n*C_c + C_J + C_g``.
    omega_ref : float, optional
        Frequency at which ``Z0`` is evaluated and then held fixed.  Defaults
        to ``omega_idt``.
    z0_per_frequency : bool
        Evaluate ``Z0 = K2/(W eps_inf omega)`` at every frequency instead.
    """

    mat: MaterialParams
    geom: IdtGeometry
    atom: TransmonParams
    approx_csigma: bool = False
    omega_ref: Optional[float] = None
    z0_per_frequency: bool = False

    omega_z0: float = field(init=False)
    C_c: float = field(init=False)
    C_sigma: float = field(init=False)
    tau: float = field(init=False)
    omega_idt: float = field(init=False)
    Z0: float = field(init=False)
    L_J: float = field(init=False)
    omega_0: float = field(init=False)

    def __post_init__(self):
        tau = idt_delay(self.geom, self.mat)
        omega_idt = idt_center_frequency(self.geom, self.mat)
        omega_ref = omega_idt if self.omega_ref is None else float(self.omega_ref)
        C_c = coupling_capacitance(self.mat, self.geom.W, self.geom.finger_style)
        if self.approx_csigma:
            C_sigma = self.geom.n * C_c
        else:
            C_sigma = self.geom.n * C_c + self.atom.C_J + self.atom.C_g
        L_J = self.atom.L_J
        for name, value in [
            ("omega_z0", omega_ref),
            ("C_c", C_c),
            ("C_sigma", C_sigma),
            ("tau", tau),
            ("omega_idt", omega_idt),
            ("Z0", characteristic_impedance(self.mat, self.geom.W, omega_ref)),
            ("L_J", L_J),
            ("omega_0", 1.0 / math.sqrt(L_J * C_sigma)),
        ]:
            object.__setattr__(self, name, value)

    @property
    def n(self) -> int:
        return self.geom.n

    @property
    def has_gate(self) -> bool:
        return self.atom.has_gate

    @property
    def transit_time(self) -> float:
        """Phonon travel time across the IDT, ``n * tau``."""
        return self.n * self.tau

    def z0_at(self, omega):
        if self.z0_per_frequency:
            return self.mat.K2 / (self.geom.W * self.mat.eps_inf * np.asarray(omega))
        return self.Z0

    def replace(self, **changes) -> "SystemModel":
        """Copy with ``mat``, ``geom``, ``atom`` or flags replaced."""
        return replace(self, **changes)

    def with_phi_ext(self, phi_ext: float) -> "SystemModel":
        return self.replace(atom=replace(self.atom, phi_ext=phi_ext))

    def with_K2(self, K2: float) -> "SystemModel":
        return self.replace(mat=self.mat.with_K2(K2))

    def without_gate(self) -> "SystemModel":
        return self.replace(atom=replace(self.atom, C_g=0.0))


def lock_to_idt(
    mat: MaterialParams,
    geom: IdtGeometry,
    C_J: float,
    C_g: float = 0.0,
    Z_el: float = 50.0,
    approx_csigma: bool = False,
    frequency_ratio: float = 1.0,
) -> TransmonParams:
    """Transmon whose zero-flux frequency is ``frequency_ratio * omega_idt``."""
    if not frequency_ratio > 0:
        raise DomainError(f"frequency_ratio must be positive, got {frequency_ratio!r}")
    C_c = coupling_capacitance(mat, geom.W, geom.finger_style)
    C_sigma = geom.n * C_c if approx_csigma else geom.n * C_c + C_J + C_g
    omega_0 = frequency_ratio * idt_center_frequency(geom, mat)
    return TransmonParams(C_J=C_J, L_J0=1.0 / (omega_0**2 * C_sigma), C_g=C_g, Z_el=Z_el)


def default_model(
    material: Union[str, MaterialParams] = "LiNbO3",
    n: int = 10,
    f_idt: float = 3e9,
    W: float = 30e-6,
    C_J: float = 1e-15,
    C_g: float = 10e-18,
    Z_el: float = 50.0,
    approx_csigma: bool = False,
    frequency_ratio: float = 1.0,
) -> SystemModel:
    """Desk-scale scenario: 3 GHz IDT, W = 30 um, atom locked to the IDT."""
    mat = get_material(material, BUILTIN_MATERIALS) if isinstance(material, str) else material
    geom = IdtGeometry(n=n, pitch=pitch_for_frequency(f_idt, mat.v_s), W=W)
    atom = lock_to_idt(mat, geom, C_J, C_g, Z_el, approx_csigma, frequency_ratio)
    return SystemModel(mat, geom, atom, approx_csigma=approx_csigma)


def _omega(omega):
    return np.asarray(omega)


def _coupling_rate(model: SystemModel, omega):
    # gamma_n / H_n
    return model.z0_at(omega) * model.C_c**2 / (2.0 * model.L_J * model.C_sigma**2)


def damping(model: SystemModel, omega):
    """Complex damping ``gamma_n(omega)`` in rad/s; accepts complex omega."""
    omega = _omega(omega)
    return _coupling_rate(model, omega) * h_factor(model.n, omega, model.tau)


def gate_damping(model: SystemModel) -> float:
    """``gamma_g = C_g**2 Z_el / (L_J C_sigma**2)``; zero without a gate."""
    a = model.atom
    return a.C_g**2 * a.Z_el / (model.L_J * model.C_sigma**2)


def normalized_decay(K2: float, n: int) -> float:
    """Closed-form ``gamma_0 / omega_0 = 0.5 * n * K2``."""
    if not (0 <= K2 < 1):
        raise DomainError(f"K2 must be a fraction in [0, 1), got {K2!r}")
    if int(n) != n or n < 1:
        raise DomainError(f"n must be a positive integer, got {n!r}")
    return 0.5 * n * K2


def denominator(model: SystemModel, omega, include_gate: bool = True):
    """``omega**2 - omega_0**2 - 1j*(gamma_n + gamma_g)*omega``; entire in omega."""
    omega = _omega(omega)
    g = damping(model, omega)
    if include_gate:
        g = g + gate_damping(model)
    return omega**2 - model.omega_0**2 - 1j * g * omega


def charge_response(model: SystemModel, omega):
    """Charge susceptibility ``chi_n = 1 / D`` (s**2).

    The junction charge is ``p_J = chi_n * V_in / L_J`` with the drive voltage
    ``V_in = 1j*omega*C_c*A_n*phi_in/C_sigma``.  Only ``|chi|**2`` normalized
    to its maximum is comparable with published spectra.
    """
    return 1.0 / denominator(model, omega)


def charge_transfer(model: SystemModel, omega):
    """``-omega_0**2 * chi_n``: the current ratio of the parallel-RLC picture."""
    return -model.omega_0**2 * charge_response(model, omega)


def acoustic_reflection(model: SystemModel, omega):
    """``r_ac = 1j*Re[gamma_n]*omega / D`` at the IDT center plane."""
    omega = _omega(omega)
    return _ratio(1j * damping(model, omega).real * omega, denominator(model, omega))


def acoustic_transmission(model: SystemModel, omega):
    """``t_ac = exp(-1j*omega*tau*n) * (1 + r_ac)``.

    Without a gate ``|r_ac|**2 + |t_ac|**2 == 1``.
    """
    omega = _omega(omega)
    return np.exp(-1j * omega * model.tau * model.n) * (1.0 + acoustic_reflection(model, omega))


def _ratio(num, den):
    # a decoupled atom (zero numerator) scatters nothing, even exactly on its resonance
    num, den = np.broadcast_arrays(np.asarray(num, dtype=complex), np.asarray(den, dtype=complex))
    out = np.zeros(num.shape, dtype=complex)
    np.divide(num, den, out=out, where=num != 0)
    return out[()] if out.ndim == 0 else out


def _require_gate(model):
    if not model.has_gate:
        raise GateDisabledError("the model has no gate (C_g = 0)")


def gate_reflection(model: SystemModel, omega):
    """``r_g = 1 + 2j*gamma_g*omega / D`` seen from the open-ended gate line."""
    _require_gate(model)
    omega = _omega(omega)
    return 1.0 + 2j * gate_damping(model) * omega / denominator(model, omega)


def transduction(model: SystemModel, omega):
    """Acoustic flux emitted at one end per gate input flux, ``t_ac/g``.

    ``1j*C_c*C_g*Z0*A_n*omega / (L_J C_sigma**2 D)``.  Each acoustic end
    receives this amplitude, so ``|r_g|**2 + 2 (Z_el/Z0) |t_ac/g|**2 == 1``.
    """
    _require_gate(model)
    omega = _omega(omega)
    A = array_factor(model.n, omega, model.tau)
    num = 1j * model.C_c * model.atom.C_g * model.z0_at(omega) * A * omega
    return _ratio(num, model.L_J * model.C_sigma**2 * denominator(model, omega))


def gate_from_acoustic(model: SystemModel, omega):
    """Gate output flux per acoustic input flux (reverse of :func:`transduction`)."""
    _require_gate(model)
    omega = _omega(omega)
    A = array_factor(model.n, omega, model.tau)
    num = 1j * model.C_c * model.atom.C_g * model.atom.Z_el * A * omega
    return num / (model.L_J * model.C_sigma**2 * denominator(model, omega))


def admittance_response(model: SystemModel, omega):
    """Inductor-branch current ratio ``Y_L / (Y_L + Y_C + Y_a)`` of the parallel circuit.

    ``Y_L = 1/(1j*omega*L_J)``, ``Y_C = 1j*omega*C_sigma`` and the radiation
    admittance ``Y_a = Z0 C_c**2 omega_0**2 H_n / 2`` (plus the gate's share).
    Identical to :func:`charge_transfer`.
    """
    omega = _omega(omega)
    Y_L = 1.0 / (1j * omega * model.L_J)
    Y_C = 1j * omega * model.C_sigma
    scale = model.L_J * model.C_sigma**2 * model.omega_0**2
    Y_a = (damping(model, omega) + gate_damping(model)) * scale
    return Y_L / (Y_L + Y_C + Y_a)


def power_balance(model: SystemModel, omega, drive: str = "acoustic"):
    """Outgoing over incoming power for a wave entering one port.

    ``drive="acoustic"``: ``|r_ac|**2 + |t_ac|**2 + (Z0/Z_el)|t_g/ac|**2``.
    ``drive="gate"``: ``|r_g|**2 + 2 (Z_el/Z0) |t_ac/g|**2``.
    Both equal one for the lossless network.
    """
    omega = _omega(omega)
    r = acoustic_reflection(model, omega)
    t = acoustic_transmission(model, omega)
    if drive == "acoustic":
        total = np.abs(r) ** 2 + np.abs(t) ** 2
        if model.has_gate:
            total = total + model.z0_at(omega) / model.atom.Z_el * np.abs(gate_from_acoustic(model, omega)) ** 2
        return total
    if drive == "gate":
        rg = gate_reflection(model, omega)
        tg = transduction(model, omega)
        return np.abs(rg) ** 2 + 2.0 * model.atom.Z_el / model.z0_at(omega) * np.abs(tg) ** 2
    raise DomainError(f"drive must be 'acoustic' or 'gate', got {drive!r}")


OBSERVABLES = {
    "chi": charge_response,
    "gamma_n": damping,
    "r_ac": acoustic_reflection,
    "t_ac": acoustic_transmission,
    "r_g": gate_reflection,
    "t_ac_g": transduction,
    "t_g_ac": gate_from_acoustic,
    "admittance": admittance_response,
}


@dataclass(frozen=True)
class ResponseSpectrum:
    """Complex samples of one observable on a strictly increasing real grid."""

    grid: np.ndarray
    values: np.ndarray
    observable: str = ""

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=complex)
        if grid.ndim != 1 or values.shape != grid.shape:
            raise DomainError("grid and values must be 1-D arrays of equal length")
        if grid.size > 1 and not np.all(np.diff(grid) > 0):
            raise DomainError("grid must be strictly increasing")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)

    @property
    def abs2(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    def normalized_abs2(self) -> np.ndarray:
        a = self.abs2
        return a / a.max()


def evaluate(model: SystemModel, observable: str, grid) -> ResponseSpectrum:
    """Sample a named observable (see ``OBSERVABLES``) on ``grid`` (rad/s)."""
    try:
        fn = OBSERVABLES[observable]
    except KeyError:
        raise DomainError(f"unknown observable {observable!r}; choose from {sorted(OBSERVABLES)}") from None
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0):
        raise DomainError("frequencies must be positive")
    return ResponseSpectrum(grid, fn(model, grid), observable)
