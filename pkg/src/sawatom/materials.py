"""Substrate constants and their mapping onto transmission-line elements.

A SAW beam of width ``W`` on a substrate with coupling coefficient ``K2`` and
effective permittivity ``eps_inf`` behaves like a transmission line with
impedance ``Z0 = K2 / (W * eps_inf * omega)``.  Each finger pair of the IDT
contributes a coupling capacitance ``C_c = eps_inf * W`` (divided by sqrt(2)
for double-finger electrodes).

Note
----
The ``eps_inf`` values shipped below are placeholders (5.0e-11 F/m); the
source literature quotes only K2 and v_s.  Normalized observables
(gamma/omega_0, reflection coefficients, the cavity criterion) do not depend
on ``eps_inf`` or ``W`` because both cancel between ``Z0`` and ``C_c``.
Absolute capacitances and inductances do.  Override them with a material
database file if you need absolute numbers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, Mapping, Union

from scipy.constants import epsilon_0

from .errors import DomainError

__all__ = [
    "MaterialParams",
    "LineConstants",
    "BUILTIN_MATERIALS",
    "characteristic_impedance",
    "coupling_capacitance",
    "line_constants",
    "load_material_db",
    "get_material",
]

PLACEHOLDER_EPS_INF = 5.0e-11  # F/m, not a measured value


@dataclass(frozen=True)
class MaterialParams:
    """Piezoelectric substrate.

    Parameters
    ----------
    name : str
        Label.
    K2 : float
        Piezoelectric coupling coefficient as a fraction (0.048, not 4.8).
        ``K2 = 0`` is accepted and describes a decoupled, non-piezoelectric line.
    v_s : float
        SAW velocity, m/s.
    eps_inf : float
        Effective permittivity eps_p + eps_0, F/m.
    """

    name: str
    K2: float
    v_s: float
    eps_inf: float = PLACEHOLDER_EPS_INF

    def __post_init__(self):
        if not (0.0 <= self.K2 < 1.0):
            raise DomainError(f"K2 must be a fraction in [0, 1), got {self.K2!r}")
        if not self.v_s > 0:
            raise DomainError(f"v_s must be positive, got {self.v_s!r}")
        if not self.eps_inf > epsilon_0:
            raise DomainError(
                f"eps_inf must exceed the vacuum permittivity, got {self.eps_inf!r}"
            )

    @classmethod
    def from_percent(cls, name, K2_percent, v_s, eps_inf=PLACEHOLDER_EPS_INF):
        return cls(name=name, K2=K2_percent / 100.0, v_s=v_s, eps_inf=eps_inf)

    @property
    def K2_percent(self) -> float:
        return 100.0 * self.K2

    def with_K2(self, K2: float) -> "MaterialParams":
        return MaterialParams(self.name, K2, self.v_s, self.eps_inf)


@dataclass(frozen=True)
class LineConstants:
    """Distributed line elements of the SAW beam at ``omega_ref``."""

    Z0: float
    L_T: float
    C_T: float
    omega_ref: float


BUILTIN_MATERIALS: Dict[str, MaterialParams] = {
    "GaAs": MaterialParams("GaAs", K2=0.0007, v_s=3000.0),
    "LiNbO3": MaterialParams("LiNbO3", K2=0.048, v_s=3000.0),
}


def _positive(label, value):
    if not value > 0:
        raise DomainError(f"{label} must be positive, got {value!r}")


def characteristic_impedance(mat: MaterialParams, W: float, omega: float) -> float:
    """Characteristic impedance ``K2 / (W * eps_inf * omega)`` in ohm."""
    _positive("W", W)
    _positive("omega", omega)
    return mat.K2 / (W * mat.eps_inf * omega)


def coupling_capacitance(mat: MaterialParams, W: float, finger_style: str = "single") -> float:
    """Capacitance of one finger pair, ``eps_inf * W`` (over sqrt(2) for double fingers)."""
    _positive("W", W)
    if finger_style == "single":
        return mat.eps_inf * W
    if finger_style == "double":
        return mat.eps_inf * W / math.sqrt(2.0)
    raise DomainError(f"finger_style must be 'single' or 'double', got {finger_style!r}")


def line_constants(mat: MaterialParams, W: float, omega: float) -> LineConstants:
    Z0 = characteristic_impedance(mat, W, omega)
    if Z0 == 0.0:
        raise DomainError("line constants are undefined for K2 = 0")
    return LineConstants(Z0=Z0, L_T=Z0 / mat.v_s, C_T=1.0 / (Z0 * mat.v_s), omega_ref=omega)


def _material_from_record(rec: Mapping) -> MaterialParams:
    if "K2_percent" in rec and "K2" in rec:
        raise DomainError(f"material {rec.get('name')!r}: give K2 or K2_percent, not both")
    if "K2_percent" in rec:
        K2 = float(rec["K2_percent"]) / 100.0
    elif "K2" in rec:
        K2 = float(rec["K2"])
    else:
        raise DomainError(f"material {rec.get('name')!r}: missing K2_percent")
    return MaterialParams(
        name=str(rec["name"]),
        K2=K2,
        v_s=float(rec["v_s_m_per_s"]),
        eps_inf=float(rec.get("eps_inf_F_per_m", PLACEHOLDER_EPS_INF)),
    )


def load_material_db(path: Union[str, Path, None] = None) -> Dict[str, MaterialParams]:
    """Load a JSON material database, falling back to the built-ins.

    The file holds a JSON array of objects with keys ``name``,
    ``K2_percent``, ``v_s_m_per_s`` and ``eps_inf_F_per_m``.  Entries override
    built-ins with the same name.
    """
    db = dict(BUILTIN_MATERIALS)
    if path is None:
        return db
    path = Path(path)
    if not path.exists():
        return db
    records = json.loads(path.read_text())
    if not isinstance(records, list):
        raise DomainError(f"{path}: expected a JSON array of materials")
    for rec in records:
        mat = _material_from_record(rec)
        db[mat.name] = mat
    return db


def get_material(name: str, db: Mapping[str, MaterialParams] = BUILTIN_MATERIALS) -> MaterialParams:
    try:
        return db[name]
    except KeyError:
        known = ", ".join(sorted(db))
        raise DomainError(f"unknown material {name!r} (known: {known})") from None


def material_table(db: Mapping[str, MaterialParams]) -> Iterable[str]:
    yield f"{'name':<12}{'K2 [%]':>10}{'v_s [m/s]':>12}{'eps_inf [F/m]':>16}"
    for name in sorted(db):
        m = db[name]
        yield f"{m.name:<12}{m.K2_percent:>10.4g}{m.v_s:>12.6g}{m.eps_inf:>16.6g}"
