"""JSON scenario files: validation and model construction.

A scenario names a material, an IDT geometry and an atom, optionally a sweep
and the observables to emit.  Frequencies are given in GHz.  Validation
errors carry the dotted path of the offending field, e.g.
``geometry.n: 0 is less than the minimum of 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional, Union

import numpy as np
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from .errors import DomainError, ScenarioError
from .idt import IdtGeometry, pitch_for_frequency
from .materials import BUILTIN_MATERIALS, MaterialParams, _material_from_record
from .response import SystemModel, TransmonParams, josephson_inductance, lock_to_idt

__all__ = ["Scenario", "load_scenario", "validate_scenario", "bundled_scenarios", "scenario_schema"]

DEFAULTS = {
    "f_idt_GHz": 3.0,
    "W_m": 30e-6,
    "C_J_F": 1e-15,
    "C_g_F": 10e-18,
    "Z_el_ohm": 50.0,
}
DEFAULT_POINTS = 10001


def scenario_schema() -> dict:
    return json.loads(resources.files("sawatom").joinpath("scenario.schema.json").read_text())


def bundled_scenarios() -> dict:
    """Map of bundled scenario name to its path."""
    root = resources.files("sawatom").joinpath("scenarios")
    return {p.name[:-5]: Path(str(p)) for p in root.iterdir() if p.name.endswith(".json")}


def _path(parts) -> str:
    return ".".join(str(p) for p in parts) or "<root>"


def validate_scenario(raw: Mapping) -> None:
    """Raise :class:`ScenarioError` naming the field path of the first violation."""
    validator = Draft202012Validator(scenario_schema())
    err = best_match(validator.iter_errors(raw))
    if err is not None:
        raise ScenarioError(err.message, _path(err.absolute_path))
    geo = raw["geometry"]
    if "f_idt_GHz" in geo and "pitch_m" in geo:
        raise ScenarioError("give f_idt_GHz or pitch_m, not both", "geometry")
    mat = raw["material"]
    if isinstance(mat, dict) and ("K2" in mat) == ("K2_percent" in mat):
        raise ScenarioError("give exactly one of K2 or K2_percent", "material")
    atom = raw.get("atom", {})
    if "L_J0_H" in atom and "E_J_J" in atom:
        raise ScenarioError("give L_J0_H or E_J_J, not both", "atom")
    lock = raw.get("tuning", {}).get("lock_to_idt")
    explicit = "L_J0_H" in atom or "E_J_J" in atom
    if lock and explicit:
        raise ScenarioError("lock_to_idt conflicts with an explicit L_J0_H/E_J_J", "tuning.lock_to_idt")
    if lock is False and not explicit:
        raise ScenarioError("without lock_to_idt the atom needs L_J0_H or E_J_J", "atom")
    sweep = raw.get("sweep")
    if sweep:
        for lo, hi in (("start", "stop"), ("start_GHz", "stop_GHz")):
            if lo in sweep and hi in sweep and not sweep[hi] > sweep[lo]:
                raise ScenarioError(f"must exceed {lo}", f"sweep.{hi}")
        if sweep["kind"] in ("n", "K2", "flux") and not ("start" in sweep and "stop" in sweep):
            raise ScenarioError(f"a {sweep['kind']} sweep needs start and stop", "sweep")
        if sweep["kind"] == "n" and not (float(sweep["start"]).is_integer() and sweep["start"] >= 1):
            raise ScenarioError("must be a positive integer", "sweep.start")
        if sweep["kind"] == "K2" and not (0 <= sweep["start"] and sweep["stop"] < 1):
            raise ScenarioError("K2 sweep must stay within [0, 1)", "sweep")


@dataclass(frozen=True)
class Scenario:
    """Validated scenario with its model."""

    raw: dict
    model: SystemModel
    source: Optional[Path] = None

    @property
    def name(self) -> str:
        return self.raw["name"]

    @property
    def outputs(self):
        default = ["chi", "r_ac", "t_ac"] + (["r_g"] if self.model.has_gate else [])
        return list(self.raw.get("outputs", default))

    @property
    def sweep(self) -> dict:
        return dict(self.raw.get("sweep", {"kind": "frequency"}))

    def frequency_grid(self, points: Optional[int] = None) -> np.ndarray:
        """Angular frequency grid (rad/s); default 0.8 .. 1.2 f_IDT."""
        sw = self.sweep
        f_idt = self.model.omega_idt / (2 * math.pi * 1e9)
        lo = sw.get("start_GHz", 0.8 * f_idt)
        hi = sw.get("stop_GHz", 1.2 * f_idt)
        key = "points" if sw["kind"] == "frequency" else "freq_points"
        npts = points or sw.get(key, DEFAULT_POINTS if sw["kind"] == "frequency" else 400)
        return 2 * math.pi * 1e9 * np.linspace(lo, hi, int(npts))

    def flux_grid(self, points: Optional[int] = None) -> np.ndarray:
        sw = self.sweep
        if sw["kind"] != "flux":
            raise ScenarioError("scenario has no flux sweep", "sweep.kind")
        return np.linspace(sw["start"], sw["stop"], int(points or sw.get("points", 101)))


def _material(entry, db: Mapping[str, MaterialParams]) -> MaterialParams:
    if isinstance(entry, str):
        if entry not in db:
            raise ScenarioError(f"unknown material {entry!r} (known: {', '.join(sorted(db))})", "material")
        return db[entry]
    return _material_from_record(entry)


def _build_model(raw: Mapping, db, approx_csigma: Optional[bool]) -> SystemModel:
    mat = _material(raw["material"], db)
    geo = raw["geometry"]
    pitch = geo.get("pitch_m") or pitch_for_frequency(geo.get("f_idt_GHz", DEFAULTS["f_idt_GHz"]) * 1e9, mat.v_s)
    geom = IdtGeometry(n=geo["n"], pitch=pitch, W=geo.get("W_m", DEFAULTS["W_m"]), finger_style=geo.get("finger_style", "single"))
    atom = raw.get("atom", {})
    C_J = atom.get("C_J_F", DEFAULTS["C_J_F"])
    C_g = atom.get("C_g_F", DEFAULTS["C_g_F"])
    Z_el = atom.get("Z_el_ohm", DEFAULTS["Z_el_ohm"])
    approx = raw.get("approx_csigma", False) if approx_csigma is None else approx_csigma
    if "L_J0_H" in atom or "E_J_J" in atom:
        L = atom["L_J0_H"] if "L_J0_H" in atom else josephson_inductance(atom["E_J_J"])
        params = TransmonParams(C_J=C_J, L_J0=L, C_g=C_g, Z_el=Z_el)
    else:
        ratio = raw.get("tuning", {}).get("f0_over_fidt", 1.0)
        params = lock_to_idt(mat, geom, C_J, C_g, Z_el, approx, ratio)
    params = TransmonParams(params.C_J, params.L_J0, params.C_g, params.Z_el, atom.get("phi_ext", 0.0))
    return SystemModel(mat, geom, params, approx_csigma=approx, z0_per_frequency=raw.get("z0_per_frequency", False))


def load_scenario(
    source: Union[str, Path, Mapping],
    materials: Optional[Mapping[str, MaterialParams]] = None,
    approx_csigma: Optional[bool] = None,
) -> Scenario:
    """Load a scenario from a path, a bundled name (``"gaas_n10"``) or a dict.

    ``approx_csigma`` overrides the file's setting when not None.
    """
    path = None
    if isinstance(source, Mapping):
        raw = dict(source)
    else:
        bundled = bundled_scenarios()
        path = Path(source)
        if not path.exists() and str(source) in bundled:
            path = bundled[str(source)]
        if not path.exists():
            raise ScenarioError(f"no such scenario file or bundled name: {source}")
        try:
            raw = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON: {exc}", str(path)) from None
    validate_scenario(raw)
    try:
        model = _build_model(raw, materials or BUILTIN_MATERIALS, approx_csigma)
    except ScenarioError:
        raise
    except DomainError as exc:
        raise ScenarioError(str(exc), "<model>") from None
    return Scenario(raw, model, path)
