import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sawatom.errors import DomainError
from sawatom.materials import (
    BUILTIN_MATERIALS,
    MaterialParams,
    characteristic_impedance,
    coupling_capacitance,
    get_material,
    line_constants,
    load_material_db,
    material_table,
)
from sawatom.response import damping, default_model

W = 30e-6
EPS = 5.0e-11
OMEGA = 2 * math.pi * 3e9


def test_impedance_linbo3_hand_value():
    mat = MaterialParams("LiNbO3", 0.048, 3000.0, EPS)
    expected = 0.048 / (W * EPS * OMEGA)  # direct arithmetic
    assert characteristic_impedance(mat, W, OMEGA) == pytest.approx(expected, rel=1e-15)
    assert characteristic_impedance(mat, W, OMEGA) == pytest.approx(1.698e3, rel=1e-3)


def test_impedance_scalings():
    a = BUILTIN_MATERIALS["LiNbO3"]
    b = BUILTIN_MATERIALS["GaAs"]
    assert characteristic_impedance(a, 2 * W, OMEGA) == pytest.approx(0.5 * characteristic_impedance(a, W, OMEGA), rel=1e-15)
    ratio = characteristic_impedance(b, W, OMEGA) / characteristic_impedance(a, W, OMEGA)
    assert ratio == pytest.approx(0.0007 / 0.048, rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(
    W=st.floats(1e-7, 1e-3),
    eps=st.floats(1e-10, 1e-9),
    omega=st.floats(1e8, 1e12),
    s=st.floats(0.1, 10.0),
)
def test_impedance_homogeneous_degree_minus_one(W, eps, omega, s):
    mat = MaterialParams("x", 0.01, 3000.0, eps)
    z = characteristic_impedance(mat, W, omega)
    assert characteristic_impedance(mat, s * W, omega) == pytest.approx(z / s, rel=1e-12)
    assert characteristic_impedance(MaterialParams("x", 0.01, 3000.0, s * eps), W, omega) == pytest.approx(z / s, rel=1e-12)
    assert characteristic_impedance(mat, W, s * omega) == pytest.approx(z / s, rel=1e-12)


def test_coupling_capacitance():
    mat = MaterialParams("x", 0.048, 3000.0, EPS)
    assert coupling_capacitance(mat, W, "single") == pytest.approx(1.5e-15, rel=1e-14)
    assert coupling_capacitance(mat, W, "double") == pytest.approx(1.5e-15 / math.sqrt(2), rel=1e-14)
    assert coupling_capacitance(mat, W, "double") == pytest.approx(1.0607e-15, rel=1e-4)
    with pytest.raises(DomainError):
        coupling_capacitance(mat, 0.0)
    with pytest.raises(DomainError):
        coupling_capacitance(mat, W, "triple")


@settings(max_examples=100, deadline=None)
@given(K2=st.floats(1e-5, 0.5), v=st.floats(100, 1e4), W=st.floats(1e-6, 1e-3), omega=st.floats(1e8, 1e11))
def test_line_constant_identities(K2, v, W, omega):
    lc = line_constants(MaterialParams("x", K2, v, EPS), W, omega)
    assert math.sqrt(lc.L_T / lc.C_T) == pytest.approx(lc.Z0, rel=1e-12)
    assert 1 / math.sqrt(lc.L_T * lc.C_T) == pytest.approx(v, rel=1e-12)
    assert lc.omega_ref == omega


def test_line_constants_hand_values():
    lc = line_constants(MaterialParams("x", 0.048, 3000.0, EPS), W, OMEGA)
    assert lc.L_T == pytest.approx(lc.Z0 / 3000.0, rel=1e-15)
    assert lc.L_T == pytest.approx(0.566, rel=1e-3)
    assert lc.C_T == pytest.approx(1.964e-7, rel=1e-3)


@pytest.mark.parametrize("bad", [dict(W=0.0), dict(W=-1.0), dict(omega=0.0)])
def test_domain_errors(bad):
    args = dict(W=W, omega=OMEGA)
    args.update(bad)
    with pytest.raises(DomainError):
        characteristic_impedance(BUILTIN_MATERIALS["GaAs"], **args)


@pytest.mark.parametrize(
    "kwargs",
    [dict(K2=1.0), dict(K2=-0.1), dict(v_s=0.0), dict(eps_inf=8e-12)],
)
def test_material_invariants(kwargs):
    base = dict(name="x", K2=0.01, v_s=3000.0, eps_inf=EPS)
    base.update(kwargs)
    with pytest.raises(DomainError):
        MaterialParams(**base)


def test_percent_and_fraction():
    m = MaterialParams.from_percent("LiNbO3", 4.8, 3000.0)
    assert m.K2 == pytest.approx(0.048)
    assert m.K2_percent == pytest.approx(4.8)


def test_builtin_values():
    assert BUILTIN_MATERIALS["GaAs"].K2 == 0.0007
    assert BUILTIN_MATERIALS["LiNbO3"].K2 == 0.048
    assert all(m.v_s == 3000.0 for m in BUILTIN_MATERIALS.values())


def test_material_db_roundtrip(tmp_path):
    path = tmp_path / "db.json"
    path.write_text(json.dumps([
        {"name": "quartz", "K2_percent": 0.11, "v_s_m_per_s": 3158.0, "eps_inf_F_per_m": 5.0e-11},
        {"name": "GaAs", "K2_percent": 0.07, "v_s_m_per_s": 2900.0},
    ]))
    db = load_material_db(path)
    assert db["quartz"].K2 == pytest.approx(0.0011)
    assert db["GaAs"].v_s == 2900.0
    assert "LiNbO3" in db
    assert load_material_db(tmp_path / "missing.json") == BUILTIN_MATERIALS
    lines = list(material_table(db))
    assert len(lines) == 1 + len(db)
    with pytest.raises(DomainError):
        get_material("unobtainium", db)


@pytest.mark.parametrize("name", sorted(BUILTIN_MATERIALS))
def test_normalized_decay_independent_of_W_and_eps(name):
    ref = None
    for W_ in np.geomspace(3e-6, 3e-4, 5):
        for eps in (2e-11, 5e-11, 2e-10):
            mat = MaterialParams(name, BUILTIN_MATERIALS[name].K2, 3000.0, eps)
            m = default_model(mat, W=W_, approx_csigma=True)
            g = damping(m, m.omega_idt).real / m.omega_0
            ref = g if ref is None else ref
            assert g == pytest.approx(ref, rel=1e-9)
