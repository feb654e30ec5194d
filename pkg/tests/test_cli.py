import json
import subprocess
import sys

import pytest

from sawatom.cli import main
from sawatom.errors import ScenarioError
from sawatom.scenario import bundled_scenarios, load_scenario, validate_scenario


def base_scenario(**over):
    raw = {
        "name": "t",
        "material": "GaAs",
        "geometry": {"n": 10, "f_idt_GHz": 3.0},
        "atom": {"C_J_F": 1e-15, "C_g_F": 1e-17},
        "tuning": {"lock_to_idt": True},
    }
    raw.update(over)
    return raw


def write(tmp_path, raw, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(raw))
    return str(p)


# -- scenarios -----------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(bundled_scenarios()))
def test_bundled_scenarios_validate(name):
    sc = load_scenario(name)
    assert sc.name
    assert sc.model.omega_0 > 0


def test_bundled_set():
    assert {"gaas_n10", "gaas_n82", "linbo3_n10", "linbo3_fluxmap", "k2_zero"} <= set(bundled_scenarios())


@pytest.mark.parametrize(
    "patch, path",
    [
        ({"geometry": {"n": 0}}, "geometry.n"),
        ({"geometry": {"n": 10, "finger_style": "triple"}}, "geometry.finger_style"),
        ({"atom": {"C_J_F": -1.0}}, "atom.C_J_F"),
        ({"outputs": ["chi", "bogus"]}, "outputs.1"),
        ({"material": {"K2": 0.01, "v_s_m_per_s": -3.0}}, "material"),
        ({"geometry": {"n": 10, "f_idt_GHz": 3.0, "pitch_m": 1e-6}}, "geometry"),
        ({"tuning": {"lock_to_idt": True}, "atom": {"L_J0_H": 1e-8}}, "tuning.lock_to_idt"),
        ({"sweep": {"kind": "flux", "start": 0.2, "stop": 0.1}}, "sweep.stop"),
    ],
)
def test_validation_names_the_field(patch, path):
    with pytest.raises(ScenarioError) as info:
        validate_scenario(base_scenario(**patch))
    assert str(info.value).startswith(path) or info.value.path.startswith(path)


def test_unknown_material_and_missing_file(tmp_path):
    with pytest.raises(ScenarioError):
        load_scenario(base_scenario(material="Quartz"))
    with pytest.raises(ScenarioError):
        load_scenario(str(tmp_path / "nope.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ScenarioError):
        load_scenario(str(bad))


def test_explicit_inductance_and_flux():
    sc = load_scenario(base_scenario(tuning={"lock_to_idt": False}, atom={"L_J0_H": 2e-7, "phi_ext": 0.1}))
    assert sc.model.atom.L_J0 == 2e-7
    assert sc.model.atom.phi_ext == 0.1


def test_approx_csigma_override():
    sc = load_scenario(base_scenario(), approx_csigma=True)
    assert sc.model.C_sigma == pytest.approx(sc.model.n * sc.model.C_c, rel=1e-15)


# -- commands --------------------------------------------------------------------


def test_materials_list(capsys):
    assert main(["materials", "list"]) == 0
    out = capsys.readouterr().out
    assert "GaAs" in out and "LiNbO3" in out


def test_criterion(capsys):
    assert main(["criterion", "--material", "GaAs", "--n-min", "29", "--n-max", "32"]) == 0
    out = capsys.readouterr().out
    assert "threshold: n = 31" in out
    assert main(["criterion", "--K2", "0.0", "--n", "5"]) == 0
    assert "never satisfied" in capsys.readouterr().out


def test_spectrum_writes_byte_identical_csv(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert main(["spectrum", "--scenario", "gaas_n10", "--points", "501", "--out-dir", str(d)]) == 0
    files = sorted(p.name for p in a.iterdir())
    assert "gaas_n10_r_g.csv" in files and "gaas_n10_spectrum.svg" in files
    for name in files:
        assert (a / name).read_bytes() == (b / name).read_bytes()
    lines = (a / "gaas_n10_r_ac.csv").read_text().splitlines()
    assert lines[0] == "omega_rad_s,freq_GHz,re,im,abs2"
    assert len(lines) == 502
    assert b"\r" not in (a / "gaas_n10_r_ac.csv").read_bytes()


def test_spectrum_rejects_gate_output_without_gate(tmp_path, capsys):
    raw = base_scenario(atom={"C_J_F": 1e-15, "C_g_F": 0.0}, outputs=["r_g"])
    assert main(["spectrum", "--scenario", write(tmp_path, raw), "--out-dir", str(tmp_path)]) == 2
    assert "outputs.0" in capsys.readouterr().err


def test_poles_json(tmp_path, capsys):
    assert main(["poles", "--scenario", "linbo3_n10", "--out-dir", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "linbo3_n10_poles.json").read_text())
    assert doc["classification"] == "split"


def test_poles_failure_exit_code(tmp_path, monkeypatch):
    from sawatom import cli
    from sawatom.errors import PoleSearchError

    def boom(model):
        raise PoleSearchError("no roots", candidates=[1.0])

    monkeypatch.setattr(cli, "find_poles", boom)
    assert main(["poles", "--scenario", "gaas_n10", "--out-dir", str(tmp_path)]) == 3


def test_fluxmap(tmp_path, capsys):
    assert main(["fluxmap", "--scenario", "linbo3_fluxmap", "--points", "41", "--out-dir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "resonant flux" in out and "0.127825" in out
    csv = (tmp_path / "linbo3_fluxmap_fluxmap_r_g.csv").read_text().splitlines()
    assert csv[0] == "flux_phi0,freq_GHz,abs2"
    assert len(csv) == 1 + 101 * 41


@pytest.mark.parametrize("name", ["gaas_n10", "k2_zero"])
def test_timedomain_passes(tmp_path, name, capsys):
    assert main(["timedomain", "--scenario", name, "--out-dir", str(tmp_path)]) == 0
    assert "out/in" in capsys.readouterr().out
    assert (tmp_path / f"{name}_trace.csv").exists()


def test_timedomain_disagreement_exit_code(tmp_path):
    # a coarse step without extrapolation misses the 1e-3 tolerance
    raw = base_scenario(timedomain={"steps_per_tau": 4, "drive": "impulse", "extrapolate": False})
    assert main(["timedomain", "--scenario", write(tmp_path, raw), "--out-dir", str(tmp_path)]) == 4


def test_config_errors_exit_2(tmp_path, capsys):
    raw = base_scenario(geometry={"n": 0})
    assert main(["spectrum", "--scenario", write(tmp_path, raw), "--out-dir", str(tmp_path)]) == 2
    assert "geometry.n" in capsys.readouterr().err
    assert main(["spectrum", "--scenario", "missing_scenario", "--out-dir", str(tmp_path)]) == 2
    db = tmp_path / "db.json"
    db.write_text("{")
    assert main(["materials", "list", "--materials-db", str(db)]) == 2


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "sawatom.cli", "criterion", "--n", "4"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "threshold: n = 4" in out.stdout
