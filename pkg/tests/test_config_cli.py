import json
import os
import subprocess
import sys

import pytest

from medgate.cli import main
from medgate.config import ConfigError, load_config, schema_for


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_schema_defaults_resolve():
    cfg = load_config("dynamic-map")
    assert cfg["r"] == 1.0
    e_q, e_c, e_qp = cfg.resolved_energies()
    assert e_q == e_qp == pytest.approx(0.1)


def test_config_file_parsing(tmp_path):
    path = write(tmp_path, """
# comment line
n = 2
j1p_max = 1.5   # trailing comment
j1p_count = 7
""")
    cfg = load_config("dynamic-map", path=path)
    assert cfg["n"] == 2
    assert cfg["j1p_max"] == 1.5
    assert cfg["j1p_count"] == 7
    assert cfg.sources["n"].endswith(":3")


def test_config_unknown_key_reports_line(tmp_path):
    path = write(tmp_path, "nonsense = 1\n")
    with pytest.raises(ConfigError, match=r":1: unknown key 'nonsense'"):
        load_config("dynamic-map", path=path)


def test_config_bad_value_reports_line(tmp_path):
    path = write(tmp_path, "\nn = two\n")
    with pytest.raises(ConfigError, match=r":2: bad value"):
        load_config("dynamic-map", path=path)


def test_config_missing_equals(tmp_path):
    path = write(tmp_path, "just a line\n")
    with pytest.raises(ConfigError, match="expected KEY = VALUE"):
        load_config("dynamic-map", path=path)


def test_env_and_set_precedence(tmp_path):
    path = write(tmp_path, "n = 2\n")
    env = {"MEDGATE_N": "3"}
    cfg = load_config("dynamic-map", path=path, env=env)
    assert cfg["n"] == 3
    cfg = load_config("dynamic-map", path=path, env=env, overrides=["n=4"])
    assert cfg["n"] == 4


def test_r_conflicts_with_explicit_energies():
    cfg = load_config("dynamic-map", overrides=["r=1.5", "e_q=0.12"])
    with pytest.raises(ConfigError, match="either r or e_q"):
        cfg.resolved_energies()


def test_gamma_list_parsing():
    cfg = load_config("decoherence", overrides=["gamma0_list=0.1, 0.4,2"])
    assert cfg["gamma0_list"] == (0.1, 0.4, 2.0)
    with pytest.raises(ConfigError):
        load_config("decoherence", overrides=["gamma0_list="])


def test_bool_parsing():
    cfg = load_config("decoherence", overrides=["delta_from_low=off"])
    assert cfg["delta_from_low"] is False
    with pytest.raises(ConfigError):
        load_config("decoherence", overrides=["delta_from_low=maybe"])


def test_every_mode_has_schema():
    for mode in ("dynamic-map", "adiabatic-map", "spectrum", "cphase-scan",
                 "decoherence", "interference"):
        assert schema_for(mode)


# ---------------------------------------------------------------------------
# CLI end to end

def run_cli(args):
    return main(args)


def test_cli_bad_config_exits_one(tmp_path):
    path = write(tmp_path, "bogus = 7\n")
    assert run_cli(["dynamic-map", "--config", path,
                    "--out", str(tmp_path)]) == 1


def test_cli_dynamic_map_outputs(tmp_path):
    out = tmp_path / "run1"
    code = run_cli(["dynamic-map", "--set", "j1p_count=6",
                    "--set", "j2p_count=6", "--out", str(out), "--seed", "5"])
    assert code == 0
    csv_path = out / "dynamic_map.csv"
    meta_path = out / "dynamic_map.meta.json"
    png_path = out / "dynamic_map.png"
    assert csv_path.exists() and meta_path.exists() and png_path.exists()
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "j1p,j2p,j1,j2,eU,leakage,valid"
    assert len(lines) == 1 + 36
    meta = json.loads(meta_path.read_text())
    assert meta["tool"] == "medgate"
    assert meta["seed"] == 5
    assert meta["config"]["j1p_count"] == 6
    assert "version" in meta


def test_cli_no_plot_skips_png(tmp_path):
    out = tmp_path / "run2"
    code = run_cli(["dynamic-map", "--set", "j1p_count=4",
                    "--set", "j2p_count=4", "--out", str(out), "--no-plot"])
    assert code == 0
    assert not (out / "dynamic_map.png").exists()


def test_cli_deterministic_output(tmp_path):
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    args = ["dynamic-map", "--set", "j1p_count=5", "--set", "j2p_count=5",
            "--seed", "11", "--no-plot"]
    assert run_cli(args + ["--out", str(out_a)]) == 0
    assert run_cli(args + ["--out", str(out_b)]) == 0
    assert (out_a / "dynamic_map.csv").read_bytes() \
        == (out_b / "dynamic_map.csv").read_bytes()
    assert (out_a / "dynamic_map.meta.json").read_bytes() \
        == (out_b / "dynamic_map.meta.json").read_bytes()


def test_cli_total_failure_exits_two(tmp_path):
    # a single grid point at J1' = J2' = 0 with R = 1 has no revival
    out = tmp_path / "fail"
    code = run_cli(["dynamic-map", "--set", "j1p_count=1",
                    "--set", "j1p_max=0", "--set", "j2p_count=1",
                    "--set", "j2p_max=0", "--out", str(out), "--no-plot"])
    assert code == 2
    lines = (out / "dynamic_map.csv").read_text().splitlines()
    assert lines[1].endswith("false")


def test_cli_crash_isolation_keeps_sweep_alive(tmp_path):
    # grid contains the invalid origin point plus valid ones
    out = tmp_path / "mixed"
    code = run_cli(["dynamic-map", "--set", "j1p_count=3",
                    "--set", "j2p_count=3", "--out", str(out), "--no-plot"])
    assert code == 0
    lines = (out / "dynamic_map.csv").read_text().splitlines()[1:]
    flags = [ln.rsplit(",", 1)[1] for ln in lines]
    assert "false" in flags and "true" in flags
    assert len(lines) == 9


def test_cli_threads_match_serial(tmp_path):
    args = ["dynamic-map", "--set", "j1p_count=5", "--set", "j2p_count=5",
            "--no-plot"]
    out1, out4 = tmp_path / "t1", tmp_path / "t4"
    assert run_cli(args + ["--out", str(out1), "--threads", "1"]) == 0
    assert run_cli(args + ["--out", str(out4), "--threads", "4"]) == 0
    assert (out1 / "dynamic_map.csv").read_bytes() \
        == (out4 / "dynamic_map.csv").read_bytes()


def test_cli_env_override(tmp_path, monkeypatch):
    out = tmp_path / "env"
    monkeypatch.setenv("MEDGATE_J1P_COUNT", "2")
    monkeypatch.setenv("MEDGATE_J2P_COUNT", "2")
    assert run_cli(["dynamic-map", "--out", str(out), "--no-plot"]) == 0
    lines = (out / "dynamic_map.csv").read_text().splitlines()
    assert len(lines) == 1 + 4


def test_cli_interference_smoke(tmp_path):
    out = tmp_path / "intf"
    code = run_cli(["interference", "--set", "tau=40", "--set", "n_times=201",
                    "--set", "tol=1e-8", "--out", str(out)])
    assert code == 0
    meta = json.loads((out / "interference.meta.json").read_text())
    assert "predicted_period" in meta["summary"]
    assert (out / "interference.png").exists()


def test_cli_spectrum_smoke(tmp_path):
    out = tmp_path / "spec"
    code = run_cli(["spectrum", "--set", "ratio_count=12", "--out", str(out)])
    assert code == 0
    lines = (out / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "ratio,branch,energy,label,ambiguous,alt_label"
    assert len(lines) == 1 + 12 * 16


def test_cli_decoherence_smoke(tmp_path):
    out = tmp_path / "deco"
    code = run_cli(["decoherence", "--set", "gate=dynamic",
                    "--set", "gamma0_list=0.5,1.0", "--out", str(out)])
    assert code == 0
    lines = (out / "decoherence.csv").read_text().splitlines()
    assert lines[0] == "gate,gamma0_ns,input,purity,population,valid"
    assert len(lines) == 1 + 2 * 5


def test_cli_adiabatic_map_smoke(tmp_path):
    out = tmp_path / "amap"
    code = run_cli(["adiabatic-map", "--set", "j1_count=3",
                    "--set", "j2_count=3", "--set", "tau=40",
                    "--set", "tol=1e-6", "--out", str(out), "--threads", "2"])
    assert code == 0
    lines = (out / "adiabatic_map.csv").read_text().splitlines()
    assert len(lines) == 1 + 9


def test_cli_cphase_scan_no_crossing(tmp_path):
    out = tmp_path / "scan"
    code = run_cli(["cphase-scan", "--set", "j1=0", "--set", "j2=0",
                    "--set", "tau_min=40", "--set", "tau_max=60",
                    "--set", "tau_count=3", "--set", "tol=1e-6",
                    "--out", str(out)])
    assert code == 0
    meta = json.loads((out / "cphase_scan.meta.json").read_text())
    assert meta["summary"]["found"] is False
    lines = (out / "cphase_scan.csv").read_text().splitlines()
    assert len(lines) == 1 + 3


def test_cli_module_entry_point(tmp_path):
    out = tmp_path / "module"
    proc = subprocess.run(
        [sys.executable, "-m", "medgate", "dynamic-map", "--set",
         "j1p_count=2", "--set", "j2p_count=2", "--out", str(out),
         "--no-plot"],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (out / "dynamic_map.csv").exists()


def test_cli_list_keys(capsys):
    assert run_cli(["decoherence", "--list-keys"]) == 0
    out = capsys.readouterr().out
    assert "gamma0_list" in out
