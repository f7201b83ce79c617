import io
import json
import subprocess
import sys

import numpy as np
import pytest

from gsqg_fronts import io as gio
from gsqg_fronts.cli import main
from gsqg_fronts.config import ConfigError, parse_config, parse_init
from gsqg_fronts.solver import run_simulation

BASE = """# two fronts, SQG
alpha = 1.0
theta_plus = 1.0
theta_minus = -1.0
h = 1.0
n_points = 32
dt = 0.01
t_end = 0.05
snapshot_every = 2
hamiltonian_every = 1
"""


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def rows(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    return lines[0].split(","), [ln.split(",") for ln in lines[1:]]


def test_stability_find_values():
    code, text = run(["stability", "--alpha", "1", "--find-marginal", "--find-peak"])
    assert code == 0
    head, body = rows(text)
    assert head == ["marginal_hxi", "peak_hxi", "peak_rate"]
    vals = [float(v) for v in body[0]]
    assert vals[0] == pytest.approx(0.71129, abs=1e-4)
    assert vals[1] == pytest.approx(0.51756, abs=1e-3)
    code, text = run(["stability", "--alpha", "2", "--find-marginal"])
    assert float(rows(text)[1][0][0]) == pytest.approx(0.63923, abs=1e-4)
    assert text.startswith("# gsqg_fronts=")


def test_stability_scan():
    code, text = run(["stability", "--alpha", "1.5", "--xi-min", "0.1", "--xi-max", "2",
                      "--n-xi", "20"])
    head, body = rows(text)
    assert code == 0 and len(body) == 20
    assert head[:3] == ["xi", "delta", "re_mu"]
    re_mu = np.array([float(r[2]) for r in body])
    delta = np.array([float(r[1]) for r in body])
    assert np.allclose(re_mu, 0.5 * np.sqrt(np.maximum(delta, 0)), rtol=1e-12)


def test_symbols_and_expand():
    code, text = run(["symbols", "--alpha", "2", "--n-xi", "5", "--xi-min", "0.5",
                      "--xi-max", "1.5"])
    head, body = rows(text)
    assert code == 0 and head[2] == "b2"
    for r in body:
        xi = float(r[0])
        assert float(r[2]) == pytest.approx(np.exp(-2 * xi) / (2 * xi), rel=1e-12)
    code, text = run(["expand", "--alpha", "1", "--n-max", "2"])
    head, body = rows(text)
    assert head == ["kind", "n", "l", "m", "value"]
    assert ["c", "1", "", "", "-0.5"] in body
    d10 = [r for r in body if r[:3] == ["d", "1", "0"]][0]
    assert float(d10[4]) == pytest.approx(-1 / 6)


def test_exit_codes(tmp_path, capsys):
    assert run(["stability"])[0] == 2
    assert run(["nonsense"])[0] == 2
    assert run(["stability", "--alpha", "2.5", "--find-marginal"])[0] == 1
    assert run(["stability", "--alpha", "1", "--h", "0", "--find-marginal"])[0] == 1
    # same-sign jumps have no marginal wavenumber
    assert run(["stability", "--alpha", "1", "--theta-minus", "1", "--find-marginal"])[0] == 1
    assert run(["expand", "--alpha", "1", "--n-max", "0"])[0] == 1
    assert run(["diagnose"])[0] == 1
    assert run(["simulate", "--config", str(tmp_path / "missing.cfg")])[0] == 1
    assert "error:" in capsys.readouterr().err


def test_config_errors_carry_line_numbers(tmp_path):
    with pytest.raises(ConfigError, match="line 3: unknown key 'alfa'"):
        parse_config("alpha = 1\nh = 1\nalfa = 2\n")
    with pytest.raises(ConfigError, match="line 2: duplicate"):
        parse_config("alpha = 1\nalpha = 1\n")
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("n_points = many\n")
    with pytest.raises(ConfigError, match="missing required"):
        parse_config("alpha = 1\n")
    with pytest.raises(ConfigError, match="alpha"):
        parse_config(BASE.replace("alpha = 1.0", "alpha = 2.5"))
    with pytest.raises(ConfigError):
        parse_config(BASE + "stepper = euler\n")
    with pytest.raises(ConfigError):
        parse_config(BASE + "init = cosine 0 0.1\n")
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(BASE + "colour = red\n")
    code, _ = run(["simulate", "--config", str(cfg), "--out-dir", str(tmp_path)])
    assert code == 1 and not list(tmp_path.glob("run_*"))


def test_init_parsing():
    assert parse_init("flat") == ("flat", ())
    kind, args = parse_init("cosine 2 0.01 antisymmetric")
    assert kind == "cosine" and args[0] == 2
    cfg = parse_config(BASE + "init = cosine 1 0.01 symmetric\n")
    s = cfg.initial_state()
    assert np.allclose(s.psi, -s.phi)
    cfg = parse_config(BASE + "init = eigenmode 1 0.001\n")
    s = cfg.initial_state()
    # the larger eigenvector component is scaled to eps
    assert max(np.abs(s.phi).max(), np.abs(s.psi).max()) == pytest.approx(0.001, rel=0.01)
    r1 = parse_config(BASE + "init = random 0.01 3\nseed = 4\n").initial_state()
    r2 = parse_config(BASE + "init = random 0.01 3\nseed = 4\n").initial_state()
    assert r1 == r2


def test_config_round_trip():
    cfg = parse_config(BASE + "init = cosine 1 0.01\n")
    again = parse_config(cfg.to_text())
    assert again.to_text() == cfg.to_text()
    assert again.params == cfg.params


def _simulate(tmp_path, text, *extra):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(text)
    code, out = run(["simulate", "--config", str(cfg), "--out-dir", str(tmp_path), *extra])
    return code, out.strip()


def test_simulate_flat(tmp_path):
    code, path = _simulate(tmp_path, BASE)
    assert code == 0
    snaps = gio.load_snapshots(f"{path}/snapshots.ndjson")
    assert [s.time for s in snaps] == pytest.approx([0, 0.02, 0.04, 0.05])
    assert all(not np.any(s.phi) and not np.any(s.psi) for s in snaps)
    meta = open(f"{path}/meta.txt").read()
    assert "halted = False" in meta and "snapshots = 4" in meta


def test_snapshot_round_trip_and_determinism(tmp_path):
    text = BASE + "init = cosine 1 0.01\n"
    code, first = _simulate(tmp_path, text)
    code2, second = _simulate(tmp_path, text)
    assert code == code2 == 0 and first != second
    a = open(f"{first}/snapshots.ndjson", "rb").read()
    assert a == open(f"{second}/snapshots.ndjson", "rb").read()
    assert open(f"{first}/diagnostics.csv", "rb").read() == \
        open(f"{second}/diagnostics.csv", "rb").read()
    header = json.loads(a.splitlines()[0])
    assert header["meta"]["n_points"] == 32
    snaps = gio.load_snapshots(f"{first}/snapshots.ndjson")
    cfg = parse_config(text)
    direct = run_simulation(cfg).snapshots
    assert snaps == direct


def test_csv_output_and_diagnose(tmp_path):
    code, path = _simulate(tmp_path, BASE + "init = cosine 1 0.01\n", "--format", "csv")
    assert code == 0
    files = sorted((tmp_path / path.split("/")[-1]).glob("snapshot_*.csv"))
    assert len(files) == 4
    last = gio.load_state(files[-1])
    assert last.time == pytest.approx(0.05)
    code, text = run(["diagnose", path, "--hamiltonian"])
    head, body = rows(text)
    assert code == 0 and len(body) == 4 and head[-2] == "hamiltonian"
    h = [float(r[-2]) for r in body]
    tol = [float(r[-1]) for r in body]
    assert abs(h[-1] - h[0]) <= 10 * max(tol)


def test_diagnose_shear_profile():
    code, text = run(["diagnose", "--shear-profile", "--alpha", "2", "--theta-minus", "1",
                      "--y-min", "-0.5", "--y-max", "0.5", "--n-y", "3"])
    head, body = rows(text)
    assert code == 0 and head == ["y", "u"]
    assert float(body[1][1]) == pytest.approx(1.0)


def test_halted_run_exit_code(tmp_path):
    text = BASE.replace("h = 1.0", "h = 0.1").replace("t_end = 0.05", "t_end = 1") + \
        "init = cosine 1 0.099 antisymmetric\nstepper = if-rk4\namplitude_warn = 10\n"
    code, path = _simulate(tmp_path, text)
    assert code == 1
    assert "halted = True" in open(f"{path}/meta.txt").read()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gsqg_fronts", "stability", "--alpha", "2",
                          "--find-marginal"], capture_output=True, text=True, check=True)
    assert "0.6392" in res.stdout
