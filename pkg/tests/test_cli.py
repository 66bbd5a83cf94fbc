import csv
import io
import json

import numpy as np
import pytest

from jcwaveguide import cli
from jcwaveguide.verify import CheckResult


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_spectrum_shows_rabi_dips(capsys):
    code, out, _ = run(capsys, "spectrum", "--omega", "0", "--Omega", "0", "--g", "2.236", "--kappa", "1")
    assert code == 0
    table = rows(out)
    assert len(table) == 2001
    assert set(table[0]) >= {"k", "t_bar_re", "t_bar_im", "r_bar_re", "r_bar_im", "T", "R", "source"}
    k = np.array([float(r["k"]) for r in table])
    T = np.array([float(r["T"]) for r in table])
    for dip in (-2.236, 2.236):
        window = np.abs(k - dip) < 0.5
        assert abs(k[window][np.argmin(T[window])] - dip) < 0.01
        assert T[window].min() < 1e-4
    assert {r["source"] for r in table} == {"analytic"}


def test_rates_are_normalized_to_kappa(capsys):
    _, a, _ = run(capsys, "spectrum", "--g", "1", "--kappa", "1", "--n", "5")
    _, b, _ = run(capsys, "spectrum", "--g", "2", "--kappa", "2", "--n", "5")
    _, c, _ = run(capsys, "spectrum", "--g", "2", "--kappa", "2", "--n", "5", "--absolute")
    assert a == b
    assert a != c


def test_g2spec_marks_divergence_as_gap(capsys):
    code, out, _ = run(capsys, "g2spec", "--channel", "reflected", "--g", "0.447", "--kappa", "1",
                       "--kmin", "-1", "--kmax", "1", "--n", "5")
    assert code == 0
    table = rows(out)
    mid = table[2]
    assert float(mid["half_energy"]) == 0.0
    assert mid["divergent"] == "true" and mid["g2_zero"] == ""
    assert all(r["divergent"] == "false" for i, r in enumerate(table) if i != 2)


def test_every_command_runs(capsys):
    for argv in (["excitations", "--n", "3"], ["poles"], ["smatrix", "--channel", "RL", "--k1", "0.2", "--p1", "0.1"],
                 ["wavefunction", "--n", "3"], ["g2", "--n", "3"], ["g2spec", "--n", "3"]):
        code, out, err = run(capsys, *argv)
        assert code == 0, err
        assert out.splitlines()[0].endswith("source")


def test_poles_include_oracle_rows(capsys):
    _, out, _ = run(capsys, "poles", "--g", "1", "--kappa", "2")
    table = rows(out)
    assert [r["source"] for r in table].count("oracle") == 4
    first = table[0]
    assert first["pole"] == "lambda1_plus"
    assert abs(float(first["re"]) - np.sqrt(0.25 - 1 / 16)) < 1e-12 and float(first["im"]) == -0.25


def test_smatrix_defaults_to_on_shell(capsys):
    for ch in ("RR", "LL", "RL"):
        _, out, _ = run(capsys, "smatrix", "--channel", ch, "--k1", "0.3", "--k2", "-0.1", "--p1", "0.5")
        assert rows(out)[0]["on_shell"] == "true"


def test_error_record(capsys):
    code, out, err = run(capsys, "spectrum", "--kappa", "0")
    assert code != 0 and out == ""
    rec = json.loads(err)
    assert rec["error"] == "NonPositiveKappa" and rec["command"] == "spectrum"
    code, _, err = run(capsys, "g2", "--channel", "sideways")
    assert code != 0 and json.loads(err)["error"] == "UnknownChannel"
    code, _, err = run(capsys, "spectrum", "--kmin", "1", "--kmax", "0", "--n", "3")
    assert code != 0 and json.loads(err)["error"] == "GridNotIncreasing"


def test_json_round_trip(tmp_path, capsys):
    first = tmp_path / "a.json"
    second = tmp_path / "b.json"
    code, _, _ = run(capsys, "g2", "--channel", "LL", "--g", "2", "--kappa", "0.5", "--half-energy", "4",
                     "--n", "7", "--format", "json", "--output", str(first))
    assert code == 0
    assert run(capsys, "--config", str(first), "--output", str(second))[0] == 0
    assert first.read_bytes() == second.read_bytes()
    doc = json.loads(first.read_text())
    assert doc["config"]["command"] == "g2" and doc["columns"][-1] == "source"


def test_json_renders_divergence_as_null(capsys):
    _, out, _ = run(capsys, "g2", "--channel", "RR", "--half-energy", "2.2360679774997898", "--n", "2",
                    "--format", "json")
    doc = json.loads(out)
    assert all(r[1] is None and r[2] is True for r in doc["rows"])


def test_key_value_config_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# strong coupling\ng = 2.5\nkappa = 1\nn = 4\nkmin = -1\nkmax = 1\n")
    _, from_file, _ = run(capsys, "spectrum", "--config", str(cfg))
    _, from_flags, _ = run(capsys, "spectrum", "--g", "2.5", "--n", "4", "--kmin", "-1", "--kmax", "1")
    assert from_file == from_flags
    _, overridden, _ = run(capsys, "spectrum", "--config", str(cfg), "--g", "1")
    _, flags_only, _ = run(capsys, "spectrum", "--g", "1", "--n", "4", "--kmin", "-1", "--kmax", "1")
    assert overridden == flags_only


def test_bad_config_key(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(ValueError):
        cli.main(["spectrum", "--config", str(cfg)])


def test_output_dir_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUTPUT_DIR_ENV, str(tmp_path / "out"))
    assert cli.main(["poles", "--output", "poles.csv"]) == 0
    assert (tmp_path / "out" / "poles.csv").read_text().startswith("pole,re,im,source")


def test_output_is_deterministic(capsys):
    a = run(capsys, "wavefunction", "--n", "4", "--k1", "0.3", "--k2", "-0.2")[1]
    b = run(capsys, "wavefunction", "--n", "4", "--k1", "0.3", "--k2", "-0.2")[1]
    assert a == b
    value = rows(a)[1]["psi_re"]
    assert float(value) == float(value) and len(value.replace("-", "").replace(".", "").split("e")[0].lstrip("0")) <= 17


def test_verify_quick_passes(capsys):
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 0
    assert all(r["passed"] == "true" and r["source"] == "oracle" for r in rows(out))


def test_verify_exit_status_on_failure(monkeypatch, capsys):
    monkeypatch.setattr(cli, "run_checks", lambda level, seed: [CheckResult("bad", 1.0, 0.5, 0.0)])
    code, out, _ = run(capsys, "verify")
    assert code == 1
    assert rows(out)[0]["passed"] == "false"


def test_missing_command_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main([])
    assert exc.value.code == 2


def test_closed_pipe_is_quiet():
    import subprocess
    import sys

    proc = subprocess.run(f"{sys.executable} -m jcwaveguide spectrum | head -1", shell=True,
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("k,t_bar_re")
    assert proc.stderr == ""
