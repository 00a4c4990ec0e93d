"""Command-line driver: parsing, exit codes, and output artifacts."""

import numpy as np
import pytest

from qalb import cli


def _read(path):
    return path.read_text().splitlines()


def test_parse_config_text():
    raw = cli.parse_config_text("tau = 1.5\n# note\nsteps=3\n", "cfg")
    assert raw["tau"] == ("1.5", "cfg:1")
    assert raw["steps"] == ("3", "cfg:3")
    with pytest.raises(cli.ConfigError):
        cli.parse_config_text("tau = 1\ntau = 2\n", "cfg")  # duplicate key
    with pytest.raises(cli.ConfigError):
        cli.parse_config_text("just words\n", "cfg")


def test_unknown_key_rejected(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("steps = 2\nbogus = 1\n")
    out = tmp_path / "x.csv"
    code = cli.main(["classical", "--config", str(cfg), "--out", str(out)])
    assert code == 2


def test_bad_value_and_missing_out(tmp_path):
    out = tmp_path / "x.csv"
    assert cli.main(["classical", "--set", "steps=-3", "--out", str(out)]) == 2
    assert cli.main(["classical", "--set", "steps=2"]) == 2  # no output path
    assert cli.main(["classical", "--set", "steps", "--out", str(out)]) == 2


def test_classical_run_and_sidecar(tmp_path):
    out = tmp_path / "c.csv"
    code = cli.main(["classical", "--set", "steps=3", "--out", str(out)])
    assert code == 0
    lines = _read(out)
    assert lines[0].startswith("t,")
    assert len(lines) == 5  # header + steps + 1
    meta = tmp_path / "c.csv.meta"
    assert meta.exists()
    first = meta.read_text()
    assert "subcommand = classical" in first and "steps = 3" in first
    # reruns are byte-identical: no timestamps or environment leakage
    assert cli.main(["classical", "--set", "steps=3", "--out", str(out)]) == 0
    assert out.read_text() == "\n".join(lines) + "\n"
    assert meta.read_text() == first


def test_classical_set_overrides_config(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("steps = 5\n")
    out = tmp_path / "c.csv"
    code = cli.main(
        ["classical", "--config", str(cfg), "--set", "steps=2", "--out", str(out)]
    )
    assert code == 0
    assert len(_read(out)) == 4


def test_classical_explicit_f0(tmp_path):
    out = tmp_path / "c.csv"
    assert (
        cli.main(
            ["classical", "--set", "f0=0.5,0.2,0.3", "--set", "steps=1",
             "--out", str(out)]
        )
        == 0
    )
    row = _read(out)[1].split(",")
    assert [float(x) for x in row[1:4]] == [0.5, 0.2, 0.3]
    # a population list of the wrong length is a config error
    assert (
        cli.main(["classical", "--set", "f0=0.5,0.5", "--out", str(out)]) == 2
    )


def test_quantum_run_columns(tmp_path):
    out = tmp_path / "q.csv"
    code = cli.main(
        ["quantum", "--set", "steps=3", "--set", "qc=2", "--out", str(out)]
    )
    assert code == 0
    lines = _read(out)
    header = lines[0].split(",")
    assert header[0] == "t"
    assert "ref_f0" in header
    assert "nonhermitian_qc2_f0" in header and "hermitized_qc2_f0" in header
    assert "nonhermitian_qc2_relerr" in header
    assert "nonhermitian_qc2_flag" in header
    # both initializations decode identically at t = 0
    row0 = lines[1].split(",")
    i_ref = header.index("ref_f0")
    i_nh = header.index("nonhermitian_qc2_f0")
    i_h = header.index("hermitized_qc2_f0")
    assert row0[i_nh] == row0[i_h]
    assert abs(float(row0[i_nh]) - float(row0[i_ref])) < 1e-12


def test_carleman_run_and_singular_abort(tmp_path):
    out = tmp_path / "k.csv"
    code = cli.main(["carleman", "--set", "steps=50", "--out", str(out)])
    assert code == 0
    header = _read(out)[0].split(",")
    assert header[:4] == ["t", "exact", "order1_f", "order1_abserr"]
    assert "order4_f" in header and "order4_abserr" in header
    # an initial point beyond the fixed point hits the blow-up guard
    code2 = cli.main(
        ["carleman", "--set", "f0=2.0", "--set", "steps=100", "--out", str(out)]
    )
    assert code2 == 3


def test_complexity_run(tmp_path):
    out = tmp_path / "r.csv"
    code = cli.main(["complexity", "--out", str(out)])
    assert code == 0
    lines = _read(out)
    assert lines[0] == "label,qubits,ancillas,gates,gates_with_log"
    assert len(lines) == 8
    assert lines[1].startswith("X*,")
    # Q inconsistent with D is rejected before any computation
    assert cli.main(["complexity", "--set", "Q=4", "--out", str(out)]) == 2


def test_bounds_run(tmp_path):
    out = tmp_path / "b.csv"
    code = cli.main(["bounds", "--out", str(out)])
    assert code == 0
    lines = _read(out)
    assert lines[0].split(",")[0] == "t"
    assert "inflate_c0_eps" in lines[0] and "inflate_a_eps_raw" in lines[0]
    assert len(lines) == 52  # header + default 50 steps + 1
    # the recovered error starts at zero for both variants
    row0 = lines[1].split(",")
    eps0 = float(row0[lines[0].split(",").index("inflate_c0_eps")])
    assert abs(eps0) < 1e-15


def test_streaming_demo(tmp_path, capsys):
    out = tmp_path / "s.txt"
    code = cli.main(["streaming-demo", "--out", str(out)])
    assert code == 0
    text = out.read_text()
    assert "round-trip" in text and "PASS" in text
    assert "FAIL" not in text


def test_quantum_flagged_exit_code(tmp_path, monkeypatch):
    # a divergence flag downgrades the exit code without losing the file
    from qalb import engine

    real = engine.evolve_quantum_0d

    def flagged(*args, **kwargs):
        res = real(*args, **kwargs)
        res.flagged = True
        res.flag_step = 1
        res.flag_reason = "norm growth monitor"
        return res

    monkeypatch.setattr(engine, "evolve_quantum_0d", flagged)
    out = tmp_path / "q.csv"
    code = cli.main(
        ["quantum", "--set", "steps=2", "--set", "qc=2",
         "--set", "mode=nonhermitian", "--out", str(out)]
    )
    assert code == 4
    assert out.exists()
