"""CLI: exit codes, artifact rendering, cache reuse, determinism."""

import json

import numpy as np
import pytest

from dislospec import cli


def _run(argv):
    return cli.main(argv)


def test_bands_free_particle(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps(
            {
                "schema_version": 1,
                "potentials": {"V": [], "W": [[1, 0.5, 0.0], [-1, 0.5, 0.0]], "n": 1},
                "budgets": {"band_count": 3, "bands_points": 33},
            }
        )
    )
    out = tmp_path / "out"
    assert _run(["bands", "--config", str(cfg), "--out", str(out)]) == 0
    lines = (out / "bands.csv").read_text().splitlines()
    assert lines[0] == "xi,band_index,energy"
    # free band 1 at xi = pi equals pi^2
    rows = [line.split(",") for line in lines[1:]]
    at_pi = [float(r[2]) for r in rows if abs(float(r[0]) - np.pi) < 0.11 and r[1] == "1"]
    assert any(abs(e - np.pi**2) < 0.5 for e in at_pi)
    assert (out / "bands.svg").exists()
    assert (out / "config.resolved.json").exists()


def test_winding_scenario_and_cache_hit(tmp_path):
    out = tmp_path / "out"
    logs: list[str] = []
    cfg = cli.load_config(None, "scaled-n1")
    assert cli.run("winding", cfg, out, log=logs.append) == 0
    assert not any("cache hit" in line for line in logs)
    first = (out / "winding.csv").read_bytes()
    assert cli.run("winding", cfg, out, log=logs.append) == 0
    assert any("cache hit" in line for line in logs)
    assert (out / "winding.csv").read_bytes() == first  # byte-identical rerun
    assert json.loads((out / "winding.json").read_text())["winding"] == -1


def test_hypothesis_violation_exit_code(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(
        json.dumps(
            {
                "schema_version": 1,
                "potentials": {"V": [[2, 0.025, 0.0], [-2, 0.025, 0.0]], "W": [], "n": 1},
            }
        )
    )
    code = _run(["winding", "--config", str(cfg), "--out", str(tmp_path / "o")])
    assert code == 2
    assert "(H2)" in capsys.readouterr().err


def test_config_errors_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema_version": 1, "scenario": "scaled-n1", "junk": 1}))
    assert _run(["winding", "--config", str(bad), "--out", str(tmp_path / "o")]) == 3
    assert "unknown config key" in capsys.readouterr().err
    missing = tmp_path / "missing.json"
    assert _run(["winding", "--config", str(missing), "--out", str(tmp_path / "o")]) == 3
    noscenario = tmp_path / "none.json"
    noscenario.write_text(json.dumps({"schema_version": 1}))
    assert _run(["winding", "--config", str(noscenario), "--out", str(tmp_path / "o")]) == 3


def test_unknown_budget_key_rejected(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(
        json.dumps({"schema_version": 1, "scenario": "scaled-n1", "budgets": {"nt": 8}})
    )
    with pytest.raises(cli.ConfigError):
        cli.load_config(str(p), None)


def test_corrupt_cache_recomputes(tmp_path):
    out = tmp_path / "out"
    cfg = cli.load_config(None, "scaled-n1")
    logs: list[str] = []
    assert cli.run("dirac", cfg, out, log=logs.append) == 0
    key = cli.config_hash("dirac", cfg)
    (out / "cache" / f"{key}.json").write_text("{not json")
    assert cli.run("dirac", cfg, out, log=logs.append) == 0
    assert any("cache corrupt" in line for line in logs)
    rec = json.loads((out / "dirac.json").read_text())
    assert abs(rec["E_star"] - 9.86959384680043) < 1e-9


def test_dirac_flow_artifacts(tmp_path):
    out = tmp_path / "out"
    cfg = cli.load_config(None, "scaled-n1")
    cfg["budgets"]["n_t"] = 24
    cfg["budgets"]["dirac_profile"] = {"kind": "step"}
    assert cli.run("dirac-flow", cfg, out, log=lambda *_: None) == 0
    assert json.loads((out / "dirac_flow.json").read_text())["flow"] == -1
    lines = (out / "dirac_flow.csv").read_text().splitlines()
    assert lines[0] == "t,branch,energy"
    assert len(lines) > 8


def test_svg_artifacts_have_csv_twins(tmp_path):
    out = tmp_path / "out"
    cfg = cli.load_config(None, "scaled-n1")
    cfg["budgets"]["bands_points"] = 17
    cfg["budgets"]["band_count"] = 3
    assert cli.run("bands", cfg, out, log=lambda *_: None) == 0
    for svg in out.glob("*.svg"):
        assert (out / (svg.stem + ".csv")).exists()
