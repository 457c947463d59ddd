from __future__ import annotations

import json
import subprocess
import sys

import pytest

from mbqc_cohomology.cli import main


def run_cli(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def keys(out: str) -> dict[str, str]:
    pairs = [line[3:].split("=", 1) for line in out.splitlines() if line.startswith(":: ")]
    return dict(pairs)


def test_witness_ghz(capsys, data_dir):
    code, out, _ = run_cli(capsys, "witness", data_dir / "ghz.scn")
    assert code == 0
    k = keys(out)
    assert k["verdict"] == "contextual" and k["h2_dim"] == "1"
    assert k["certificate"] == "f1,f2,f3,f4"
    # machine lines come before prose
    lines = out.splitlines()
    first_prose = next(i for i, line in enumerate(lines) if not line.startswith(":: "))
    assert all(not line.startswith(":: ") for line in lines[first_prose:])


def test_witness_trivial_and_broken(capsys, data_dir):
    code, out, _ = run_cli(capsys, "witness", data_dir / "trivial_face.scn")
    assert code == 0 and keys(out)["verdict"] == "noncontextual"
    code, _, err = run_cli(capsys, "witness", data_dir / "broken.scn")
    assert code == 3 and "NonCommutingFace" in err


def test_parse_error_exit(capsys, tmp_path):
    bad = tmp_path / "bad.scn"
    bad.write_text("SCENARIO s\nQUBITS x\n")
    code, _, err = run_cli(capsys, "witness", bad)
    assert code == 2 and "line 2" in err
    code, _, _ = run_cli(capsys, "witness", tmp_path / "absent.scn")
    assert code == 2


def test_simulate_exact(capsys, data_dir):
    code, out, _ = run_cli(capsys, "simulate", data_dir / "ghz.mbqc", "--all", "--exact")
    assert code == 0
    assert keys(out)["table"] == "0,1,1,1"
    assert keys(out)["deterministic"] == "true"


def test_simulate_seeded_is_reproducible(capsys, data_dir):
    first = run_cli(capsys, "simulate", data_dir / "ghz.mbqc", "--input", "01", "--seed", "7")
    second = run_cli(capsys, "simulate", data_dir / "ghz.mbqc", "--input", "01", "--seed", "7")
    assert first == second
    assert keys(first[1])["seed"] == "7"
    assert keys(first[1])["o[01]"] == "1"


def test_simulate_cyclic(capsys, data_dir):
    code, _, err = run_cli(capsys, "simulate", data_dir / "cyclic.mbqc")
    assert code == 3 and "CyclicTemporalOrder" in err


def test_classify(capsys, data_dir):
    code, out, _ = run_cli(capsys, "classify", data_dir / "ghz.scn")
    k = keys(out)
    assert code == 0
    assert k["output"] == "0,1,1,1" and k["class_size"] == "8" and k["linear"] == "false"


def test_fraction(capsys, data_dir):
    code, out, _ = run_cli(capsys, "fraction", data_dir / "ghz.model")
    assert code == 0 and keys(out)["ncf"] == "0" and keys(out)["cf"] == "1"
    code, out, _ = run_cli(capsys, "fraction", data_dir / "mixture.model")
    assert keys(out)["cf"] == "1/2"


def test_iffy(capsys):
    code, out, _ = run_cli(capsys, "iffy", "--n", "4")
    k = keys(out)
    assert code == 0
    assert (k["boundary_zero"], k["beta_total"], k["faces_beta1"], k["verdict"]) == ("true", "1", "9", "contextual")
    code, out, _ = run_cli(capsys, "iffy", "--n", "5")
    assert code == 3 and keys(out)["boundary_zero"] == "false"
    code, out, _ = run_cli(capsys, "iffy", "--n", "4", "--conditional", "1")
    assert code == 0 and keys(out)["verdict"] == "contextual"


def test_bounds(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--function", "e")
    assert code == 0 and keys(out)["d_linear"] == "1" and keys(out)["thm1"] == "3/4"
    code, out, _ = run_cli(capsys, "bounds", "--function", "e", "--cf", "1/2")
    assert keys(out)["thm2"] == "7/8"


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bounds", "--function", "zz"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["nonsense"])
    assert info.value.code == 1
    with pytest.raises(SystemExit) as info:
        main(["iffy", "--n", "1"])
    assert info.value.code == 1
    capsys.readouterr()


def test_json_lines(capsys):
    code, out, _ = run_cli(capsys, "--format", "json-lines", "bounds", "--function", "e")
    records = [json.loads(line) for line in out.splitlines()]
    assert {"command": "bounds", "key": "thm1", "value": "3/4"} in records
    assert records[-1]["text"]


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "mbqc_cohomology", "witness", str(data_dir / "mermin_star.scn")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert ":: verdict=contextual" in proc.stdout
