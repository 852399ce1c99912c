from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

from dimermirror.cli import main
from dimermirror.io import dimer_from_dict, dimer_to_dict, load_bundled

DATA = Path(__file__).resolve().parent.parent / "src" / "dimermirror" / "data"


def run_cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "dimermirror.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc.returncode, proc.stdout, proc.stderr


def test_round_trip_bundled_files():
    for name in ("c3", "conifold", "spp"):
        raw = json.loads((DATA / f"{name}.json").read_text())
        assert dimer_to_dict(dimer_from_dict(raw)) == raw


def test_parse_spp_shape():
    d = load_bundled("spp")
    assert len(d.vertices) == 3
    assert len(d.arrows) == 7
    assert len(d.faces) == 4


def test_verify_exit_codes(tmp_path):
    rc, out, err = run_cli("verify", str(DATA / "spp.json"), "--n-max", "4")
    assert rc == 0, err
    data = json.loads(out)
    assert data["passed"] is True

    bad = json.loads((DATA / "spp.json").read_text())
    bad["arrows"][0]["shift"] = [9, 9]
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    rc, out, err = run_cli("verify", str(p))
    assert rc == 1


def test_parse_error_names_face(tmp_path):
    bad = json.loads((DATA / "c3.json").read_text())
    bad["faces"][1]["sign"] = "±"
    p = tmp_path / "bad_sign.json"
    p.write_text(json.dumps(bad))
    rc, out, err = run_cli("validate", str(p))
    assert rc != 0
    assert "faces[1].sign" in out + err


def test_usage_error_exit_code():
    rc, out, err = run_cli("no-such-command")
    assert rc == 2


def test_reports_are_deterministic():
    rc1, out1, _ = run_cli("report", str(DATA / "conifold.json"), "--n-max", "3")
    rc2, out2, _ = run_cli("report", str(DATA / "conifold.json"), "--n-max", "3")
    assert rc1 == rc2 == 0
    assert out1 == out2


def test_markdown_report_mentions_pair_of_pants_data():
    rc, out, _ = run_cli("report", str(DATA / "c3.json"), "--format", "markdown", "--n-max", "2")
    assert rc == 0
    assert "**genus**: 0" in out
    assert "**punctures**: 3" in out


def test_main_in_process_verify():
    assert main(["verify", "c3", "--n-max", "2"]) == 0


def test_jacobi_subcommand_equal():
    rc, out, _ = run_cli("jacobi", "c3", "--equal", "x,y", "y,x")
    assert rc == 0
    assert json.loads(out)["equal"] is True


def test_zigzags_subcommand_consistency():
    rc, out, _ = run_cli("zigzags", "spp")
    assert rc == 0
    data = json.loads(out)
    assert len(data["cycles"]) == 5


def test_sh_subcommand():
    rc, out, _ = run_cli("sh", "conifold", "--n-max", "2")
    assert rc == 0
    data = json.loads(out)
    assert data["odd_rank"] == 3


def test_hh_subcommand():
    rc, out, _ = run_cli("hh", "spp", "--n-max", "2")
    assert rc == 0
    data = json.loads(out)
    assert all(all(v for v in d.values()) for d in data["cocycle_checks"].values())


def test_base_vertex_override():
    rc, out, _ = run_cli("hh", "spp", "--n-max", "1", "--base-vertex", "2")
    assert rc == 0
    data = json.loads(out)
    thetas = [l for l in data["e2_odd"] if l["kind"] == "theta" and l["n"] == 0]
    assert {l["v"] for l in thetas} == {"1", "3"} or {l["v"] for l in thetas} == {1, 3}
