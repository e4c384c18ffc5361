import io
import json
import subprocess
import sys

import pytest

from lwrarz.cli import parse_state, run
from lwrarz.instances import REF1

PAIR = ["--left", "1,1.6667", "--right", "2,1", "--q0", "1", "--solver", "r1c"]


def call(args):
    out = io.StringIO()
    code = run(args, stream=out)
    return code, out.getvalue()


def test_solve_stdout():
    code, text = call(["solve", *PAIR])
    assert code == 0
    doc = json.loads(text)
    assert doc["traces"]["q"] == pytest.approx([1.0, 1.0], abs=1e-12)
    assert [w["kind"] for w in doc["waves"]][1] == "constraint_interface"


def test_solve_files_are_byte_identical(tmp_path):
    for name in ("a", "b"):
        assert call(["solve", *PAIR, "--out", str(tmp_path / name)])[0] == 0
    for ext in (".json", ".csv"):
        assert (tmp_path / ("a" + ext)).read_bytes() == (tmp_path / ("b" + ext)).read_bytes()
    lines = (tmp_path / "a.csv").read_text().splitlines()
    assert lines[0] == "xi,rho,v,q,w,phase,wave_id"
    assert len(lines) == 2002


def test_classify():
    code, text = call(["classify", *PAIR])
    assert code == 0 and text.strip() == "N4_1"


def test_verify_passes():
    code, text = call(["verify", "--left", "1.9,1.3667", "--right", "1.9,1.3667", "--q0", "2", "--solver", "r2c"])
    assert code == 0
    assert all(json.loads(line)["passed"] for line in text.splitlines())


def test_scan_weak(tmp_path):
    out = tmp_path / "scan.jsonl"
    args = ["scan", "--which", "weak", "--solver", "r1c", "--q0", "1", "--samples", "20", "--seed", "3"]
    assert call([*args, "--out", str(out)])[0] == 0
    first = out.read_text()
    assert call([*args, "--out", str(out)])[0] == 0
    assert out.read_text() == first
    assert len(first.splitlines()) == 20


def test_scan_invariant():
    code, _ = call(["scan", "--which", "invariant", "--domain", "I1c_a", "--solver", "r1c", "--q0", "1", "--samples", "50"])
    assert code == 0


def test_examples_tv1():
    code, text = call(["examples", "--which", "tv1"])
    assert code == 0
    assert len(text.splitlines()) == 3


@pytest.mark.parametrize(
    "args",
    [
        ["bogus"],
        ["solve", "--left", "9,1", "--right", "2,1", "--solver", "r1"],
        ["solve", "--left", "1,2,3", "--right", "2,1", "--solver", "r1"],
        ["solve", "--left", "1,1.6667", "--right", "2,1", "--solver", "r1c"],
        ["examples", "--which", "nope"],
        ["solve", *PAIR, "--model", "/nonexistent.json"],
    ],
)
def test_usage_errors(args):
    assert call(args)[0] == 1


def test_model_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(REF1))
    assert call(["classify", *PAIR, "--model", str(path)]) == (0, "N4_1\n")


def test_snapping(m1):
    u = parse_state(m1, "1,1.6667")
    assert u.v == pytest.approx(5 / 3, abs=1e-15)
    assert parse_state(m1, "2,1").is_congested


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lwrarz", "classify", *PAIR], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "N4_1"
