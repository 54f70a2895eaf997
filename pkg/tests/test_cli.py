import io
import json
import subprocess
import sys

import pytest

from lowzeros import cli


def run(argv):
    proc = subprocess.run([sys.executable, "-m", "lowzeros", *argv], capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_zeros_csv(tmp_path):
    code, out, _ = run(["zeros", "--q", "3", "--height", "10", "--cache-dir", str(tmp_path)])
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# lowzeros command=zeros qs=3 height=10")
    assert lines[1] == "q,j,height,zero_count,min_abs_gamma"
    assert lines[2] == "3,1,10,2,8.03973715568"
    assert (tmp_path / "zeros_q3.txt").exists()


def test_zeros_bad_modulus_exit_2():
    code, out, err = run(["zeros", "--q", "4", "3", "--height", "9"])
    assert code == 2
    assert "modulus 4" in err
    assert "3,1,9,2" in out


def test_missing_modulus_exit_2():
    assert run(["stats"])[0] == 2


def test_argparse_error_exit_2():
    assert run(["bounds", "--bound", "nope"])[0] == 2


def test_stats_json(tmp_path):
    code, out, _ = run(["stats", "--q", "31", "--beta", "0.5,1", "--out", "json", "--cache-dir", str(tmp_path)])
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "stats" and doc["config"]["qs"] == [31]
    row = doc["rows"][0]
    assert row["q"] == 31 and "thm1" in row and "proportion_0.5" in row
    assert row["central_order_mean"] == 0


def test_stats_shifted():
    code, out, _ = run(["stats", "--q", "31", "--t0", "5", "--h", "0.5"])
    assert code == 0
    assert "T0" in out.splitlines()[1]


def test_stats_identity_failure_exit_3():
    code, _, err = run(["stats", "--q", "31", "--tolerance", "1e-30"])
    assert code == 3
    assert "numerical consistency failure" in err


def test_explicit_check_rows():
    code, out, _ = run(["explicit-check", "--q", "5", "--delta", "1", "--t", "0.5", "--height", "30"])
    assert code == 0
    rows = out.splitlines()[2:]
    assert len(rows) == 6  # three characters, both signs


def test_explicit_delta_over_cap_exit_2():
    assert run(["explicit-check", "--q", "5", "--delta", "2", "--t", "0.5"])[0] == 2


def test_bounds_commands():
    code, out, _ = run(["bounds", "--bound", "cor2", "--beta", "0.5"])
    assert code == 0 and "0.107142857" in out
    assert run(["bounds", "--bound", "hr", "--beta", "0.5"])[0] == 2
    assert run(["bounds", "--bound", "cor2", "--beta", "0.25"])[0] == 2
    code, out, _ = run(["bounds", "--bound", "thm1", "--q", "101", "--t", "0.4", "--out", "json"])
    assert code == 0 and json.loads(out)["rows"][0]["value"] > 0.5


def test_crossings_command():
    code, out, _ = run(["crossings", "--f", "hr", "--g", "zero"])
    assert code == 0 and "0.6332" in out
    assert run(["crossings", "--f", "hr", "--g", "hr"])[0] == 2


def test_extremal_tables():
    code, out, _ = run(["extremal", "--delta", "1", "--t", "0.5", "--points", "11"])
    assert code == 0 and len(out.splitlines()) == 13
    code, out, _ = run(["extremal", "--delta", "1", "--t", "0.5", "--table", "u", "--points", "5"])
    assert code == 0


def test_in_process_emit_matches_subprocess():
    cfg = cli.RunConfig(command="crossings", f="hr", g="zero", lo=0.51, hi=0.9)
    buf = io.StringIO()
    assert cli.run_crossings(cfg, stream=buf) == 0
    code, out, _ = run(["crossings", "--f", "hr", "--g", "zero"])
    assert buf.getvalue() == out


@pytest.mark.slow
def test_proportion_table():
    code, out, _ = run(["proportion", "--beta", "0.2,0.5,1"])
    assert code == 0
    assert "zhao" in out.splitlines()[1]
