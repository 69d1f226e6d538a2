from __future__ import annotations

import subprocess
import sys

import pytest

from clusterenc.cli import EXIT_FAIL, EXIT_OK, EXIT_USAGE, main
from clusterenc.graphs import parse_graph
from clusterenc.lattice import parse

from helpers import FIXTURES, fixture_text


def fx(name: str) -> str:
    return str(FIXTURES / name)


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_convert_matches_fixture(capsys):
    code, out, _ = run(capsys, "convert", fx("code_6q.txt"))
    assert code == EXIT_OK and out == fixture_text("graph_code_6q.txt")


def test_graph_text_and_dot(capsys):
    code, out, _ = run(capsys, "graph", fx("code_6q.txt"))
    assert code == EXIT_OK and out == fixture_text("augmented_6q.txt")
    code, out, _ = run(capsys, "graph", fx("code_6q.txt"), "--dot")
    assert out.startswith("graph ") and out.count("shape=box") == 2


def test_compile_writes_output_file(capsys, tmp_path):
    dest = tmp_path / "k3.pattern"
    code, out, _ = run(capsys, "compile", fx("k3.txt"), "-o", str(dest))
    assert code == EXIT_OK and out == "" and dest.read_text() == fixture_text("k3.pattern")
    run(capsys, "compile", fx("p4.txt"), "--compact", "-o", str(dest))
    assert dest.read_text() == fixture_text("p4_compact.pattern")


def test_compile_rejects_empty_graph(capsys, tmp_path):
    empty = tmp_path / "empty.txt"
    empty.write_text("0 0\n")
    code, _, err = run(capsys, "compile", str(empty))
    assert code == EXIT_USAGE and "no vertices" in err


def test_run_seed_and_script_agree(capsys):
    code, seeded, _ = run(capsys, "run", fx("gadget.pattern"), "--seed", "9")
    assert code == EXIT_OK
    bits = "".join(line.split()[-1] for line in seeded.splitlines() if line.startswith("outcome"))
    code, scripted, _ = run(capsys, "run", fx("gadget.pattern"), "--script", bits)
    assert code == EXIT_OK and scripted == seeded


def test_run_script_from_file(capsys, tmp_path):
    script = tmp_path / "bits.txt"
    script.write_text("0 0 0\n")
    code, out, _ = run(capsys, "run", fx("empty.pattern"), "--script", str(script))
    assert code == EXIT_OK and out == "1 1\n1|0 +\n"


@pytest.mark.parametrize("script,msg", [("01x", "0/1 bits"), ("0", "")])
def test_run_bad_scripts(capsys, script, msg):
    code, _, err = run(capsys, "run", fx("gadget.pattern"), "--script", script)
    assert code in (EXIT_USAGE, EXIT_FAIL) and err.startswith("error:") and msg in err


def test_verify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "verify", fx("k3.pattern"), fx("k3.txt"), "--shots", "5")
    assert (code, out) == (EXIT_OK, "pass 5/5\n")
    code, out, _ = run(capsys, "verify", fx("p4_compact.pattern"), fx("p4.txt"), "--shots", "3", "--seed", "4")
    assert (code, out) == (EXIT_OK, "pass 3/3\n")


def test_verify_wrong_graph_fails(capsys, tmp_path):
    wrong = tmp_path / "wrong.txt"
    wrong.write_text("3 0\n")
    code, out, _ = run(capsys, "verify", fx("k3.pattern"), str(wrong), "--shots", "2")
    assert (code, out) == (EXIT_FAIL, "fail 0/2\n")


def test_verify_size_mismatch(capsys):
    code, _, err = run(capsys, "verify", fx("k3.pattern"), fx("p4.txt"))
    assert code == EXIT_USAGE and "3 outputs" in err


def test_encode(capsys, tmp_path):
    dest = tmp_path / "out.txt"
    code, _, _ = run(capsys, "encode", fx("code_6q.txt"), fx("state_10.txt"), "-o", str(dest))
    assert code == EXIT_OK
    lines = dest.read_text().splitlines()
    assert lines[0] == "6 6" and len(lines) == 7


def test_encode_rejects_incomplete_state(capsys, tmp_path):
    partial = tmp_path / "partial.txt"
    partial.write_text("2 1\n10|00 +\n")
    code, _, err = run(capsys, "encode", fx("code_6q.txt"), str(partial))
    assert code == EXIT_USAGE and "as many generators" in err


def test_stats(capsys):
    code, out, _ = run(capsys, "stats", fx("gadget.pattern"))
    assert (code, out) == (EXIT_OK, "measurements=17\nrounds=3\narea=25\n")


def test_missing_file(capsys):
    code, _, err = run(capsys, "stats", "/nonexistent/p.pattern")
    assert code == EXIT_USAGE and "/nonexistent/p.pattern" in err


def test_parse_error_location(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n1 x\n")
    code, _, err = run(capsys, "compile", str(bad))
    assert code == EXIT_USAGE and f"{bad}:2:" in err


def test_usage_errors(capsys):
    assert main([]) == EXIT_USAGE
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main(["run", fx("k3.pattern"), "--seed", "1", "--script", "0"]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK
    capsys.readouterr()


def test_outputs_parse_back(capsys):
    _, out, _ = run(capsys, "compile", fx("k3.txt"))
    assert len(parse(out).outputs) == len(parse_graph(fixture_text("k3.txt")))


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "clusterenc", "stats", fx("empty.pattern")],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0 and res.stdout == "measurements=0\nrounds=0\narea=1\n"
