import json
import subprocess
import sys

import pytest

from sqdepth.cli import main
from sqdepth.corpus import paper_example
from sqdepth.formats import dump_instance, parse_instance


@pytest.fixture
def e2_file(tmp_path):
    path = tmp_path / "e2.json"
    path.write_text(dump_instance(paper_example("e2").instance))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def test_analyze(capsys, e2_file):
    code, out, _ = run(capsys, "analyze", e2_file)
    assert code == 0
    assert "B=[x1*x2*x3, x1*x2*x4, x1*x3*x4, x1*x3*x5, x2*x3*x5]" in out
    assert "pathological=true" in out and "e=3" in out


def test_analyze_empty_B(capsys, tmp_path):
    path = write(tmp_path, "b.json", {"n": 3, "I": [[1, 2]], "J": [[1, 2, 3]], "char": 0})
    code, out, _ = run(capsys, "analyze", path)
    assert code == 0 and "B=[]" in out.splitlines()


def test_depth(capsys, e2_file):
    code, out, _ = run(capsys, "depth", e2_file)
    assert code == 0 and "depth=3" in out and "pd=2" in out
    code, out2, _ = run(capsys, "depth", e2_file)
    assert out == out2
    code, out, _ = run(capsys, "depth", e2_file, "--quotient", "S/I", "--char", "2", "--betti")
    assert code == 0 and "depth=2" in out and "field=GF(2)" in out and "betti=[" in out


def test_depth_unused_variable(capsys, tmp_path):
    path = write(tmp_path, "u.json", {"n": 6, "I": [[1, 2], [1, 3]], "J": [[1, 2, 3]], "char": 0})
    code, out, _ = run(capsys, "depth", path)
    assert code == 0 and "restricted=" in out and "depth=5" in out


def test_sdepth(capsys, e2_file, tmp_path):
    cert = tmp_path / "cert.json"
    code, out, _ = run(capsys, "sdepth", e2_file, "--certificate", str(cert))
    assert code == 0 and "sdepth=3" in out
    code, out, _ = run(capsys, "verify", e2_file, "--partition", str(cert), "--k", "3")
    assert code == 0 and "ok=true" in out
    code, out, _ = run(capsys, "sdepth", e2_file, "--k", "4")
    assert code == 0 and "decision=false" in out


def test_sdepth_timeout(capsys, tmp_path):
    path = write(tmp_path, "e.json", dump_instance(paper_example("e").instance))
    code, out, _ = run(capsys, "sdepth", path, "--budget", "5")
    assert code == 4 and "lower_bound=" in out
    code, out, _ = run(capsys, "sdepth", path, "--budget", "5", "--k", "4")
    assert code == 4 and "decision=timeout" in out


def test_verify(capsys, e2_file):
    code, out, _ = run(capsys, "verify", e2_file, "--theorem")
    assert code == 0 and "status=holds" in out
    code, out, _ = run(capsys, "verify", e2_file, "--lemma", "l4")
    assert code == 0 and "status=" in out


def test_verify_printed_partition(capsys, tmp_path):
    inst = write(tmp_path, "e.json", dump_instance(paper_example("e").instance))
    run(capsys, "gen", "--example", "e", "--partition", "-o", str(tmp_path / "p.json"))
    code, out, _ = run(capsys, "verify", inst, "--partition", str(tmp_path / "p.json"), "--k", "4")
    assert "valid_intervals=true" in out and "disjoint=true" in out and "covering=false" in out
    assert code == 3


def test_verify_partition_needs_k(capsys, e2_file, tmp_path):
    p = write(tmp_path, "p.json", {"intervals": []})
    code, _, err = run(capsys, "verify", e2_file, "--partition", p)
    assert code == 2 and "--k" in err


def test_reproduce(capsys):
    code, out, _ = run(capsys, "reproduce", "--example", "e2")
    assert code == 0 and "result=pass" in out and "DIFF [report] q=|C|" in out


def test_gen_roundtrip(capsys, tmp_path):
    out_path = tmp_path / "g.json"
    code, _, _ = run(capsys, "gen", "--mode", "pathological", "--n", "6", "--d", "2", "--r", "4",
                     "--seed", "9", "-o", str(out_path))
    assert code == 0
    first = out_path.read_text()
    inst = parse_instance(first)
    run(capsys, "gen", "--mode", "pathological", "--n", "6", "--d", "2", "--r", "4",
        "--seed", "9", "-o", str(out_path))
    assert out_path.read_text() == first
    assert dump_instance(inst) + "\n" == first


def test_gen_errors(capsys):
    code, _, err = run(capsys, "gen", "--n", "4", "--d", "2", "--r", "7")
    assert code == 2 and "infeasible" in err
    code, _, _ = run(capsys, "gen", "--n", "4")
    assert code == 2


def test_search(capsys, tmp_path):
    log = tmp_path / "log.jsonl"
    code, out, _ = run(capsys, "search", "--i", "1", "--n", "6", "--d", "2", "--r", "4",
                       "--seeds", "0..3", "--log", str(log))
    assert code == 0 and "counterexample=0" in out
    first = log.read_bytes()
    assert len(first.splitlines()) == 4
    run(capsys, "search", "--i", "1", "--n", "6", "--d", "2", "--r", "4",
        "--seeds", "0..3", "--log", str(log))
    assert log.read_bytes() == first


@pytest.mark.parametrize("payload, rule", [
    ({"n": 4, "I": [[1, 2]], "J": [[3, 4]], "char": 0}, "J_subset_of_I"),
    ({"n": 4, "I": [[1, 2], [3, 4]], "J": [[1, 2]], "char": 0}, "J_degree_normalization"),
    ({"n": 4, "I": [[1, 2]], "J": [[1, 2, 3]], "char": 9}, "char_prime"),
])
def test_invalid_instances(capsys, tmp_path, payload, rule):
    path = write(tmp_path, "bad.json", payload)
    for cmd in ("analyze", "depth", "sdepth"):
        code, _, err = run(capsys, cmd, path)
        assert code == 2 and rule in err


def test_malformed_input(capsys, tmp_path):
    path = write(tmp_path, "bad.json", '{"n": 3,\n "I": [[1]')
    code, _, err = run(capsys, "analyze", path)
    assert code == 2 and "line" in err
    code, _, err = run(capsys, "analyze", str(tmp_path / "missing.json"))
    assert code == 2


def test_bad_flags(capsys, e2_file):
    assert run(capsys, "depth", e2_file, "--char", "4")[0] == 2
    assert run(capsys, "sdepth", e2_file, "--budget", "0")[0] == 2
    assert run(capsys, "search", "--i", "1", "--n", "5", "--d", "2", "--r", "3",
               "--seeds", "x")[0] == 2
    assert run(capsys)[0] == 2


def test_module_entry_point(e2_file):
    proc = subprocess.run([sys.executable, "-m", "sqdepth", "depth", e2_file],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "depth=3" in proc.stdout
