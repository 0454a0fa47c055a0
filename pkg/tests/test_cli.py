import json
import subprocess
import sys
from pathlib import Path

import pytest

from kmsoergel.cli import run, main

GOLDEN = Path(__file__).parent / "golden"


def ok(argv):
    code, text = run(argv)
    assert code == 0, text
    return json.loads(text)


def test_stdmult_example():
    assert ok(["--datum", "sl2", "bim", "stdmult", "--word", "s1,s1"]) == {"e": 2, "s1": 2}


def test_unit_example():
    assert ok(["--datum", "sl2", "cx", "unit", "delta:s1*nabla:s1"]) == {"unit": True}


def test_datum_dual_twice_is_identity(tmp_path):
    src = GOLDEN / "affine_sl2.json"
    once = tmp_path / "once.json"
    once.write_text(run(["datum", "dual", str(src)])[1])
    twice = run(["datum", "dual", str(once)])[1]
    assert json.loads(twice) == json.loads(src.read_text())


def test_domain_error_payload():
    code, text = run(["--datum", "pgl2", "dem", "split", "--gen", "s1", "1"])
    assert code == 1
    assert json.loads(text) == {"error": "NotSCTypeAt", "detail": "datum is not of simply-connected type at index s1"}


def test_invalid_datum_file_is_domain_error():
    code, text = run(["datum", "validate", str(GOLDEN / "invalid.json")])
    assert code == 1 and json.loads(text)["error"] == "InvalidDatum"


@pytest.mark.parametrize("argv", [["nonsense"], ["--datum", "sl2", "weyl"], ["weyl", "length", "s1"],
                                  ["--datum", "no_such_datum", "weyl", "length", "s1"],
                                  ["--bound", "-1", "ring", "snf", "[[1]]"]])
def test_usage_errors(argv):
    code, text = run(argv)
    assert code == 2 and json.loads(text)["error"] == "UsageError"


def test_bound_from_environment(monkeypatch):
    monkeypatch.setenv("KMSOERGEL_BOUND", "1")
    assert ok(["--datum", "sl2", "bim", "hom", "s1", "e"])["bound"] == 1
    assert ok(["--datum", "sl2", "--bound", "2", "bim", "hom", "s1", "e"])["bound"] == 2


def test_complex_json_roundtrip(tmp_path):
    cx = ok(["--datum", "affine_sl2", "cx", "rouquier", "--kind", "nabla", "--word", "s0,s1"])
    f = tmp_path / "c.json"
    f.write_text(json.dumps(cx))
    assert ok(["--datum", "affine_sl2", "cx", "conv", "@" + str(f)]) == cx
    assert ok(["--datum", "affine_sl2", "cx", "conv", json.dumps(cx)]) == cx


def test_poly_roundtrip():
    p = {"terms": [{"coeff": 3, "exp": [-1, 2]}, {"coeff": -1, "exp": [0, 0]}]}
    out = ok(["--datum", "affine_sl2", "ring", "mul", json.dumps(p), "1"])["result"]
    assert out == p


def test_output_deterministic():
    argv = ["--datum", "a2", "cx", "minimize", "delta:s1,s2,s1"]
    assert run(argv) == run(argv)


def _batch(path, *extra):
    return run(["batch", str(path), *extra])


def test_empty_batch_passes(tmp_path):
    f = tmp_path / "empty.json"
    f.write_text(json.dumps({"commands": []}))
    code, text = _batch(f)
    assert code == 0 and json.loads(text) == {"mismatches": [], "passed": 0, "total": 0}


@pytest.mark.parametrize("jobs", ["1", "4"])
def test_golden_corpus_replays(jobs):
    code, text = _batch(GOLDEN / "corpus.json", "--jobs", jobs)
    report = json.loads(text)
    assert code == 0, report["mismatches"]
    assert report["total"] >= 50


def test_corrupted_fixture_fails_with_diff(tmp_path):
    corpus = json.loads((GOLDEN / "corpus.json").read_text())
    corpus["commands"] = corpus["commands"][:3]
    exp = corpus["commands"][1]["expected"]
    exp["stdout"] = exp["stdout"].replace("asymmetric", "symmetric")
    for c in corpus["commands"]:
        c["argv"] = [a.replace("{dir}", str(GOLDEN)) for a in c["argv"]]
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(corpus))
    code, text = _batch(f)
    report = json.loads(text)
    assert code == 1
    assert len(report["mismatches"]) == 1
    assert "-exit 1" not in report["mismatches"][0]["diff"]
    assert "+{\"detail\": \"asymmetric" in report["mismatches"][0]["diff"]


def test_record_then_replay(tmp_path):
    f = tmp_path / "c.json"
    f.write_text(json.dumps({"commands": [{"name": "len", "argv": ["--datum", "a2", "weyl", "length", "s1,s2"]}]}))
    assert _batch(f, "--record")[0] == 0
    assert json.loads(f.read_text())["commands"][0]["expected"]["stdout"] == '{"length": 2}\n'
    assert _batch(f)[0] == 0


def test_console_entry_point(capsys):
    assert main(["--datum", "sl2", "weyl", "length", "s1"]) == 0
    assert json.loads(capsys.readouterr().out) == {"length": 1}


def test_module_subprocess():
    proc = subprocess.run([sys.executable, "-m", "kmsoergel.cli", "--datum", "sl2", "ring", "reduced", "[2]"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["structure"] == [2, 0]
