import csv
import io
import json
import subprocess
import sys

import pytest

from disclab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_text(capsys):
    code, out, _ = run(capsys, "compute", "--seq", "3n^2+7n", "--n", "4", "--against", "3")
    assert code == 0
    last = out.strip().splitlines()[-1].split()
    assert last == ["4", "7", "9", "mismatch"]


def test_compute_csv_triangular(capsys):
    code, out, _ = run(capsys, "compute", "--seq", "(1/2)n^2+(1/2)n", "--n", "16", "--against", "2",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 16
    assert all(r["match"] == "True" for r in rows)


def test_compute_json_methods_agree(capsys):
    _, a, _ = run(capsys, "compute", "--seq", "3n^2+75n", "--n", "20", "--format", "json")
    _, b, _ = run(capsys, "compute", "--seq", "3n^2+75n", "--n", "20", "--format", "json",
                  "--method", "oracle")
    ea, eb = json.loads(a)["entries"], json.loads(b)["entries"]
    assert ea == eb and ea[18]["d"] == 61 and ea[19]["d"] == 64


@pytest.mark.parametrize("argv, code", [
    (["compute", "--seq", "n^2-n", "--n", "3"], 4),
    (["compute", "--seq", "n^3", "--n", "3"], 3),
    (["compute", "--seq", "2147483647n^2", "--n", "3"], 5),
    (["compute", "--seq", "n^2", "--n", "3000000000"], 5),
    (["prime-search", "--base", "9", "--residue", "8", "--min-value", "1000000", "--max-digits", "2"], 6),
    (["verify", "--line", "PAIR seq=n^2 m=7 i=1 j=2 bound=3"], 7),
    (["witness", "--lemma", "general2", "--p", "2", "--alpha", "2", "--beta", "1"], 8),
    (["witness", "--lemma", "trlower", "--k", "2"], 2),
    (["classify", "--p", "3", "--sufficient"], 2),
])
def test_exit_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_usage_error_exit_code(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["compute"])
    assert exc.value.code == 2


def test_classify_examples(capsys):
    code, out, _ = run(capsys, "classify", "--p", "2", "--alpha", "6", "--beta", "3")
    assert code == 0 and out.startswith("p2-integer: Characterized") and "t=1, r=3" in out
    _, out, _ = run(capsys, "classify", "--p", "3", "--b", "7", "--c", "7", "--sufficient")
    assert out.startswith("p3-sufficient: Characterized") and out.count("[x]") == 5
    _, out, _ = run(capsys, "classify", "--p", "3", "--alpha", "3", "--beta", "75", "--format", "json")
    doc = json.loads(out)
    assert doc["verdict"] == "Violates(3)"
    _, out, _ = run(capsys, "classify", "--p", "5", "--alpha", "5", "--beta", "1")
    assert "Violates" in out and "(1, 1, 1)" in out
    _, out, _ = run(capsys, "classify", "--p", "3", "--half", "--a-odd", "3", "--b-odd", "1")
    assert "Undecided" in out


def test_witness_examples(capsys):
    _, out, _ = run(capsys, "witness", "--lemma", "trlower", "--k", "2", "--m", "7")
    assert "i=2 j=4" in out
    _, out, _ = run(capsys, "witness", "--lemma", "notqp", "--p", "5", "--k", "1", "--b", "1", "--c", "1")
    assert "n=26" in out and "r=109" in out
    _, out, _ = run(capsys, "witness", "--lemma", "general2", "--p", "2", "--alpha", "1", "--beta", "1",
                    "--ell", "2")
    assert "m=4 i=0 j=3" in out


def test_witness_then_verify(capsys, tmp_path):
    lines = []
    for argv in (
        ["--lemma", "p2lower", "--t", "1", "--b", "1", "--k", "3", "--m", "12"],
        ["--lemma", "qtlower", "--b", "1", "--c", "1", "--k", "3", "--m", "35"],
        ["--lemma", "p2half", "--a-odd", "3", "--b-odd", "5"],
        ["--lemma", "qrnotdisc", "--p", "3", "--a-odd", "9", "--b-odd", "1"],
        ["--lemma", "failure", "--seq", "(1/2)n^2+(1/2)n", "--n", "5", "--m", "7"],
    ):
        code, out, _ = run(capsys, "witness", *argv)
        assert code == 0
        lines.append(out.strip())
    path = tmp_path / "w.txt"
    path.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "verify", "--file", str(path))
    assert code == 0 and out.count("ok") == len(lines)


def test_scan_outputs_deterministic(capsys, tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(capsys, "scan", "--p", "2", "--box", "6", "--horizon", "32", "--format", "json",
               "--out", str(a))[0] == 0
    assert run(capsys, "scan", "--p", "2", "--x=-6,6", "--y=-6,6", "--horizon", "32", "--format",
               "json", "--jobs", "2", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert set(json.loads(a.read_text())) == {"config", "results", "findings", "summary"}


def test_scan_cache_env(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "c.tsv"
    monkeypatch.setenv("DISCLAB_CACHE", str(cache))
    run(capsys, "scan", "--p", "5", "--box", "3", "--horizon", "200")
    assert cache.exists() and len(cache.read_text().splitlines()) == 49


def test_conjecture_csv(capsys):
    code, out, _ = run(capsys, "conjecture", "--b-max", "3", "--c-max", "3", "--horizon", "81",
                       "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 49
    assert any(r["reason"] == "3 divides bc" for r in rows)


def test_prime_search(capsys):
    code, out, _ = run(capsys, "prime-search", "--base", "9", "--residue", "8")
    assert code == 0 and out.strip() == "r=683 u=2"


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "disclab.cli", "compute", "--seq", "n^2+n", "--n", "2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "n^2+n" in proc.stdout
