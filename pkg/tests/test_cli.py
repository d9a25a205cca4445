from __future__ import annotations

import os
import shutil
import subprocess
import sys
from pathlib import Path
from types import SimpleNamespace

import pytest

from ptilde import cli
from ptilde.documents import load_document

DATA = Path(__file__).resolve().parent.parent / "src" / "ptilde" / "data"
EX = DATA / "examples"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate(capsys):
    code, out, _ = run(capsys, "validate", EX / "conics.json")
    assert code == 0
    assert out.splitlines() == ["valid embedding document", "rank 2; 3 cones; complete: true"]
    code, out, _ = run(capsys, "validate", DATA / "mfs" / "item21.json")
    assert (code, out) == (0, "valid mfs-case document\n")


def test_wp_of_skeleton_and_embedding(capsys):
    assert run(capsys, "wp", "--skeleton", EX / "conics_localized.json")[:2] == (0, "0\n")
    assert run(capsys, "wp", "--embedding", EX / "a1a1t1.json")[:2] == (0, "1\n")
    assert run(capsys, "wp", "--embedding", EX / "conics_colorless.json")[:2] == (0, "3\n")


def test_smooth(capsys):
    code, out, _ = run(capsys, "smooth", "--embedding", EX / "conics.json", "--orbit", "closed")
    assert code == 0
    assert out.splitlines() == ["smooth (wp_local = 0 < 1)", "divisors: D1, X1"]
    code, out, _ = run(capsys, "smooth", "--embedding", EX / "conics.json", "--orbit", "open")
    assert out.splitlines() == ["smooth (wp_local = 0 < 1)", "divisors: (none)"]
    code, out, _ = run(capsys, "smooth", "--embedding", EX / "a1a1t1.json", "--orbit", "closed")
    assert code == 0
    assert out.splitlines()[0] == "not smooth (wp_local = 1 >= 1)"


def test_toric(capsys):
    assert run(capsys, "toric", "--embedding", EX / "conics_colorless.json")[:2] == (0, "not toric (wp = 3)\n")
    assert run(capsys, "toric", "--embedding", EX / "a1a1t1_completed.json")[:2] == (0, "not toric (wp = 1)\n")


def test_gorensteinify_writes_trace(capsys, tmp_path):
    out_path = tmp_path / "trace.json"
    code, out, _ = run(capsys, "gorensteinify", "--embedding", EX / "a1a1t1_completed.json", "--out", out_path)
    assert code == 0
    lines = out.splitlines()
    assert [l.split(":")[0] for l in lines[:5]] == ["F", "F2", "F3", "F4", "F5"]
    assert all("wp = 1;" in l for l in lines[:5])
    assert lines[5] == "augmented: false"
    assert sum(l.startswith("certificate ") for l in lines) == 8
    doc = load_document(out_path)
    assert doc.kind == "trace"
    assert [n for n, _ in doc.value.wp] == ["F", "F2", "F3", "F4", "F5"]


def test_verify_mfs_is_independent_of_jobs(capsys):
    code1, out1, _ = run(capsys, "verify-mfs", "--dir", DATA / "mfs", "--jobs", "1")
    code2, out2, _ = run(capsys, "verify-mfs", "--dir", DATA / "mfs", "--jobs", "2")
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.splitlines()[-1] == "summary: 26/26 cases pass; status pass"


def test_verify_mfs_max_rank(capsys):
    code, out, _ = run(capsys, "verify-mfs", "--dir", DATA / "mfs", "--max-rank", "1")
    assert code == 0
    assert out.splitlines()[-1].startswith("summary: ")
    assert "item 5 n=3" not in out


def test_verify_mfs_reports_broken_files(capsys, tmp_path):
    shutil.copy(DATA / "mfs" / "item21.json", tmp_path)
    (tmp_path / "broken.json").write_text("{", encoding="utf-8")
    code, out, _ = run(capsys, "verify-mfs", "--dir", tmp_path)
    assert code == 0
    assert "broken.json" in out
    assert out.splitlines()[-1].endswith("status fail")


def test_verify_mfs_empty_directory(capsys, tmp_path):
    code, out, _ = run(capsys, "verify-mfs", "--dir", tmp_path)
    assert code == 0
    assert out.splitlines()[-1].endswith("status no cases")


@pytest.mark.parametrize("argv", [
    [],
    ["frobnicate"],
    ["wp"],
    ["wp", "--skeleton", "a", "--embedding", "b"],
    ["smooth", "--embedding", "x.json"],
    ["verify-mfs", "--dir", ".", "--jobs", "many"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert cli.main(argv) == 2


@pytest.mark.parametrize("argv", [
    ["validate", "missing.json"],
    ["wp", "--skeleton", EX / "conics.json"],
    ["wp", "--embedding", EX / "star.json"],
    ["toric", "--embedding", EX / "a1a1t1.json"],
    ["smooth", "--embedding", EX / "conics.json", "--orbit", "Z"],
    ["smooth", "--embedding", EX / "a1a1t1_completed.json", "--orbit", "closed"],
    ["gorensteinify", "--embedding", EX / "a1a1t1.json", "--out", "unused.json"],
    ["verify-mfs", "--dir", "no/such/dir"],
])
def test_input_errors_exit_3(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 3
    assert err.startswith("error: ")


def test_invalid_document_exit_3(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text((EX / "conics.json").read_text(encoding="utf-8").replace('"-1", "0"', '"-1", "1/0"'),
                   encoding="utf-8")
    code, _, err = run(capsys, "validate", bad)
    assert code == 3
    assert "line 16, column 20" in err


def test_invariant_breach_exit_4(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(cli, "is_q_gorenstein", lambda E, F: SimpleNamespace(ok=False, certificates=[]))
    code, _, err = run(capsys, "gorensteinify", "--embedding", EX / "a1a1t1_completed.json",
                       "--out", tmp_path / "t.json")
    assert code == 4
    assert "invariant" in err
    assert not (tmp_path / "t.json").exists()


def test_module_entry_point():
    env = dict(os.environ, PYTHONPATH=str(Path(cli.__file__).resolve().parent.parent))
    proc = subprocess.run([sys.executable, "-m", "ptilde", "wp", "--embedding", str(EX / "a1a1t1.json")],
                          capture_output=True, text=True, env=env, check=False)
    assert proc.returncode == 0
    assert proc.stdout == "1\n"
