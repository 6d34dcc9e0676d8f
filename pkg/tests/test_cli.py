import json

import pytest

from tightforms.cache import ResultCache
from tightforms.cli import main


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("TIGHTFORMS_CACHE_DIR", str(tmp_path / "cache"))
    return tmp_path / "cache"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_represents_exit_codes(capsys):
    assert run(capsys, "represents", "--diag", "2,3,4", "--m", "10")[0] == 1
    code, out, _ = run(capsys, "represents", "--diag", "1,1,1,1", "--m", "7")
    assert code == 0 and "2, 1, 1, 1" in out
    assert run(capsys, "represents", "--gram", "4:7,0,3,3,0,7,3,1,3,3,7,1,3,1,1,7", "--m", "13")[0] == 0
    assert run(capsys, "represents", "--gram", "2:1,2,2,1", "--m", "3")[0] == 2
    assert run(capsys, "represents", "--gram", "3:1,2", "--m", "3")[0] == 2


def test_enumerate_counts(capsys):
    assert run(capsys, "enumerate", "--n", "3", "--cutoff", "2205", "--rank-cap", "7", "--expect-count", "79")[0] == 0
    assert run(capsys, "enumerate", "--n", "2", "--cutoff", "575", "--rank-cap", "6", "--expect-count", "90")[0] == 0
    assert run(capsys, "enumerate", "--n", "4", "--cutoff", "10000", "--rank-cap", "8", "--expect-count", "2")[0] == 0
    assert run(capsys, "enumerate", "--n", "4", "--expect-count", "3")[0] == 1


def test_cutoff_too_small_exit(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "3", "--cutoff", "20")
    assert code == 3 and "(3, 3, 4, 4, 5)" in err


def test_json_records_are_versioned(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "4", "--format", "json")
    recs = [json.loads(line) for line in out.splitlines()]
    assert code == 0 and all(r["schema_version"] == 1 for r in recs)
    assert recs[-1]["record"] == "summary" and recs[-1]["count"] == 2


def test_bounds_and_construct(capsys):
    code, out, _ = run(capsys, "bounds", "--max", "36", "--format", "csv")
    lines = out.splitlines()
    assert code == 0 and len(lines) == 37
    row14 = next(l for l in lines if l.startswith("14,"))
    assert ",7," in row14
    code, out, _ = run(capsys, "construct", "--kind", "thm42", "--n", "9")
    assert code == 0 and len(out.splitlines()) == 7
    assert run(capsys, "construct", "--kind", "K")[0] == 2


def test_cache_transparency_and_verification(capsys, cache_dir):
    argv = ("enumerate", "--n", "2", "--format", "json")
    fresh = run(capsys, *argv, "--no-cache")[1]
    first = run(capsys, *argv)[1]
    cached = run(capsys, *argv)[1]
    assert fresh == first == cached
    assert len(ResultCache(cache_dir)) == 1
    assert run(capsys, *argv, "--verify-cache")[0] == 0
    # corrupt the stored payload: verification must notice
    path = cache_dir / "results.jsonl"
    rec = json.loads(path.read_text())
    rec["result"]["summary"]["count"] = 91
    path.write_text(json.dumps(rec) + "\n")
    assert run(capsys, *argv, "--verify-cache")[0] == 4


def test_stale_versions_are_ignored(cache_dir):
    c = ResultCache(cache_dir)
    c.put("op", None, {"a": 1}, {"x": 1})
    path = cache_dir / "results.jsonl"
    rec = json.loads(path.read_text())
    rec["version"] = "0.0.0"
    path.write_text(json.dumps(rec) + "\n")
    assert ResultCache(cache_dir).get("op", None, {"a": 1}) is None


def test_escalate_command(capsys):
    code, out, _ = run(capsys, "escalate", "--n", "9", "--rank", "4", "--verify", "10000", "--expect-count", "1")
    assert code == 0 and "1 classes" in out
