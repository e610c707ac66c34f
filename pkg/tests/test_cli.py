import json
import subprocess
import sys
from pathlib import Path

import pytest

from vecbkk.cli import VALIDATION_FAILED, main
from vecbkk.fixtures import FIXTURES, fixture_json, fixture_text, load_fixture, shipped_text
from vecbkk.polyhedra import convex_hull
from vecbkk.serialize import polytope_to_json


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
        return str(p)
    return write


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() and code == 0 else out), err


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_shipped_fixtures_match_builders(name):
    assert shipped_text(name) == fixture_text(name)
    load_fixture(name)


def test_emit_fixture(tmp_path, capsys):
    out = tmp_path / "u23.json"
    assert main(["emit-fixture", "u23", "-o", str(out)]) == 0
    assert out.read_text() == fixture_text("u23")
    assert main(["emit-fixture", "sq2"]) == 0
    assert capsys.readouterr().out == fixture_text("sq2")


def test_count_sq2(files, capsys):
    code, out, _ = run(capsys, "count", files("sq2.json", fixture_json("sq2")))
    assert code == 0 and out["count"] == "1"
    assert out["command"] == "count" and out["seed"] == 0 and len(out["inputs_digest"]) == 64


def test_support_eval_u23(files, capsys):
    code, out, _ = run(capsys, "support-eval", files("u23.json", fixture_json("u23")), "--xi", "1,0")
    assert code == 0 and out["values"] == ["0", "1"]
    assert out["critical"] == [{"value": "0", "dim": 1}, {"value": "1", "dim": 2}]


def test_seed_from_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("VECBKK_SEED", "17")
    _, out, _ = run(capsys, "charseq", files("sq2.json", fixture_json("sq2")))
    assert out["seed"] == 17
    _, out, _ = run(capsys, "charseq", files("sq2.json", fixture_json("sq2")), "--seed", "3")
    assert out["seed"] == 3


def test_fan_and_weights_reduce_hyp4(files, capsys):
    path = files("hyp4.json", fixture_json("hyp4"))
    code, out, _ = run(capsys, "fan", path)
    assert code == 0 and out["audit"]["complete"] and "quotient" in out
    code, out, _ = run(capsys, "weights", path)
    assert code == 0 and {w["weight"] for w in out["weights"]} == {1}


def test_klyachko_and_chern(files, capsys):
    path = files("sq2.json", fixture_json("sq2"))
    code, out, _ = run(capsys, "klyachko", path)
    assert code == 0 and out["compatibility"]["passes"]
    code, out, _ = run(capsys, "chern", path, "--degree", "2")
    assert code == 0 and out["top_degree"] == "1"


def test_truncate(files, capsys):
    code, out, _ = run(capsys, "truncate", files("sq2.json", fixture_json("sq2")), "--xi", "-1,-1")
    assert code == 0 and out["report"]["all_hold"]


def test_hyperplane(files, capsys):
    seg1 = files("p1.json", polytope_to_json(convex_hull([(0, 0, 0, 0), (1, -1, 0, 0)])))
    seg2 = files("p2.json", polytope_to_json(convex_hull([(0, 0, 0, 0), (0, 0, 1, -1)])))
    code, out, _ = run(capsys, "hyperplane", files("h.json", fixture_json("hyp4")),
                       "--polytope", seg1, "--polytope", seg2)
    assert code == 0 and out["count"] == "1"


def test_af_three_scalars(files, capsys):
    doc = {"n": 2, "r": 1, "characters": [[0, 0], [1, 0], [0, 1]], "subspaces": [[["1"]]] * 3}
    empty = {"n": 2, "r": 0, "characters": [], "subspaces": []}
    p = files("s.json", doc)
    code, out, _ = run(capsys, "af", p, p, files("e.json", empty))
    assert code == 0 and out["verdict"] and out["scaled"] == ["1", "1", "1"]


def test_exit_codes(files, capsys):
    assert main(["count", files("bad.json", "{ not json")]) == 1
    assert "line 1" in capsys.readouterr().err
    assert main(["count", files("hyp4.json", fixture_json("hyp4"))]) == 2
    assert main(["support-eval", files("sq2.json", fixture_json("sq2")), "--xi", "1,x"]) == 1
    assert main(["count", files("odd.json", {"something": 1})]) == 1
    with pytest.raises(SystemExit) as exc:
        main(["count"])
    assert exc.value.code == 1
    capsys.readouterr()


def test_validate_fast(files, capsys):
    code, out, _ = run(capsys, "validate", files("sq2.json", fixture_json("sq2")))
    assert code == 0 and out["passes"]
    assert [r["check"] for r in out["checks"]][:2] == ["polymatroid_axioms", "greedy_vs_hull"]


def test_validate_reports_failure_code(files, capsys, monkeypatch):
    import vecbkk.validation as v
    monkeypatch.setitem(v.CHECKS, "greedy_vs_hull", ("fast", lambda src, seed, level: {"pass": False}))
    assert main(["validate", files("sq2.json", fixture_json("sq2"))]) == VALIDATION_FAILED
    capsys.readouterr()


def test_module_entry_point(tmp_path):
    p = tmp_path / "sq2.json"
    p.write_text(fixture_text("sq2"))
    proc = subprocess.run([sys.executable, "-m", "vecbkk", "count", str(p)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["count"] == "1"


@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_repository_fixture_files_are_current(name):
    path = Path(__file__).resolve().parents[1] / "fixtures" / f"{name}.json"
    assert path.read_text() == fixture_text(name)
