from fractions import Fraction

import pytest

from vecbkk.errors import InputError
from vecbkk.polyhedra import convex_hull
from vecbkk.serialize import (canonical_dumps, inputs_digest, load_json, polytope_from_json,
                              polytope_to_json, pretty_dumps)


def test_polytope_round_trip():
    p = convex_hull([(0, 0), (Fraction(3, 2), 0), (0, 1)])
    doc = polytope_to_json(p)
    assert doc["dim"] == 2 and ["3/2", "0"] in doc["vertices"]
    assert polytope_from_json(doc) == p


@pytest.mark.parametrize("doc", [{}, {"dim": 2, "vertices": []}, {"dim": 2, "vertices": [["1"]]},
                                 {"dim": 1, "vertices": [["1/0"]]}])
def test_bad_polytopes(doc):
    with pytest.raises(InputError):
        polytope_from_json(doc)


def test_dumps_are_order_independent():
    a = {"b": Fraction(1, 3), "a": (1, 2)}
    b = {"a": [1, 2], "b": "1/3"}
    assert canonical_dumps(a) == canonical_dumps(b)
    assert pretty_dumps(a) == pretty_dumps(b)


def test_digest_tracks_content():
    assert inputs_digest([{"x": 1}]) == inputs_digest([{"x": 1}])
    assert inputs_digest([{"x": 1}]) != inputs_digest([{"x": 2}])


def test_load_json_reports_location(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "a": 1,\n  "b": \n}')
    with pytest.raises(InputError, match="line 4"):
        load_json(p)
    with pytest.raises(InputError):
        load_json(tmp_path / "missing.json")
