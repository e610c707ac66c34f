"""JSON encoding of the package's objects; rationals always travel as strings."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import InputError
from .polyhedra import LatticePolytope, convex_hull
from .ratlin import to_fraction


def polytope_to_json(p: LatticePolytope) -> dict:
    return {"dim": p.ambient_dim, "vertices": [[str(x) for x in v] for v in p.vertices]}


def polytope_from_json(obj: dict) -> LatticePolytope:
    try:
        n = int(obj["dim"])
        pts = [tuple(to_fraction(x) for x in v) for v in obj["vertices"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed polytope JSON: {exc}") from exc
    if not pts:
        raise InputError("polytope JSON has no vertices")
    if any(len(v) != n for v in pts):
        raise InputError(f"polytope vertices must have {n} coordinates")
    return convex_hull(pts)


def _default(obj: Any):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if isinstance(obj, tuple):
        return list(obj)
    raise TypeError(f"cannot encode {type(obj).__name__}")


def canonical_dumps(obj: Any) -> str:
    """Sorted keys and fixed separators so equal data gives equal bytes."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_default)


def pretty_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, default=_default)


def inputs_digest(*objs: Any) -> str:
    h = hashlib.sha256()
    for obj in objs:
        h.update(canonical_dumps(obj).encode())
        h.update(b"\0")
    return h.hexdigest()


def load_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
