"""Command-line interface: every subcommand reads JSON files and prints one JSON object."""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path
from typing import Sequence

from . import afcheck, arrangements, bkk, charseq, klyachko
from .errors import InputError, PreconditionError, VecBKKError
from .fixtures import FIXTURES, fixture_text, load_source
from .polymat import Matroid
from .polyhedra import fan_from_json, fan_to_json, is_refinement
from .ratlin import to_fraction
from .serialize import inputs_digest, load_json, polytope_from_json, polytope_to_json, pretty_dumps
from .validation import run_validation


VALIDATION_FAILED = 4


def _parse_xi(text: str) -> tuple:
    try:
        return tuple(to_fraction(x.strip()) for x in text.split(","))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"--xi: cannot parse {text!r}: {exc}") from exc


def _default_seed() -> int:
    raw = os.environ.get("VECBKK_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"VECBKK_SEED must be an integer, got {raw!r}") from None


class Job:
    """Parsed arguments plus the loaded input documents, in command-line order."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.seed = args.seed if args.seed is not None else _default_seed()
        self.docs = [load_json(p) for p in getattr(args, "inputs", [])]
        self.polytope_docs = [load_json(p) for p in (getattr(args, "polytope", None) or [])]
        self.fan_doc = load_json(args.fan) if getattr(args, "fan", None) else None

    def digest(self) -> str:
        extra = {"xi": getattr(self.args, "xi", None), "degree": getattr(self.args, "degree", None)}
        return inputs_digest(self.docs, self.polytope_docs, self.fan_doc, extra)

    def source(self, i: int = 0):
        return load_source(self.docs[i])

    def polytopes(self):
        return [polytope_from_json(d) for d in self.polytope_docs]

    def xi(self):
        if self.args.xi is None:
            raise InputError("--xi is required")
        return _parse_xi(self.args.xi)


def _reduced(src) -> tuple[object, dict | None]:
    """Quotient-reduce when Delta_1 is not full-dimensional; report the chart used."""
    seq = charseq.characteristic_polytopes(src)
    if seq.r and not seq.spans_torus:
        q = charseq.quotient_reduction(src)
        return q.reduced, {"anchor": list(q.anchor), "basis": [list(b) for b in q.basis]}
    return src, None


def _fan_for(job: Job, src):
    base = charseq.fan_of(src)
    if job.fan_doc is None:
        return base
    fan = fan_from_json(job.fan_doc)
    if fan.ambient_dim != base.ambient_dim:
        raise InputError(f"fan has dimension {fan.ambient_dim}, expected {base.ambient_dim}")
    if not is_refinement(fan, base):
        raise PreconditionError("the given fan does not refine the fan of the input")
    return fan


def cmd_charseq(job: Job) -> dict:
    seq = charseq.characteristic_polytopes(job.source())
    return {"n": seq.n, "r": seq.r, "polytopes": [polytope_to_json(p) for p in seq.polytopes]}


def cmd_support_eval(job: Job) -> dict:
    src = job.source()
    xi = job.xi()
    out = {"xi": [str(x) for x in xi],
           "values": [str(v) for v in charseq.multi_support(src)(xi)]}
    if isinstance(src, charseq.InvariantSubspace) and src.r:
        cd = charseq.critical_data(src, xi)
        out["critical"] = [{"value": str(c), "dim": d} for c, d in cd.pairs]
    return out


def cmd_fan(job: Job) -> dict:
    src, chart = _reduced(job.source())
    fan = charseq.fan_of(src)
    out = {"fan": fan_to_json(fan), "audit": fan.audit(seed=job.seed)}
    if chart:
        out["quotient"] = chart
    return out


def cmd_count(job: Job) -> dict:
    return bkk.count_solutions(job.source(), validate=job.args.level == "full").to_json()


def cmd_count_mixed(job: Job) -> dict:
    return bkk.count_mixed(job.source(), job.polytopes(), validate=job.args.level == "full").to_json()


def cmd_weights(job: Job) -> dict:
    src, chart = _reduced(job.source())
    out = bkk.minkowski_weights(src, _fan_for(job, src)).to_json()
    if chart:
        out["quotient"] = chart
    return out


def cmd_klyachko(job: Job) -> dict:
    src, chart = _reduced(job.source())
    if not isinstance(src, charseq.InvariantSubspace):
        raise InputError("klyachko needs an invariant subspace")
    fan = _fan_for(job, src)
    report = klyachko.verify_compatibility(src, fan, job.seed)
    out = {"fan": fan_to_json(fan), "compatibility": report.to_json(),
           "filtrations": [klyachko.klyachko_filtration(src, r).to_json() for r in fan.rays]}
    if chart:
        out["quotient"] = chart
    return out


def cmd_chern(job: Job) -> dict:
    src, chart = _reduced(job.source())
    if not isinstance(src, charseq.InvariantSubspace):
        raise InputError("chern needs an invariant subspace")
    fan = _fan_for(job, src)
    degrees = [job.args.degree] if job.args.degree is not None else list(range(1, src.r + 1))
    out = {"classes": [klyachko.equivariant_chern(src, fan, i, job.seed).to_json() for i in degrees]}
    if src.r == src.n:
        out["top_degree"] = str(klyachko.top_chern_degree(src, fan, job.seed))
    if chart:
        out["quotient"] = chart
    return out


def cmd_truncate(job: Job) -> dict:
    src = job.source()
    if not isinstance(src, charseq.InvariantSubspace):
        raise InputError("truncate needs an invariant subspace")
    xi = job.xi()
    report = charseq.check_truncation_theorem(src, xi, job.seed)
    return {"truncations": [t.to_json() for t in charseq.truncate(src, xi, job.seed)],
            "report": report.to_json()}


def cmd_af(job: Job) -> dict:
    if len(job.docs) != 3:
        raise InputError("af takes three invariant subspace files")
    subs = [job.source(i) for i in range(3)]
    if not all(isinstance(s, charseq.InvariantSubspace) for s in subs):
        raise InputError("af takes invariant subspaces; use af-polymatroid for polymatroids")
    return afcheck.af_subspaces(*subs).to_json()


def cmd_af_polymatroid(job: Job) -> dict:
    ps = job.polytopes()
    if len(ps) < 2:
        raise InputError("af-polymatroid needs at least two --polytope bodies")
    return afcheck.af_polytopes(job.source(), ps[0], ps[1], ps[2:]).to_json()


def cmd_aux_check(job: Job) -> dict:
    src = job.source()
    if isinstance(src, charseq.InvariantSubspace):
        return afcheck.aux_reduction_demo(src).to_json()
    if not isinstance(src, Matroid):
        raise InputError("aux-check needs a matroid or an invariant subspace")
    return afcheck.aux_identity(src, job.polytopes()).to_json()


def cmd_hyperplane(job: Job) -> dict:
    doc = job.docs[0]
    arr = arrangements.HyperplaneArrangement.from_json(doc.get("arrangement", doc))
    ps = job.polytopes()
    report = arrangements.hyperplane_count(arr, ps, validate=job.args.level == "full")
    return {"arrangement": arr.to_json(), **report.to_json()}


def cmd_validate(job: Job) -> dict:
    return run_validation(job.docs[0], job.seed, job.args.level, job.args.jobs)


COMMANDS = {
    "charseq": (cmd_charseq, 1, "characteristic polytopes Delta_0..Delta_r"),
    "support-eval": (cmd_support_eval, 1, "multi-valued support function at --xi"),
    "fan": (cmd_fan, 1, "normal fan of the characteristic sequence"),
    "count": (cmd_count, 1, "number of solutions of a generic system (rank = n)"),
    "count-mixed": (cmd_count_mixed, 1, "count with extra scalar equations given by --polytope"),
    "weights": (cmd_weights, 1, "Minkowski weights of the solution class"),
    "klyachko": (cmd_klyachko, 1, "Klyachko filtrations and their compatibility"),
    "chern": (cmd_chern, 1, "equivariant Chern classes as piecewise polynomials"),
    "truncate": (cmd_truncate, 1, "truncated subspaces at --xi and the face identities"),
    "af": (cmd_af, 3, "Alexandrov-Fenchel certificate for three invariant subspaces"),
    "af-polymatroid": (cmd_af_polymatroid, 1, "Alexandrov-Fenchel certificate with --polytope bodies"),
    "aux-check": (cmd_aux_check, 1, "auxiliary-variable identities"),
    "hyperplane": (cmd_hyperplane, 1, "count for a hyperplane arrangement complement"),
    "validate": (cmd_validate, 1, "run the self-check suite"),
}


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the parse-error code; 2 is reserved for preconditions."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(InputError.exit_code, f"{self.prog}: error: {message}\n")


def _join_xi(argv: list[str]) -> list[str]:
    # "--xi -1,2" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for a in it:
        if a == "--xi":
            nxt = next(it, None)
            out.append(a if nxt is None else f"--xi={nxt}")
        else:
            out.append(a)
    return out


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="seed for every random choice (default: $VECBKK_SEED or 0)")
    common.add_argument("--xi", help="direction as comma-separated rationals")
    common.add_argument("--fan", help="fan JSON refining the input's fan")
    common.add_argument("--polytope", action="append", help="polytope JSON (repeatable)")
    common.add_argument("--level", choices=("fast", "full"), default="fast")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for validate")
    common.add_argument("--degree", type=int, help="single Chern class degree")

    parser = _Parser(prog="vecbkk", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, arity, helptext) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("inputs", nargs=arity, metavar="INPUT")
    emit = sub.add_parser("emit-fixture", help="write a shipped fixture")
    emit.add_argument("name", choices=sorted(FIXTURES))
    emit.add_argument("--output", "-o", help="file to write (default: standard output)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_join_xi(list(sys.argv[1:] if argv is None else argv)))
    try:
        if args.command == "emit-fixture":
            text = fixture_text(args.name)
            if args.output:
                Path(args.output).write_text(text, encoding="utf-8")
            else:
                sys.stdout.write(text)
            return 0
        if args.jobs < 1:
            raise InputError("--jobs must be at least 1")
        job = Job(args)
        result = COMMANDS[args.command][0](job)
        payload = {"command": args.command, "seed": job.seed, "inputs_digest": job.digest(), **result}
    except VecBKKError as exc:
        print(f"vecbkk {args.command}: {exc}", file=sys.stderr)
        return exc.exit_code
    sys.stdout.write(pretty_dumps(payload) + "\n")
    if args.command == "validate" and not result["passes"]:
        return VALIDATION_FAILED
    return 0


if __name__ == "__main__":
    sys.exit(main())
