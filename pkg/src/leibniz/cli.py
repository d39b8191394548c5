"""Command-line interface: every command prints one JSON report on standard output.

Exit codes: 0 ok, 1 mathematical failure, 2 usage or parse error, 3 undecided.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import io
from .algebra import (Algebra, anti_derivations, derivations, double_derivations, leibniz_check)
from .complements import factorization_index
from .errors import (AxiomError, BudgetExceeded, LeibnizError, NotLeibnizError, ParseError,
                     ShapeError, UnsupportedEnumeration)
from .flags import TRANSPORT_NOTE, classify_flags, enumerate_flag_datums, DEFAULT_DIM_CAP
from .linalg import Subspace
from .morphisms import iso_search
from .products import (CrossedSystem, MatchedPair, hemisemidirect, twisted_product, unified_product,
                       validate_crossed_system, validate_extending_structure, validate_matched_pair)
from .report import AxiomReport

EXIT = {"ok": 0, "fail": 1, "undecided": 3}


class Undecided(Exception):
    pass


_texts: list[str] = []  # contents of every file read by the running command


def _report(args, texts, status, result) -> dict:
    return {"command": args.argv, "inputs": io.digest(*texts), "status": status, "result": result}


def _read(path) -> tuple[str, object]:
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    _texts.append(text)
    return text, io.loads(text, str(path))


def _algebra(path, check=False) -> tuple[str, Algebra]:
    text, doc = _read(path)
    return text, io.algebra_from_doc(doc, check=check)


def _named_witness(A: Algebra, w) -> dict:
    out = w.to_dict(A.field)
    out["elements"] = [A.names[i] for i in w.indices]
    return out


def _sharded(fn, args_list, jobs: int):
    if jobs <= 1:
        return [fn(*a) for a in args_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*args_list)))


# commands

def cmd_check(args):
    text, A = _algebra(args.algebra)
    w = leibniz_check(A)
    result = {"leibniz": w is None, "dim": A.dim, "field": io.field_to_doc(A.field)}
    if w is not None:
        result["witness"] = _named_witness(A, w)
    return _report(args, [text], "ok" if w is None else "fail", result)


def _dder_shard(A, shard):
    return [(d.g0, d.D, d.Delta) for d in double_derivations(A, shard=shard)]


def cmd_solve(args):
    text, A = _algebra(args.algebra, check=True)
    F = A.field
    if args.kind in ("der", "ader"):
        basis = derivations(A) if args.kind == "der" else anti_derivations(A)
        result = {"kind": args.kind, "dim": len(basis), "basis": [io.matrix_to_doc(F, M) for M in basis]}
        return _report(args, [text], "ok", result)
    jobs = max(1, args.jobs)
    parts = _sharded(_dder_shard, [(A, (i, jobs) if jobs > 1 else None) for i in range(jobs)], jobs)
    found = sorted((t for p in parts for t in p),
                   key=lambda t: tuple(np.concatenate([t[0], t[1].ravel(), t[2].ravel()]).tolist()))
    result = {"kind": "dder", "count": len(found)}
    if args.list:
        result["items"] = [{"g0": io.vector_to_doc(F, g0), "D": io.matrix_to_doc(F, D),
                            "Delta": io.matrix_to_doc(F, De)} for g0, D, De in found]
    return _report(args, [text], "ok", result)


def _validate_kind(kind: str, d) -> AxiomReport | None:
    if kind == "unified":
        return validate_extending_structure(d)
    if kind == "crossed":
        return validate_crossed_system(CrossedSystem.from_datum(d))
    if kind == "bicrossed":
        return validate_matched_pair(MatchedPair.from_datum(d))
    return None


def _build(kind: str, d) -> Algebra:
    if kind in ("unified", "crossed", "bicrossed"):
        if kind == "crossed":
            CrossedSystem.from_datum(d)
        if kind == "bicrossed":
            MatchedPair.from_datum(d)
        return unified_product(d)
    if kind == "twisted":
        if not all(d.is_zero_block(b) for b in ("la", "ra", "lh", "rh")):
            raise AxiomError("a twisted product datum has only f and vb")
        return twisted_product(d.g, d.v_algebra(), d.f)
    if not all(d.is_zero_block(b) for b in ("ra", "lh", "rh", "f", "vb")):
        raise AxiomError("a hemisemidirect datum has only <|")
    return hemisemidirect(d.g, d.la)


def cmd_product(args):
    text, doc = _read(args.datum)
    d = io.datum_from_doc(doc)
    if args.validate:
        rep = _validate_kind(args.kind, d)
        if rep is not None and not rep.passed:
            return _report(args, [text, args.kind], "fail", {"axioms": rep.to_dict()})
    try:
        P = _build(args.kind, d)
    except (AxiomError, NotLeibnizError) as exc:
        return _report(args, [text, args.kind], "fail", {"error": str(exc)})
    result = {"kind": args.kind, "algebra": io.algebra_to_doc(P), "leibniz": leibniz_check(P) is None}
    return _report(args, [text, args.kind], "ok", result)


def cmd_axioms(args):
    text, doc = _read(args.datum)
    d = io.datum_from_doc(doc)
    rep = _validate_kind(args.system, d)
    return _report(args, [text, args.system], "ok" if rep.passed else "fail", rep.to_dict())


def _flag_shard(A, cap, shard):
    return enumerate_flag_datums(A, cap, shard=shard)


def cmd_flags(args):
    text, A = _algebra(args.algebra, check=True)
    F = A.field
    if not F.is_prime:
        raise UnsupportedEnumeration("flag datums are enumerated over prime fields only")
    if A.dim > args.cap:
        raise Undecided(f"dimension {A.dim} exceeds the cap {args.cap}")
    jobs = max(1, args.jobs)
    parts = _sharded(_flag_shard, [(A, args.cap, (i, jobs) if jobs > 1 else None) for i in range(jobs)], jobs)
    first = sorted((x for p in parts for x in p[0]), key=lambda fd: fd.key())
    second = sorted((x for p in parts for x in p[1]), key=lambda fd: fd.key())
    result = {"first_kind": len(first), "second_kind": len(second)}
    if args.list:
        result["datums"] = [io.flag_to_doc(F, fd) for fd in first + second]
    if args.classify:
        fc = classify_flags(A, args.classify, args.cap, data=(first, second))
        result.update({"mode": args.classify, "classes": fc.count,
                       "class_sizes": [len(c) for c in fc.classes],
                       "representatives": [io.flag_to_doc(F, fd) for fd in fc.representatives],
                       "notes": [TRANSPORT_NOTE]})
    return _report(args, [text], "ok", result)


def _indices(text: str, n: int) -> list[int]:
    try:
        out = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParseError(f"bad index list {text!r}") from None
    if any(not 0 <= i < n for i in out):
        raise ParseError(f"index out of range in {text!r}")
    return out


def cmd_complements(args):
    text, E = _algebra(args.algebra, check=True)
    F, N = E.field, E.dim
    g = Subspace.coordinate(F, N, _indices(args.g, N))
    h_idx = _indices(args.h, N)
    h = F.eye(N)[h_idx] if h_idx else F.zeros((0, N))
    try:
        res = factorization_index(E, g, h)
    except AxiomError as exc:
        return _report(args, [text, args.g, args.h], "fail", {"error": str(exc)})
    result = {"index": res.count, "deformation_maps": len(res.maps),
              "class_sizes": [len(c) for c in res.classes],
              "representatives": [{"map": io.matrix_to_doc(F, r), "algebra": io.algebra_to_doc(A)}
                                  for r, A in zip(res.representative_maps(), res.representatives)]}
    return _report(args, [text, args.g, args.h], "ok", result)


def cmd_iso(args):
    ta, A = _algebra(args.a, check=True)
    tb, B = _algebra(args.b, check=True)
    phi = iso_search(A, B)
    if phi is None:
        return _report(args, [ta, tb], "fail", {"isomorphism": None})
    return _report(args, [ta, tb], "ok", {"isomorphism": io.matrix_to_doc(A.field, phi)})


# entry point

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="leibniz", description=__doc__.splitlines()[0])
    ap.add_argument("--pretty", action="store_true", help="human-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check the Leibniz identity")
    p.add_argument("algebra")
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("solve", help="derivations, anti-derivations or pointed double derivations")
    p.add_argument("algebra")
    p.add_argument("--kind", choices=["der", "ader", "dder"], required=True)
    p.add_argument("--list", action="store_true", help="list every double derivation")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("product", help="build a product algebra from a datum")
    p.add_argument("kind", choices=["unified", "crossed", "bicrossed", "twisted", "hemi"])
    p.add_argument("datum")
    p.add_argument("--validate", action="store_true")
    p.set_defaults(run=cmd_product)

    p = sub.add_parser("axioms", help="validate a datum against an axiom system")
    p.add_argument("datum")
    p.add_argument("--system", choices=["unified", "crossed", "bicrossed"], default="unified")
    p.set_defaults(run=cmd_axioms)

    p = sub.add_parser("flags", help="count and classify codimension-one extensions")
    p.add_argument("algebra")
    p.add_argument("--classify", choices=["equiv", "cohom"])
    p.add_argument("--cap", type=int, default=DEFAULT_DIM_CAP)
    p.add_argument("--list", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_flags)

    p = sub.add_parser("complements", help="factorization index of a subalgebra")
    p.add_argument("algebra")
    p.add_argument("--g", required=True, help="comma-separated basis indices of g")
    p.add_argument("--h", required=True, help="comma-separated basis indices of h")
    p.set_defaults(run=cmd_complements)

    p = sub.add_parser("iso", help="search for an isomorphism")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_iso)
    return ap


def _is_matrix(obj) -> bool:
    return (isinstance(obj, list) and bool(obj)
            and all(isinstance(r, list) and all(isinstance(x, str) for x in r) for r in obj))


def render_pretty(report: dict) -> str:
    lines = [f"status: {report['status']}"]

    def walk(label, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{label}.{k}" if label else k, obj[k])
        elif _is_matrix(obj):
            lines.append(f"{label}:")
            width = max(len(x) for r in obj for x in r)
            lines.extend("  " + " ".join(x.rjust(width) for x in r) for r in obj)
        elif isinstance(obj, list) and obj and all(isinstance(x, (list, dict)) for x in obj):
            for i, x in enumerate(obj):
                walk(f"{label}[{i}]", x)
        else:
            lines.append(f"{label}: {obj}")

    walk("", report.get("result", {}))
    return "\n".join(lines)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.argv = argv
    _texts.clear()
    try:
        report = args.run(args)
    except (BudgetExceeded, Undecided) as exc:
        report = {"command": argv, "inputs": io.digest(*_texts, *argv[1:]), "status": "undecided",
                  "result": {"reason": str(exc)}}
    except NotLeibnizError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, ShapeError, UnsupportedEnumeration, AxiomError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LeibnizError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(render_pretty(report) if args.pretty else io.dumps(report))
    return EXIT[report["status"]]


if __name__ == "__main__":
    sys.exit(main())
