"""JSON documents for fields, algebras, extending data, flag datums and matrices.

Scalars are written in text form ("a" or "a/b" over Q, "r" over F_p).
Three-index tensors are sparse entry lists
``[{"left": i, "right": j, "value": {"l": "c", ...}}, ...]`` with 0-based indices.
"""
from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import Algebra
from .errors import ParseError, ShapeError
from .field import Field
from .flags import FlagDatum, FlagDatum1, FlagDatum2, make_flag1, make_flag2
from .products import BLOCKS, ExtendingDatum, block_shapes


def loads(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def load(path) -> Any:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return loads(text, str(path))


def dumps(doc: Any, pretty: bool = False) -> str:
    """Deterministic JSON text (sorted keys)."""
    return json.dumps(doc, sort_keys=True, indent=2 if pretty else None,
                      separators=None if pretty else (",", ":"))


def digest(*texts: str | bytes) -> str:
    h = hashlib.sha256()
    for t in texts:
        h.update(t.encode() if isinstance(t, str) else t)
        h.update(b"\0")
    return h.hexdigest()


def _require(doc: dict, key: str, what: str):
    if not isinstance(doc, dict) or key not in doc:
        raise ParseError(f"{what}: missing key {key!r}")
    return doc[key]


# fields and scalars

def field_from_doc(doc) -> Field:
    kind = _require(doc, "kind", "field")
    if kind == "rational":
        return Field.rational()
    if kind == "prime":
        p = _require(doc, "p", "field")
        if not isinstance(p, int):
            raise ParseError("field: p must be an integer")
        try:
            return Field.prime(p)
        except ValueError as exc:
            raise ParseError(f"field: {exc}") from None
    raise ParseError(f"field: unknown kind {kind!r}")


def field_to_doc(F: Field) -> dict:
    return {"kind": "rational"} if F.p is None else {"kind": "prime", "p": F.p}


def scalar(F: Field, x, where: str = "scalar"):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise ParseError(f"{where}: expected scalar text, got {x!r}")
    try:
        return F(x)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def vector_from_doc(F: Field, doc, n: int, where: str = "vector") -> np.ndarray:
    if not isinstance(doc, list) or len(doc) != n:
        raise ParseError(f"{where}: expected a list of {n} scalars")
    return F.array([scalar(F, x, where) for x in doc])


def vector_to_doc(F: Field, v) -> list[str]:
    return [F.format(x) for x in np.asarray(v).ravel()]


def matrix_from_doc(F: Field, doc, shape=None, where: str = "matrix") -> np.ndarray:
    """A list of rows, or a document {"matrix": rows}."""
    if isinstance(doc, dict):
        doc = _require(doc, "matrix", where)
    if not isinstance(doc, list) or not all(isinstance(r, list) for r in doc):
        raise ParseError(f"{where}: expected a list of rows")
    widths = {len(r) for r in doc}
    if len(widths) > 1:
        raise ParseError(f"{where}: ragged rows")
    cols = widths.pop() if widths else 0
    M = F.array([[scalar(F, x, where) for x in r] for r in doc]).reshape(len(doc), cols)
    if shape is not None and M.shape != tuple(shape):
        raise ShapeError(f"{where}: expected shape {tuple(shape)}, got {M.shape}")
    return M


def matrix_to_doc(F: Field, M) -> list[list[str]]:
    return [[F.format(x) for x in row] for row in np.asarray(M)]


# sparse three-index tensors

def tensor_from_entries(F: Field, entries, shape, where: str) -> np.ndarray:
    T = F.zeros(shape)
    if not isinstance(entries, list):
        raise ParseError(f"{where}: expected a list of entries")
    for k, e in enumerate(entries):
        at = f"{where}[{k}]"
        i, j, value = (_require(e, key, at) for key in ("left", "right", "value"))
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < shape[0] and 0 <= j < shape[1]):
            raise ParseError(f"{at}: index out of range")
        if not isinstance(value, dict):
            raise ParseError(f"{at}: value must map output indices to scalars")
        for l, c in value.items():
            try:
                l = int(l)
            except ValueError:
                raise ParseError(f"{at}: bad output index {l!r}") from None
            if not 0 <= l < shape[2]:
                raise ParseError(f"{at}: output index {l} out of range")
            T[i, j, l] = F.reduce(T[i, j, l] + scalar(F, c, at))
    return T


def tensor_to_entries(F: Field, T) -> list[dict]:
    out = []
    for i in range(T.shape[0]):
        for j in range(T.shape[1]):
            value = {str(l): F.format(T[i, j, l]) for l in range(T.shape[2]) if T[i, j, l] != 0}
            if value:
                out.append({"left": i, "right": j, "value": value})
    return out


# algebras and data

def algebra_from_doc(doc, check: bool = True) -> Algebra:
    F = field_from_doc(_require(doc, "field", "algebra"))
    n = _require(doc, "dim", "algebra")
    if not isinstance(n, int) or n < 0:
        raise ParseError("algebra: dim must be a non-negative integer")
    names = doc.get("basis")
    if names is not None and (not isinstance(names, list) or len(names) != n):
        raise ParseError(f"algebra: basis must list {n} names")
    B = tensor_from_entries(F, doc.get("bracket", []), (n, n, n), "bracket")
    return Algebra(F, B, names, check=check)


def algebra_to_doc(A: Algebra) -> dict:
    return {"field": field_to_doc(A.field), "dim": A.dim, "basis": list(A.names),
            "bracket": tensor_to_entries(A.field, A.bracket)}


def datum_from_doc(doc, check_g: bool = True) -> ExtendingDatum:
    g = algebra_from_doc(_require(doc, "g", "datum"), check=check_g)
    m = _require(doc, "v_dim", "datum")
    if not isinstance(m, int) or m < 0:
        raise ParseError("datum: v_dim must be a non-negative integer")
    shapes = block_shapes(g.dim, m)
    blocks = {b: tensor_from_entries(g.field, doc.get(b, []), shapes[b], b) for b in BLOCKS}
    return ExtendingDatum(g, m, **blocks)


def datum_to_doc(d: ExtendingDatum) -> dict:
    out: dict = {"g": algebra_to_doc(d.g), "v_dim": d.m}
    for b in BLOCKS:
        out[b] = tensor_to_entries(d.field, getattr(d, b))
    return out


def flag_from_doc(A: Algebra, doc) -> FlagDatum:
    F, n = A.field, A.dim
    kind = _require(doc, "kind", "flag datum")
    g0 = vector_from_doc(F, _require(doc, "g0", "flag datum"), n, "g0")
    D = matrix_from_doc(F, _require(doc, "D", "flag datum"), (n, n), "D")
    Delta = matrix_from_doc(F, _require(doc, "Delta", "flag datum"), (n, n), "Delta")
    if kind == 1:
        alpha = scalar(F, _require(doc, "alpha", "flag datum"), "alpha")
        lam = vector_from_doc(F, _require(doc, "lambda", "flag datum"), n, "lambda")
        return make_flag1(A, g0, alpha, lam, D, Delta)
    if kind == 2:
        nu = vector_from_doc(F, _require(doc, "nu", "flag datum"), n, "nu")
        return make_flag2(A, g0, nu, D, Delta)
    raise ParseError(f"flag datum: unknown kind {kind!r}")


def flag_to_doc(F: Field, fd: FlagDatum) -> dict:
    out = {"kind": fd.kind, "g0": vector_to_doc(F, fd.g0),
           "D": matrix_to_doc(F, fd.D), "Delta": matrix_to_doc(F, fd.Delta)}
    if isinstance(fd, FlagDatum1):
        out["alpha"] = F.format(fd.alpha)
        out["lambda"] = vector_to_doc(F, fd.lam)
    elif isinstance(fd, FlagDatum2):
        out["nu"] = vector_to_doc(F, fd.nu)
    return out
