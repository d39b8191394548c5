"""Axiom evaluation on basis tuples and the resulting pass/fail reports.

An axiom is a callable returning a list of ``Part`` objects. Each part holds
two arrays of equal shape ``(*batch, *free, out)``: the left and right side
evaluated on every tuple of basis elements for the named free variables.
The same callables serve single checks (with witnesses) and batched masks.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .field import Field


class Part(NamedTuple):
    variables: tuple[str, ...]
    lhs: np.ndarray
    rhs: np.ndarray
    label: str = ""


Axiom = tuple[str, Callable[[], list[Part]]]


def part(variables, lhs, rhs, label: str = "") -> Part:
    """Part with both sides broadcast to a common shape."""
    lhs, rhs = np.broadcast_arrays(np.asarray(lhs), np.asarray(rhs))
    return Part(tuple(variables), lhs, rhs, label)


@dataclass(frozen=True)
class Witness:
    """First basis tuple (lexicographic) where an identity fails."""

    indices: tuple[int, ...]
    lhs: tuple
    rhs: tuple
    variables: tuple[str, ...] = ()
    part: str = ""

    def to_dict(self, field: Field) -> dict:
        out = {
            "indices": list(self.indices),
            "variables": list(self.variables),
            "lhs": [field.format(x) for x in self.lhs],
            "rhs": [field.format(x) for x in self.rhs],
        }
        if self.part:
            out["part"] = self.part
        return out


def first_mismatch(part: Part) -> Witness | None:
    diff = np.any(np.asarray(part.lhs != part.rhs), axis=-1)
    if not np.any(diff):
        return None
    idx = tuple(int(i) for i in np.argwhere(diff)[0])
    return Witness(idx, tuple(part.lhs[idx]), tuple(part.rhs[idx]), part.variables, part.label)


@dataclass
class AxiomReport:
    field: Field
    results: dict[str, Witness | None] = dc_field(default_factory=dict)
    notes: list[str] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(w is None for w in self.results.values())

    def __bool__(self):
        return self.passed

    @property
    def failed(self) -> list[str]:
        return [k for k, w in self.results.items() if w is not None]

    def holds(self, axiom_id: str) -> bool:
        return self.results[axiom_id] is None

    def witness(self, axiom_id: str) -> Witness | None:
        return self.results[axiom_id]

    def to_dict(self) -> dict:
        out = {
            "passed": self.passed,
            "axioms": {k: (None if w is None else w.to_dict(self.field)) for k, w in self.results.items()},
        }
        if self.notes:
            out["notes"] = list(self.notes)
        return out

    def __repr__(self):
        status = "pass" if self.passed else "fail " + ",".join(self.failed)
        return f"AxiomReport({status})"


def evaluate(field: Field, axioms: Sequence[Axiom], notes=()) -> AxiomReport:
    results: dict[str, Witness | None] = {}
    for axiom_id, fn in axioms:
        witness = None
        for part in fn():
            witness = first_mismatch(part)
            if witness is not None:
                break
        results[axiom_id] = witness
    return AxiomReport(field, results, list(notes))


def holds_mask(axioms: Sequence[Axiom], batch: int | None = None) -> np.ndarray:
    """Mask over leading batch axes: True where every part of every axiom is an equality.

    Batch axes of a part are those in front of its free-variable and output
    axes, so parts that do not depend on the batched parameters broadcast.
    """
    mask = np.True_
    for _, fn in axioms:
        for p in fn():
            ne = np.asarray(p.lhs != p.rhs)
            k = len(p.variables) + 1
            mask = mask & ~np.any(ne, axis=tuple(range(ne.ndim - k, ne.ndim)))
    if batch is not None:
        mask = np.broadcast_to(mask, (batch,))
    return mask
