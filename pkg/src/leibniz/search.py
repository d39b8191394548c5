"""Linear-first exhaustive solving over F_p.

A polynomial system is split into the part that is affine in the unknowns
(solved exactly) and the remaining equations, which are filtered in numpy
batches over every point of the affine solution space.
"""
from __future__ import annotations

import os
from typing import Callable

import numpy as np

from .errors import BudgetExceeded
from .field import Field, tuples_array
from .linalg import affine_matrix, lex_sort_rows, solve_affine

DEFAULT_BUDGET = 10**7
CHUNK = 1 << 15


def budget() -> int:
    """Search budget, overridable through the LEIBNIZ_BUDGET environment variable."""
    raw = os.environ.get("LEIBNIZ_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


def check_budget(size: int, what: str, limit: int | None = None):
    limit = budget() if limit is None else limit
    if size > limit:
        raise BudgetExceeded(f"{what}: {size} candidates exceed budget {limit}")


def solve_system(field: Field, nvars: int,
                 linear: Callable[[np.ndarray], np.ndarray],
                 holds: Callable[[np.ndarray], np.ndarray],
                 shard: tuple[int, int] | None = None,
                 limit: int | None = None) -> np.ndarray:
    """Every u in F_p^nvars with ``linear(u) = 0`` and ``holds(u)`` true.

    ``linear`` maps a batch (B, nvars) to residuals (B, ...) and must be affine;
    ``holds`` maps a batch to a boolean mask. Rows come back sorted
    lexicographically. ``shard=(i, k)`` keeps only chunk indices = i mod k.
    """
    field._need_prime()
    A, b = affine_matrix(field, linear, nvars)
    sol = solve_affine(field, A, field.reduce(-b))
    if sol is None:
        return field.zeros((0, nvars))
    u0, K = sol
    return filter_affine(field, u0, K, holds, shard=shard, limit=limit)


def filter_affine(field: Field, u0: np.ndarray, K: np.ndarray,
                  holds: Callable[[np.ndarray], np.ndarray],
                  shard: tuple[int, int] | None = None,
                  limit: int | None = None) -> np.ndarray:
    p, k = field.p, len(K)
    total = p**k
    check_budget(total, "affine solution space", limit)
    found = []
    Kd = np.asarray(K, dtype=field.dtype)
    for n_chunk, start in enumerate(range(0, total, CHUNK)):
        if shard is not None and n_chunk % shard[1] != shard[0]:
            continue
        C = tuples_array(p, k, start, start + CHUNK)
        if field.dtype is object:
            C = C.astype(object)
        U = field.reduce(u0[None, :] + C @ Kd) if k else np.repeat(u0[None, :], len(C), axis=0)
        mask = np.broadcast_to(holds(U), (len(U),))
        if np.any(mask):
            found.append(U[mask])
    if not found:
        return field.zeros((0, len(u0)))
    return lex_sort_rows(np.concatenate(found))
