"""Exact Gaussian elimination, kernels, affine solving and subspaces."""
from __future__ import annotations

import itertools
from typing import Callable, Iterator

import numpy as np

from .errors import ShapeError
from .field import Field, tuples_array


def _as_matrix(field: Field, M) -> np.ndarray:
    A = M if isinstance(M, np.ndarray) and M.dtype == field.dtype else field.array(M)
    if A.ndim != 2:
        raise ShapeError(f"expected a matrix, got shape {A.shape}")
    return A.copy()


def rref(field: Field, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    A = _as_matrix(field, M)
    rows, cols = A.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c] != 0)[0]
        if len(nz) == 0:
            continue
        k = r + nz[0]
        if k != r:
            A[[r, k]] = A[[k, r]]
        A[r] = field.reduce(A[r] * field.inv(A[r, c]))
        others = np.nonzero(A[:, c] != 0)[0]
        others = others[others != r]
        if len(others):
            A[others] = field.reduce(A[others] - np.multiply.outer(A[others, c], A[r]))
        pivots.append(c)
        r += 1
    return A[:r], pivots


def rank(field: Field, M) -> int:
    return len(rref(field, M)[1])


def kernel(field: Field, M) -> np.ndarray:
    """Canonical (RREF) basis of the nullspace, one basis vector per row."""
    A = _as_matrix(field, M)
    cols = A.shape[1]
    R, pivots = rref(field, A)
    free = [c for c in range(cols) if c not in pivots]
    K = field.zeros((len(free), cols))
    for t, f in enumerate(free):
        K[t, f] = field(1)
        for i, pc in enumerate(pivots):
            K[t, pc] = field.reduce(-R[i, f])
    if len(free) == 0:
        return K
    return rref(field, K)[0]


def solve_affine(field: Field, A, b) -> tuple[np.ndarray, np.ndarray] | None:
    """Solutions of ``A x = b`` as (particular solution, kernel basis rows), or None."""
    A = _as_matrix(field, A)
    b = field.array(b) if not isinstance(b, np.ndarray) else b
    rows, cols = A.shape
    aug = field.zeros((rows, cols + 1))
    aug[:, :cols] = A
    aug[:, cols] = b.reshape(rows)
    R, pivots = rref(field, aug)
    if pivots and pivots[-1] == cols:
        return None
    x0 = field.zeros(cols)
    for i, pc in enumerate(pivots):
        x0[pc] = R[i, cols]
    return x0, kernel(field, A)


def inverse(field: Field, M) -> np.ndarray | None:
    A = _as_matrix(field, M)
    n = A.shape[0]
    if A.shape != (n, n):
        raise ShapeError("inverse of a non-square matrix")
    aug = field.zeros((n, 2 * n))
    aug[:, :n] = A
    aug[:, n:] = field.eye(n)
    R, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        return None
    return R[:, n:]


def is_invertible(field: Field, M) -> bool:
    M = _as_matrix(field, M)
    return M.shape[0] == M.shape[1] and rank(field, M) == M.shape[0]


def affine_matrix(field: Field, fn: Callable[[np.ndarray], np.ndarray], nvars: int):
    """Matrix form of an affine map given as a batched residual function.

    ``fn`` takes a batch ``U`` of shape (batch, nvars) and returns an array with
    leading batch axis. Returns (A, b) with ``fn(u) = A u + b`` on flattened output.
    """
    U = field.zeros((nvars + 1, nvars))
    U[1:] = field.eye(nvars)
    R = fn(U).reshape(nvars + 1, -1)
    b = R[0]
    A = field.reduce(R[1:] - b).T
    return A, b


def lex_sort_rows(U: np.ndarray) -> np.ndarray:
    if len(U) == 0:
        return U
    if U.dtype == object:
        order = sorted(range(len(U)), key=lambda i: tuple(U[i]))
    else:
        order = np.lexsort(U.T[::-1])
    return U[order]


class Subspace:
    """Subspace of k^n held as its RREF row basis (equal subspaces compare equal)."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field: Field, ambient: int, vectors=()):
        self.field = field
        self.ambient = ambient
        vecs = [field.array(v).reshape(ambient) if not isinstance(v, np.ndarray) else v.reshape(ambient)
                for v in vectors]
        if vecs:
            self.basis, self.pivots = rref(field, np.array(vecs, dtype=field.dtype))
        else:
            self.basis, self.pivots = field.zeros((0, ambient)), []

    @classmethod
    def whole(cls, field: Field, n: int) -> "Subspace":
        return cls(field, n, field.eye(n))

    @classmethod
    def coordinate(cls, field: Field, n: int, indices) -> "Subspace":
        E = field.eye(n)
        return cls(field, n, [E[i] for i in indices])

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v) -> np.ndarray:
        """Remainder of ``v`` after removing its component along the basis pivots."""
        v = self.field.array(v) if not isinstance(v, np.ndarray) else v.copy()
        for i, pc in enumerate(self.pivots):
            if v[pc] != 0:
                v = self.field.reduce(v - v[pc] * self.basis[i])
        return v

    def contains(self, v) -> bool:
        return self.field.is_zero(self.reduce(v))

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` in the canonical basis; raises if ``v`` is outside."""
        v = self.field.array(v) if not isinstance(v, np.ndarray) else v
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return v[self.pivots]

    def complement_indices(self) -> list[int]:
        """Standard basis positions spanning a complement (the non-pivot columns)."""
        return [c for c in range(self.ambient) if c not in self.pivots]

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.field, self.ambient, list(self.basis) + list(other.basis))

    def intersection_dim(self, other: "Subspace") -> int:
        return self.dim + other.dim - (self + other).dim

    def key(self) -> tuple:
        return tuple(self.field(x) for x in self.basis.ravel())

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.field == other.field
                and self.ambient == other.ambient and self.pivots == other.pivots
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.ambient, self.key()))

    def __repr__(self):
        rows = [[self.field.format(x) for x in r] for r in self.basis]
        return f"Subspace(dim={self.dim}, ambient={self.ambient}, basis={rows})"


def enumerate_subspaces(field: Field, n: int, k: int) -> Iterator[Subspace]:
    """All k-dimensional subspaces of F_p^n, one per RREF shape and free-entry tuple."""
    field._need_prime()
    for pivots in itertools.combinations(range(n), k):
        free = [(i, c) for i, pc in enumerate(pivots) for c in range(pc + 1, n) if c not in pivots]
        for vals in tuples_array(field.p, len(free)):
            B = field.zeros((k, n))
            for i, pc in enumerate(pivots):
                B[i, pc] = 1
            for (i, c), val in zip(free, vals):
                B[i, c] = val
            yield Subspace(field, n, B)
