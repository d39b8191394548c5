"""Leibniz algebras given by structure constants, and their derivation spaces.

Conventions: ``bracket[i, j, l]`` is the coefficient of e_l in [e_i, e_j].
A linear map M is a matrix whose column j is M(e_j), so M[a, b] is the
coefficient of e_a in M(e_b).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import AxiomError, NotLeibnizError, ShapeError
from .field import Field
from .linalg import Subspace, affine_matrix, kernel
from .report import AxiomReport, Witness, evaluate, first_mismatch, holds_mask, part
from .search import solve_system


class Algebra:
    """Finite-dimensional algebra over an exact field, checked Leibniz by default."""

    __slots__ = ("field", "bracket", "names")

    def __init__(self, field: Field, bracket, names=None, check: bool = True):
        B = bracket if isinstance(bracket, np.ndarray) and bracket.dtype == field.dtype else field.array(bracket)
        if B.ndim != 3 or not (B.shape[0] == B.shape[1] == B.shape[2]):
            raise ShapeError(f"bracket tensor must be n x n x n, got {B.shape}")
        self.field = field
        self.bracket = B
        n = B.shape[0]
        self.names = tuple(names) if names is not None else tuple(f"e{i + 1}" for i in range(n))
        if len(self.names) != n:
            raise ShapeError("one basis name per dimension")
        if check:
            w = leibniz_check(self)
            if w is not None:
                raise NotLeibnizError(w)

    @classmethod
    def unchecked(cls, field: Field, bracket, names=None) -> "Algebra":
        return cls(field, bracket, names, check=False)

    @classmethod
    def from_table(cls, field: Field, dim: int, table: dict, names=None, check: bool = True) -> "Algebra":
        """Build from ``{(i, j): {l: value}}`` (0-based); missing entries are zero."""
        B = field.zeros((dim, dim, dim))
        for (i, j), vec in table.items():
            for l, val in vec.items():
                B[i, j, l] = field(val)
        return cls(field, B, names, check)

    @classmethod
    def abelian(cls, field: Field, dim: int) -> "Algebra":
        return cls(field, field.zeros((dim, dim, dim)))

    @property
    def dim(self) -> int:
        return self.bracket.shape[0]

    def vector(self, coeffs) -> np.ndarray:
        return self.field.array(coeffs).reshape(self.dim)

    def basis_vector(self, i: int) -> np.ndarray:
        v = self.field.zeros(self.dim)
        v[i] = self.field(1)
        return v

    def br(self, x, y) -> np.ndarray:
        return bracket_eval(self, x, y)

    def __eq__(self, other):
        return (isinstance(other, Algebra) and self.field == other.field
                and self.bracket.shape == other.bracket.shape
                and bool(np.all(self.bracket == other.bracket)))

    def __repr__(self):
        return f"Algebra(dim={self.dim}, field={self.field})"

    def table(self) -> dict:
        """Nonzero structure constants as ``{(i, j): {l: value}}``."""
        out: dict = {}
        for i, j, l in zip(*np.nonzero(self.bracket != 0)):
            out.setdefault((int(i), int(j)), {})[int(l)] = self.field(self.bracket[i, j, l])
        return out


def _check_vec(A: Algebra, x) -> np.ndarray:
    if isinstance(x, np.ndarray) and x.dtype == A.field.dtype:
        v = x
    else:
        v = A.field.array(x)
    if v.shape != (A.dim,):
        raise ShapeError(f"vector of length {A.dim} expected, got shape {v.shape}")
    return v


def bracket_eval(A: Algebra, x, y) -> np.ndarray:
    """[x, y] for coordinate vectors x, y."""
    return A.field.einsum("i,j,ijl->l", _check_vec(A, x), _check_vec(A, y), A.bracket)


def leibniz_part(field: Field, B: np.ndarray):
    """[e_i,[e_j,e_l]] against [[e_i,e_j],e_l] - [[e_i,e_l],e_j]; B may carry batch axes."""
    lhs = field.einsum("...jlk,...ikm->...ijlm", B, B)
    rhs = field.reduce(field.einsum("...ijk,...klm->...ijlm", B, B)
                       - field.einsum("...ilk,...kjm->...ijlm", B, B))
    return part(("i", "j", "l"), lhs, rhs)


def leibniz_check(A: Algebra) -> Witness | None:
    """None when the Leibniz identity holds, else the first failing basis triple."""
    return first_mismatch(leibniz_part(A.field, A.bracket))


def leibniz_mask(field: Field, B: np.ndarray) -> np.ndarray:
    """Batched Leibniz test for a stack of bracket tensors of shape (batch, n, n, n)."""
    return holds_mask([("leibniz", lambda: [leibniz_part(field, B)])])


def is_abelian(A: Algebra) -> bool:
    return A.field.is_zero(A.bracket)


def is_lie(A: Algebra) -> bool:
    B = A.bracket
    diag = B[np.arange(A.dim), np.arange(A.dim)]
    return A.field.is_zero(diag) and A.field.is_zero(A.field.reduce(B + B.transpose(1, 0, 2)))


def derived_subspace(A: Algebra) -> Subspace:
    return Subspace(A.field, A.dim, A.bracket.reshape(-1, A.dim))


def is_perfect(A: Algebra) -> bool:
    return derived_subspace(A).dim == A.dim


def center(A: Algebra) -> Subspace:
    n = A.dim
    # v -> [v, e_i] and v -> [e_i, v]; rows indexed by (i, output), columns by v
    right = A.bracket.transpose(1, 2, 0).reshape(n * n, n)
    left = A.bracket.transpose(0, 2, 1).reshape(n * n, n)
    M = np.concatenate([right, left]) if n else A.field.zeros((0, 0))
    return Subspace(A.field, n, kernel(A.field, M))


def is_subalgebra(A: Algebra, S: Subspace) -> bool:
    return all(S.contains(bracket_eval(A, s, t)) for s in S.basis for t in S.basis)


def is_two_sided_ideal(A: Algebra, S: Subspace) -> bool:
    for s in S.basis:
        for i in range(A.dim):
            e = A.basis_vector(i)
            if not (S.contains(bracket_eval(A, s, e)) and S.contains(bracket_eval(A, e, s))):
                return False
    return True


def subalgebra(A: Algebra, S: Subspace) -> Algebra:
    """The algebra induced on S, in the coordinates of S's canonical basis."""
    if not is_subalgebra(A, S):
        raise AxiomError("subspace is not closed under the bracket")
    k = S.dim
    B = A.field.zeros((k, k, k))
    for a in range(k):
        for b in range(k):
            B[a, b] = S.coordinates(bracket_eval(A, S.basis[a], S.basis[b]))
    return Algebra(A.field, B)


def quotient(A: Algebra, I: Subspace) -> tuple[Algebra, np.ndarray]:
    """A / I on the coset basis of the standard vectors off I's pivots.

    Returns the quotient algebra and the projection matrix (dim A/I x dim A).
    """
    if not is_two_sided_ideal(A, I):
        raise AxiomError("quotient needs a two-sided ideal")
    F = A.field
    reps = I.complement_indices()
    q = len(reps)
    P = F.zeros((q, A.dim))
    for j in range(A.dim):
        P[:, j] = I.reduce(A.basis_vector(j))[reps]
    B = F.zeros((q, q, q))
    for a, ia in enumerate(reps):
        for b, ib in enumerate(reps):
            B[a, b] = F.einsum("ij,j->i", P, A.bracket[ia, ib])
    return Algebra(F, B), P


# derivation-type maps

def _der_part(F: Field, B, M, label=""):
    lhs = F.einsum("ijk,...ak->...ija", B, M)
    rhs = F.reduce(F.einsum("...ki,kja->...ija", M, B) + F.einsum("...kj,ika->...ija", M, B))
    return part(("g", "h"), lhs, rhs, label)


def _ader_part(F: Field, B, M, label=""):
    lhs = F.einsum("ijk,...ak->...ija", B, M)
    rhs = F.reduce(F.einsum("...ki,kja->...ija", M, B) - F.einsum("...kj,kia->...ija", M, B))
    return part(("g", "h"), lhs, rhs, label)


def _solution_matrices(A: Algebra, residual) -> list[np.ndarray]:
    n = A.dim
    M, _ = affine_matrix(A.field, lambda U: residual(U.reshape(-1, n, n)), n * n)
    return [row.reshape(n, n) for row in kernel(A.field, M)]


def derivations(A: Algebra) -> list[np.ndarray]:
    """Canonical basis of Der(A): maps with D[x,y] = [Dx,y] + [x,Dy]."""
    def residual(M):
        p = _der_part(A.field, A.bracket, M)
        return A.field.reduce(p.lhs - p.rhs)
    return _solution_matrices(A, residual)


def anti_derivations(A: Algebra) -> list[np.ndarray]:
    """Canonical basis of ADer(A): maps with D[x,y] = [Dx,y] - [Dy,x]."""
    def residual(M):
        p = _ader_part(A.field, A.bracket, M)
        return A.field.reduce(p.lhs - p.rhs)
    return _solution_matrices(A, residual)


def span_of_maps(A: Algebra, maps) -> Subspace:
    n = A.dim
    return Subspace(A.field, n * n, [np.asarray(m).reshape(n * n) for m in maps])


def is_derivation(A: Algebra, M) -> bool:
    return first_mismatch(_der_part(A.field, A.bracket, A.field.array(M))) is None


def is_anti_derivation(A: Algebra, M) -> bool:
    return first_mismatch(_ader_part(A.field, A.bracket, A.field.array(M))) is None


def left_multiplication(A: Algebra, x) -> np.ndarray:
    """Matrix of y -> [x, y]."""
    return A.field.einsum("i,ijl->lj", _check_vec(A, x), A.bracket)


def right_multiplication(A: Algebra, x) -> np.ndarray:
    """Matrix of y -> [y, x]."""
    return A.field.einsum("j,ijl->li", _check_vec(A, x), A.bracket)


# pointed double derivations

@dataclass(frozen=True, eq=False)
class PointedDoubleDerivation:
    g0: np.ndarray
    D: np.ndarray
    Delta: np.ndarray

    def key(self) -> tuple:
        return tuple(np.concatenate([self.g0.ravel(), self.D.ravel(), self.Delta.ravel()]).tolist())

    def __eq__(self, other):
        return isinstance(other, PointedDoubleDerivation) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


def double_derivation_axioms(A: Algebra, g0, D, Delta):
    """Identities defining a pointed double derivation; params may carry one batch axis."""
    F, B = A.field, A.bracket
    S = F.reduce(D + Delta)

    def dd1():
        zero = F.zeros(1)
        return [
            part((), F.einsum("...ak,...k->...a", D, g0), zero, "D(g0)"),
            part(("g",), F.einsum("gka,...k->...ga", B, g0), zero, "[g,g0]"),
            part(("g", "h"), F.einsum("...kh,gka->...gha", S, B), zero, "[g,D(h)+Delta(h)]"),
            part(("g",), F.einsum("...ak,...kg->...ga", D, S), zero, "D^2(g)+D(Delta(g))"),
        ]

    def dd2():
        lhs = F.einsum("...ak,...kg->...ga", S, D)
        rhs = F.einsum("...k,kga->...ga", g0, B)
        return [part(("g",), lhs, rhs)]

    return [
        ("DD1", dd1),
        ("DD2", dd2),
        ("DD3", lambda: [_der_part(F, B, Delta)]),
        ("DD4", lambda: [_ader_part(F, B, D)]),
    ]


def double_derivation_check(A: Algebra, g0, D, Delta) -> AxiomReport:
    F = A.field
    return evaluate(F, double_derivation_axioms(A, F.array(g0), F.array(D), F.array(Delta)))


def _split_gdd(U: np.ndarray, n: int):
    return U[:, :n], U[:, n:n + n * n].reshape(-1, n, n), U[:, n + n * n:].reshape(-1, n, n)


def double_derivations(A: Algebra, shard=None) -> list[PointedDoubleDerivation]:
    """All pointed double derivations over F_p, in lexicographic order of (g0, D, Delta)."""
    F, n = A.field, A.dim
    F._need_prime()
    nvars = n + 2 * n * n

    def linear(U):
        g0, D, Delta = _split_gdd(U, n)
        axioms = dict(double_derivation_axioms(A, g0, D, Delta))
        parts = axioms["DD1"]()[1:3] + axioms["DD3"]() + axioms["DD4"]()
        return np.concatenate([F.reduce(p.lhs - p.rhs).reshape(len(U), -1) for p in parts], axis=1)

    def holds(U):
        return holds_mask(double_derivation_axioms(A, *_split_gdd(U, n)))

    sols = solve_system(F, nvars, linear, holds, shard=shard)
    return [PointedDoubleDerivation(*(x[0] for x in _split_gdd(u[None, :], n))) for u in sols]


def stabilizes(phi, g_dim: int) -> bool:
    """phi restricted to the first g_dim coordinates is the identity."""
    phi = np.asarray(phi)
    target = np.zeros((phi.shape[0], g_dim), dtype=object)
    target[:g_dim, :g_dim] = np.eye(g_dim, dtype=int)
    return bool(np.all(phi[:, :g_dim] == target))


def costabilizes(phi, g_dim: int, v_dim: int) -> bool:
    """The projection onto the last v_dim coordinates is unchanged by phi."""
    phi = np.asarray(phi)
    target = np.zeros((v_dim, g_dim + v_dim), dtype=object)
    target[:, g_dim:] = np.eye(v_dim, dtype=int)
    return bool(np.all(phi[g_dim:, :] == target))
