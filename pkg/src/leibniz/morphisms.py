"""Homomorphisms, the (r, v) description of maps between unified products, and isomorphism search.

A map r: V -> g is an (n, m) matrix with r[k, x] the coefficient of e_k in r(x);
v: V -> V is (m, m). The induced map on g x V is psi(g, x) = (g + r(x), v(x)).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .algebra import (Algebra, anti_derivations, center, derivations, derived_subspace,
                      is_abelian, is_lie, is_perfect)
from .errors import ShapeError, UnsupportedEnumeration
from .field import Field, tuples_array
from .linalg import inverse, is_invertible
from .products import ExtendingDatum
from .report import AxiomReport, Witness, evaluate, first_mismatch, holds_mask, part
from .search import CHUNK, check_budget, solve_system


def _arr(F: Field, M) -> np.ndarray:
    return M if isinstance(M, np.ndarray) and M.dtype == F.dtype else F.array(M)


# plain homomorphisms

def hom_part(F: Field, A, B, phi):
    """phi([e_i, e_j]) against [phi e_i, phi e_j]; phi may carry leading batch axes."""
    lhs = F.einsum("ijk,...ak->...ija", A, phi)
    rhs = F.einsum("...ki,...lj,kla->...ija", phi, phi, B)
    return part("ij", lhs, rhs)


def is_homomorphism(A: Algebra, B: Algebra, phi) -> Witness | None:
    """None when phi: A -> B preserves brackets on all basis pairs, else the first failing pair."""
    F = A.field
    if F != B.field:
        raise ShapeError("field mismatch")
    phi = _arr(F, phi)
    if phi.shape != (B.dim, A.dim):
        raise ShapeError(f"phi must have shape {(B.dim, A.dim)}, got {phi.shape}")
    return first_mismatch(hom_part(F, A.bracket, B.bracket, phi))


def is_isomorphism(A: Algebra, B: Algebra, phi) -> bool:
    return is_homomorphism(A, B, phi) is None and A.dim == B.dim and is_invertible(A.field, _arr(A.field, phi))


def transport_algebra(A: Algebra, phi) -> Algebra:
    """The algebra on the same space for which the invertible phi is an isomorphism from A."""
    F = A.field
    phi = _arr(F, phi)
    pinv = inverse(F, phi)
    if pinv is None:
        raise ShapeError("phi is not invertible")
    return Algebra.unchecked(F, F.einsum("ijk,ck,ia,jb->abc", A.bracket, phi, pinv, pinv))


# general linear group

def gl_order(n: int, p: int) -> int:
    out = 1
    for i in range(n):
        out *= p**n - p**i
    return out


def invertible_mask(F: Field, M: np.ndarray) -> np.ndarray:
    """Batched invertibility test over F_p for a stack (N, n, n)."""
    F._need_prime()
    if F.dtype is object:
        return np.array([is_invertible(F, m) for m in M], dtype=bool)
    p = F.p
    inv = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=np.int64)
    A = np.array(M, dtype=np.int64)
    N, n, _ = A.shape
    ok = np.ones(N, dtype=bool)
    rows = np.arange(N)
    for c in range(n):
        nz = A[:, c:, c] != 0
        ok &= nz.any(axis=1)
        piv = c + np.argmax(nz, axis=1)
        top = A[rows, c].copy()
        A[rows, c] = A[rows, piv]
        A[rows, piv] = top
        A[:, c] = A[:, c] * inv[A[:, c, c]][:, None] % p
        factor = A[:, :, c].copy()
        factor[:, c] = 0
        A = (A - factor[:, :, None] * A[:, c][:, None, :]) % p
    return ok


def invertible_matrices(F: Field, n: int, shard=None, limit: int | None = None) -> Iterator[np.ndarray]:
    """Batches of GL(n, p) in lexicographic order of the row-major entries."""
    F._need_prime()
    check_budget(gl_order(n, F.p), f"GL({n}, {F.p})", limit)
    total = F.p ** (n * n)
    for k, start in enumerate(range(0, total, CHUNK)):
        if shard is not None and k % shard[1] != shard[0]:
            continue
        M = tuples_array(F.p, n * n, start, start + CHUNK).reshape(-1, n, n)
        if F.dtype is object:
            M = M.astype(object)
        M = M[invertible_mask(F, M)]
        if len(M):
            yield M


# maps between unified products

@dataclass(frozen=True, eq=False)
class MorphismWitness:
    """The pair (r, v) with r: V -> g of shape (n, m) and v: V -> V of shape (m, m)."""

    r: np.ndarray
    v: np.ndarray

    def __eq__(self, other):
        return (isinstance(other, MorphismWitness) and np.array_equal(self.r, other.r)
                and np.array_equal(self.v, other.v))

    def __repr__(self):
        return f"MorphismWitness(r={self.r.tolist()}, v={self.v.tolist()})"


def psi_matrix(F: Field, r, v) -> np.ndarray:
    """Matrix of (g, x) |-> (g + r(x), v(x)) on g x V."""
    r, v = _arr(F, r), _arr(F, v)
    n, m = r.shape
    M = F.zeros((n + m, n + m))
    M[:n, :n] = F.eye(n)
    M[:n, n:] = r
    M[n:, n:] = v
    return M


def ml_axioms(F: Field, d: ExtendingDatum, d2: ExtendingDatum, r, v):
    """ML1..ML6 for psi_(r, v): product of d -> product of d2; r, v may be batched."""
    E, R = F.einsum, F.reduce
    B = d.g.bracket

    def ML1():
        return [part("gx", E("gxw,...ow->...gxo", d.rh, v), E("...wx,gwo->...gxo", v, d2.rh))]

    def ML2():
        return [part("xg", E("xgw,...ow->...xgo", d.la, v), E("...wx,wgo->...xgo", v, d2.la))]

    def ML3():
        lhs = d.ra + E("xgw,...ow->...xgo", d.la, r)
        rhs = E("...kx,kgo->...xgo", r, B) + E("...wx,wgo->...xgo", v, d2.ra)
        return [part("xg", R(lhs), R(rhs))]

    def ML4():
        lhs = d.lh + E("gxw,...ow->...gxo", d.rh, r)
        rhs = E("...kx,gko->...gxo", r, B) + E("...wx,gwo->...gxo", v, d2.lh)
        return [part("gx", R(lhs), R(rhs))]

    def ML5():
        rhs = (E("...kx,...wy,kwo->...xyo", r, v, d2.rh) + E("...wx,...ky,wko->...xyo", v, r, d2.la)
               + E("...wx,...uy,wuo->...xyo", v, v, d2.vb))
        return [part("xy", E("xyw,...ow->...xyo", d.vb, v), R(rhs))]

    def ML6():
        lhs = d.f + E("xyw,...ow->...xyo", d.vb, r)
        rhs = (E("...kx,...jy,kjo->...xyo", r, r, B) + E("...kx,...wy,kwo->...xyo", r, v, d2.lh)
               + E("...wx,...ky,wko->...xyo", v, r, d2.ra) + E("...wx,...uy,wuo->...xyo", v, v, d2.f))
        return [part("xy", R(lhs), R(rhs))]

    return [(f"ML{i}", fn) for i, fn in enumerate((ML1, ML2, ML3, ML4, ML5, ML6), start=1)]


def _check_pair(d: ExtendingDatum, d2: ExtendingDatum):
    if d.g != d2.g or d.m != d2.m:
        raise ShapeError("data must share g and the dimension of V")


def check_ml_conditions(d: ExtendingDatum, d2: ExtendingDatum, w: MorphismWitness) -> AxiomReport:
    """Report over ML1..ML6: passes iff psi_(r, v) is a homomorphism of the two products."""
    _check_pair(d, d2)
    F = d.field
    r, v = _arr(F, w.r), _arr(F, w.v)
    if r.shape != (d.n, d.m) or v.shape != (d.m, d.m):
        raise ShapeError("r must be (n, m) and v must be (m, m)")
    notes = [] if is_invertible(F, v) else ["v is not invertible: psi is not an isomorphism"]
    return evaluate(F, ml_axioms(F, d, d2, r, v), notes)


def transport_datum(d2: ExtendingDatum, r, v) -> ExtendingDatum:
    """The datum implemented from d2 by (r, v); psi_(r, v) is then an isomorphism onto d2's product."""
    F = d2.field
    E, R = F.einsum, F.reduce
    r, v = _arr(F, r), _arr(F, v)
    vi = inverse(F, v)
    if vi is None:
        raise ShapeError("v must be invertible")
    B = d2.g.bracket
    la = E("ux,ugw,ow->xgo", v, d2.la, vi)
    rh = E("guw,ux,ow->gxo", d2.rh, v, vi)
    ra = R(E("kx,kgo->xgo", r, B) + E("ux,ugo->xgo", v, d2.ra) - E("xgw,ow->xgo", la, r))
    lh = R(E("kx,gko->gxo", r, B) + E("ux,guo->gxo", v, d2.lh) - E("gxw,ow->gxo", rh, r))
    inner = R(E("kx,uy,kuw->xyw", r, v, d2.rh) + E("ux,ky,ukw->xyw", v, r, d2.la)
              + E("ux,ty,utw->xyw", v, v, d2.vb))
    vb = E("xyw,ow->xyo", inner, vi)
    f = R(E("kx,jy,kjo->xyo", r, r, B) + E("kx,uy,kuo->xyo", r, v, d2.lh)
          + E("ux,ky,uko->xyo", v, r, d2.ra) + E("ux,ty,uto->xyo", v, v, d2.f)
          - E("xyw,ow->xyo", vb, r))
    return ExtendingDatum(d2.g, d2.m, la=la, ra=ra, lh=lh, rh=rh, f=f, vb=vb)


def datum_equivalent(d: ExtendingDatum, d2: ExtendingDatum, mode: str = "equiv",
                     shard=None) -> MorphismWitness | None:
    """First (r, v) with psi_(r, v) an isomorphism stabilizing g, or None.

    ``mode="cohom"`` fixes v = id and first requires <| and -> to agree.
    Candidates are ordered by v (row-major, lexicographic) and then by r.
    """
    _check_pair(d, d2)
    F = d.field
    if not F.is_prime:
        raise UnsupportedEnumeration("searching for (r, v) needs a prime field")
    if mode not in ("equiv", "cohom"):
        raise ValueError(f"unknown mode {mode!r}")
    m = d.m
    if mode == "cohom":
        if not (np.array_equal(d.la, d2.la) and np.array_equal(d.rh, d2.rh)):
            return None
        batches: Iterator[np.ndarray] = iter([F.eye(m)[None]])
    else:
        batches = invertible_matrices(F, m)
    for V in batches:
        keep = holds_mask(ml_axioms(F, d, d2, None, V)[:2], batch=len(V))
        for v in V[keep]:
            w = _solve_r(F, d, d2, v, shard)
            if w is not None:
                assert check_ml_conditions(d, d2, w).passed
                return w
    return None


def _solve_r(F: Field, d, d2, v, shard) -> MorphismWitness | None:
    n, m = d.n, d.m
    axioms = lambda U: dict(ml_axioms(F, d, d2, U.reshape(-1, n, m), v))

    def linear(U):
        ax = axioms(U)
        parts = ax["ML3"]() + ax["ML4"]() + ax["ML5"]()
        return np.concatenate([np.broadcast_to(F.reduce(p.lhs - p.rhs), (len(U),) + p.lhs.shape[-len(p.variables) - 1:])
                               .reshape(len(U), -1) for p in parts], axis=1)

    def holds(U):
        return holds_mask([("ML6", axioms(U)["ML6"])], batch=len(U))

    sols = solve_system(F, n * m, linear, holds, shard=shard)
    if not len(sols):
        return None
    return MorphismWitness(sols[0].reshape(n, m), np.array(v))


# isomorphism search

def invariants(A: Algebra) -> tuple:
    """Isomorphism invariants used to reject pairs before searching."""
    return (derived_subspace(A).dim, center(A).dim, len(derivations(A)), len(anti_derivations(A)),
            is_abelian(A), is_lie(A), is_perfect(A))


def iso_search(A: Algebra, B: Algebra, candidate=None, prefilter: bool = True,
               limit: int | None = None) -> np.ndarray | None:
    """An isomorphism A -> B, or None if there is none.

    With ``candidate`` only that matrix is checked. Equal tables give the
    identity. Otherwise the search runs
    over F_p in lexicographic order of (phi e_1, phi e_2, ...), and raises
    BudgetExceeded rather than answering when GL(n, p) is over budget.
    """
    F = A.field
    if F != B.field or A.dim != B.dim:
        raise ShapeError("algebras must share field and dimension")
    if candidate is not None:
        phi = _arr(F, candidate)
        return phi if is_isomorphism(A, B, phi) else None
    if not F.is_prime:
        raise UnsupportedEnumeration("isomorphism search needs a prime field")
    n, p = A.dim, F.p
    if np.array_equal(A.bracket, B.bracket):
        return F.eye(n)
    check_budget(gl_order(n, p), f"GL({n}, {p})", limit)
    if prefilter and invariants(A) != invariants(B):
        return None
    if n == 0:
        return F.zeros((0, 0))
    vectors = tuples_array(p, n)
    if F.dtype is object:
        vectors = vectors.astype(object)
    weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)
    # basis pairs whose bracket only involves e_0..e_k, grouped by the first level k that fixes them
    support = [max([i, j] + [int(l) for l in np.nonzero(A.bracket[i, j])[0]]) for i in range(n) for j in range(n)]
    checks = {k: [(i, j) for i in range(n) for j in range(n) if support[i * n + j] == k] for k in range(n)}
    found = _extend(F, A.bracket, B.bracket, vectors, weights, checks, [])
    if found is None:
        return None
    phi = np.stack(found, axis=1)
    assert is_isomorphism(A, B, phi)
    return phi


def _extend(F, A, B, vectors, weights, checks, cols):
    n = len(weights)
    k = len(cols)
    if k == n:
        return cols
    cand = vectors
    if k:
        C = np.stack(cols)
        combos = tuples_array(F.p, k)
        span = (combos.astype(np.int64) @ np.asarray(C, dtype=np.int64)) % F.p
        codes = (np.asarray(cand, dtype=np.int64) @ weights)
        cand = cand[~np.isin(codes, span @ weights)]
    else:
        cand = cand[np.any(cand != 0, axis=1)]
    if checks[k] and len(cand):
        batch = np.repeat(np.stack(cols)[None] if k else np.zeros((1, 0, n), dtype=cand.dtype), len(cand), axis=0)
        P = np.concatenate([batch, cand[:, None, :]], axis=1)  # (N, k+1, n) images as rows
        ok = np.ones(len(cand), dtype=bool)
        for i, j in checks[k]:
            lhs = F.einsum("l,Nla->Na", A[i, j, :k + 1], P)
            rhs = F.einsum("Nk,Nl,kla->Na", P[:, i], P[:, j], B)
            ok &= np.all(lhs == rhs, axis=1)
        cand = cand[ok]
    for c in cand:
        out = _extend(F, A, B, vectors, weights, checks, cols + [c])
        if out is not None:
            return out
    return None
