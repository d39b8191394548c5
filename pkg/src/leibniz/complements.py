"""Deformation maps of a matched pair and the classification of complements.

For a matched pair (g, h, <|, |>, <-, ->) a map r: h -> g is an (n, m) matrix
with r[k, x] the coefficient of e_k in r(x).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .algebra import Algebra, is_subalgebra, leibniz_check
from .errors import AxiomError, ShapeError, UnsupportedEnumeration
from .field import Field, tuples_array
from .linalg import Subspace
from .morphisms import invertible_matrices, is_homomorphism, is_isomorphism
from .products import MatchedPair, bicrossed_product, canonical_datum, projection_onto
from .report import Witness, first_mismatch, holds_mask, part
from .search import CHUNK, check_budget


def _arr(F: Field, M) -> np.ndarray:
    return M if isinstance(M, np.ndarray) and M.dtype == F.dtype else F.array(M)


def _map(mp: MatchedPair, r) -> np.ndarray:
    r = _arr(mp.field, r)
    if r.shape != (mp.g.dim, mp.h.dim):
        raise ShapeError(f"r must have shape {(mp.g.dim, mp.h.dim)}, got {r.shape}")
    return r


def deformation_part(mp: MatchedPair, r):
    """Both sides of the deformation identity on basis pairs (x, y); r may be batched."""
    F = mp.field
    E, R = F.einsum, F.reduce
    B, vb = mp.g.bracket, mp.h.bracket
    lhs = E("...ow,xyw->...xyo", r, vb) - E("...kx,...jy,kjo->...xyo", r, r, B)
    inner = E("xkw,...ky->...xyw", mp.la, r) + E("kyw,...kx->...xyw", mp.rh, r)
    rhs = (E("xko,...ky->...xyo", mp.ra, r) + E("kyo,...kx->...xyo", mp.lh, r)
           - E("...ow,...xyw->...xyo", r, inner))
    return part("xy", R(lhs), R(rhs), "deformation")


def deformation_check(mp: MatchedPair, r) -> Witness | None:
    """None when r is a deformation map, else the first failing basis pair."""
    return first_mismatch(deformation_part(mp, _map(mp, r)))


def _deformed_tensor(mp: MatchedPair, r) -> np.ndarray:
    F = mp.field
    return F.reduce(mp.h.bracket + F.einsum("xko,...ky->...xyo", mp.la, r)
                    + F.einsum("kyo,...kx->...xyo", mp.rh, r))


def r_deformation(mp: MatchedPair, r) -> Algebra:
    """h with the bracket {x, y} + x <| r(y) + r(x) -> y."""
    r = _map(mp, r)
    w = deformation_check(mp, r)
    if w is not None:
        raise AxiomError(f"not a deformation map: fails at {w.indices}")
    A = Algebra.unchecked(mp.field, _deformed_tensor(mp, r), mp.h.names)
    if leibniz_check(A) is not None:
        raise AxiomError("r-deformation is not a Leibniz algebra")
    return A


def graph_embedding(mp: MatchedPair, r) -> np.ndarray:
    """Matrix of x |-> (r(x), x) from h into the bicrossed product."""
    F = mp.field
    r = _map(mp, r)
    return np.concatenate([r, F.eye(mp.h.dim)], axis=0)


def graph_complement(mp: MatchedPair, r) -> Subspace:
    """The graph of r inside g x h, checked to be a subalgebra complement of g."""
    F = mp.field
    r = _map(mp, r)
    if deformation_check(mp, r) is not None:
        raise AxiomError("not a deformation map")
    n, m = mp.g.dim, mp.h.dim
    P = bicrossed_product(mp)
    J = graph_embedding(mp, r)
    S = Subspace(F, n + m, J.T)
    G = Subspace.coordinate(F, n + m, range(n))
    if not (S.dim == m and is_subalgebra(P, S) and S.intersection_dim(G) == 0 and (S + G).dim == n + m):
        raise AxiomError("graph of r is not a complement")
    if is_homomorphism(r_deformation(mp, r), P, J) is not None:
        raise AxiomError("graph embedding does not carry the r-deformation")
    return S


def enumerate_deformation_maps(mp: MatchedPair, shard=None, limit: int | None = None) -> list[np.ndarray]:
    """All deformation maps, lexicographic in the row-major entries of r."""
    F = mp.field
    if not F.is_prime:
        raise UnsupportedEnumeration("enumerating deformation maps needs a prime field")
    n, m = mp.g.dim, mp.h.dim
    total = F.p ** (n * m)
    check_budget(total, "deformation maps", limit)
    found = []
    for k, start in enumerate(range(0, total, CHUNK)):
        if shard is not None and k % shard[1] != shard[0]:
            continue
        U = tuples_array(F.p, n * m, start, start + CHUNK).reshape(-1, n, m)
        if F.dtype is object:
            U = U.astype(object)
        mask = holds_mask([("deformation", lambda: [deformation_part(mp, U)])], batch=len(U))
        found.extend(U[mask])
    return found


def equivalence_part(mp: MatchedPair, r, R, sigma):
    """Both sides of the identity making sigma an isomorphism h_r -> h_R; sigma may be batched."""
    F = mp.field
    E, Rd = F.einsum, F.reduce
    vb = mp.h.bracket
    lhs = E("...ow,xyw->...xyo", sigma, vb) - E("...ax,...by,abo->...xyo", sigma, sigma, vb)
    Rs = E("kb,...by->...ky", R, sigma)
    rhs = (E("...ax,ako,...ky->...xyo", sigma, mp.la, Rs) + E("...kx,kbo,...by->...xyo", Rs, mp.rh, sigma)
           - E("...ow,xkw,ky->...xyo", sigma, mp.la, r) - E("...ow,kx,kyw->...xyo", sigma, r, mp.rh))
    return part("xy", Rd(lhs), Rd(rhs), "equivalence")


def deformations_equivalent(mp: MatchedPair, r, R) -> np.ndarray | None:
    """First invertible sigma: h -> h (row-major lexicographic) relating r and R, or None."""
    F = mp.field
    r, R = _map(mp, r), _map(mp, R)
    if np.array_equal(r, R):
        return F.eye(mp.h.dim)
    if not F.is_prime:
        raise UnsupportedEnumeration("searching for sigma needs a prime field")
    for S in invertible_matrices(F, mp.h.dim):
        mask = holds_mask([("equivalence", lambda: [equivalence_part(mp, r, R, S)])], batch=len(S))
        if np.any(mask):
            sigma = S[np.argmax(mask)]
            assert is_isomorphism(r_deformation(mp, r), r_deformation(mp, R), sigma)
            return sigma
    return None


@dataclass
class ComplementClassification:
    maps: list[np.ndarray]
    classes: list[list[int]]
    representatives: list[Algebra] = dc_field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.classes)

    def representative_maps(self) -> list[np.ndarray]:
        return [self.maps[c[0]] for c in self.classes]


def classify_deformation_maps(mp: MatchedPair, maps=None) -> ComplementClassification:
    """Partition deformation maps by ~; each class is led by its lexicographically least map."""
    if maps is None:
        maps = enumerate_deformation_maps(mp)
    maps = sorted((_map(mp, r) for r in maps), key=lambda a: tuple(a.ravel().tolist()))
    classes: list[list[int]] = []
    for i, r in enumerate(maps):
        for c in classes:
            if deformations_equivalent(mp, maps[c[0]], r) is not None:
                c.append(i)
                break
        else:
            classes.append([i])
    reps = [r_deformation(mp, maps[c[0]]) for c in classes]
    return ComplementClassification(maps, classes, reps)


def _as_subspace(F: Field, N: int, basis) -> Subspace:
    if isinstance(basis, Subspace):
        return basis
    return Subspace(F, N, _arr(F, basis).reshape(-1, N))


def canonical_matched_pair(E: Algebra, g_basis, h_basis) -> MatchedPair:
    """Matched pair of a factorization E = g + h with trivial intersection.

    g is written in the RREF basis of its span, h in the given rows of ``h_basis``.
    """
    F, N = E.field, E.dim
    G = _as_subspace(F, N, g_basis)
    Hrows = h_basis.basis if isinstance(h_basis, Subspace) else _arr(F, h_basis).reshape(-1, N)
    H = Subspace(F, N, Hrows)
    if H.dim != len(Hrows):
        raise AxiomError("h_basis is not linearly independent")
    if G.intersection_dim(H) != 0 or G.dim + H.dim != N:
        raise AxiomError("h is not a complement of g")
    if not is_subalgebra(E, G) or not is_subalgebra(E, H):
        raise AxiomError("g and h must both be subalgebras")
    d = canonical_datum(E, G, p=projection_onto(E, G, H), v_basis=Hrows)
    return MatchedPair.from_datum(d)


def factorization_index(E: Algebra, g_basis, h_basis) -> ComplementClassification:
    """Isomorphism classes of complements of g in E, one r-deformation per class."""
    if not E.field.is_prime:
        raise UnsupportedEnumeration("the factorization index is computed over prime fields")
    mp = canonical_matched_pair(E, g_basis, h_basis)
    return classify_deformation_maps(mp)
