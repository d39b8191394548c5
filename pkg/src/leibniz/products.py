"""Extending data, their axiom system, and the unified product with its special cases.

Tensor conventions (first index = left argument, last index = output):

    la  x <| g      (m, n, m)        ra  x |> g      (m, n, n)
    lh  g <- x      (n, m, n)        rh  g -> x      (n, m, m)
    f   f(x, y)     (m, m, n)        vb  {x, y}      (m, m, m)

The product lives on g x V with the g block in coordinates 0..n-1.
"""
from __future__ import annotations

import numpy as np

from .algebra import (Algebra, is_lie, is_subalgebra, leibniz_check, leibniz_part,
                      subalgebra)
from .errors import AxiomError, ShapeError, UnsupportedEnumeration
from .field import Field
from .linalg import Subspace, inverse, kernel, rank
from .report import AxiomReport, evaluate, holds_mask, part
from .search import solve_system

BLOCKS = ("la", "ra", "lh", "rh", "f", "vb")


def block_shapes(n: int, m: int) -> dict[str, tuple[int, int, int]]:
    return {"la": (m, n, m), "ra": (m, n, n), "lh": (n, m, n),
            "rh": (n, m, m), "f": (m, m, n), "vb": (m, m, m)}


class ExtendingDatum:
    """Six bilinear maps tying an algebra g to a vector space V of dimension v_dim."""

    def __init__(self, g: Algebra, v_dim: int, la=None, ra=None, lh=None, rh=None, f=None, vb=None):
        self.g = g
        self.v_dim = int(v_dim)
        F = g.field
        given = dict(la=la, ra=ra, lh=lh, rh=rh, f=f, vb=vb)
        for name, shape in block_shapes(g.dim, self.v_dim).items():
            t = given[name]
            if t is None:
                t = F.zeros(shape)
            elif not (isinstance(t, np.ndarray) and t.dtype == F.dtype):
                t = F.array(t)
            if t.shape != shape:
                raise ShapeError(f"{name} must have shape {shape}, got {t.shape}")
            setattr(self, name, t)

    @property
    def field(self) -> Field:
        return self.g.field

    @property
    def n(self) -> int:
        return self.g.dim

    @property
    def m(self) -> int:
        return self.v_dim

    def blocks(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in BLOCKS}

    def replace(self, **changes) -> "ExtendingDatum":
        blocks = self.blocks()
        blocks.update(changes)
        return ExtendingDatum(self.g, self.v_dim, **blocks)

    def v_algebra(self, check: bool = True) -> Algebra:
        return Algebra(self.field, self.vb, check=check)

    def is_zero_block(self, name: str) -> bool:
        return self.field.is_zero(getattr(self, name))

    def __eq__(self, other):
        return (isinstance(other, ExtendingDatum) and self.g == other.g and self.v_dim == other.v_dim
                and all(np.array_equal(getattr(self, b), getattr(other, b)) for b in BLOCKS))

    def __repr__(self):
        nonzero = [b for b in BLOCKS if not self.is_zero_block(b)]
        return f"ExtendingDatum(n={self.n}, m={self.m}, nonzero={nonzero})"


def extending_axioms(F: Field, B, la, ra, lh, rh, f, vb):
    """The fourteen identities of an extending structure, batch-capable via leading axes."""
    E = F.einsum
    R = F.reduce

    def L1():
        return [part("xgh", E("...ghk,...xko->...xgho", B, la),
                     R(E("...xgw,...who->...xgho", la, la) - E("...xhw,...wgo->...xgho", la, la)))]

    def L2():
        rhs = (E("...xgk,...kho->...xgho", ra, B) - E("...xhk,...kgo->...xgho", ra, B)
               + E("...xgw,...who->...xgho", la, ra) - E("...xhw,...wgo->...xgho", la, ra))
        return [part("xgh", E("...ghk,...xko->...xgho", B, ra), R(rhs))]

    def L3():
        rhs = E("...hxw,...gwo->...ghxo", rh, rh) + E("...gxw,...who->...ghxo", rh, la)
        return [part("ghx", E("...ghk,...kxo->...ghxo", B, rh), R(rhs))]

    def L4():
        rhs = (E("...hxk,...gko->...ghxo", lh, B) + E("...gxk,...kho->...ghxo", lh, B)
               + E("...hxw,...gwo->...ghxo", rh, lh) + E("...gxw,...who->...ghxo", rh, ra))
        return [part("ghx", E("...ghk,...kxo->...ghxo", B, lh), R(rhs))]

    def L5():
        rhs = (E("...xyk,...kzo->...xyzo", f, lh) - E("...xzk,...kyo->...xyzo", f, lh)
               + E("...xyw,...wzo->...xyzo", vb, f) - E("...xzw,...wyo->...xyzo", vb, f)
               - E("...yzw,...xwo->...xyzo", vb, f))
        return [part("xyz", E("...yzk,...xko->...xyzo", f, ra), R(rhs))]

    def L6():
        rhs = (E("...xyk,...kzo->...xyzo", f, rh) - E("...xzk,...kyo->...xyzo", f, rh)
               + E("...xyw,...wzo->...xyzo", vb, vb) - E("...xzw,...wyo->...xyzo", vb, vb)
               - E("...yzw,...xwo->...xyzo", vb, vb))
        return [part("xyz", E("...yzk,...xko->...xyzo", f, la), R(rhs))]

    def L7():
        rhs = (E("...ygk,...xko->...xygo", ra, ra) + E("...xgk,...kyo->...xygo", ra, lh)
               + E("...ygw,...xwo->...xygo", la, f) + E("...xgw,...wyo->...xygo", la, f)
               - E("...xyk,...kgo->...xygo", f, B))
        return [part("xyg", E("...xyw,...wgo->...xygo", vb, ra), R(rhs))]

    def L8():
        rhs = (E("...ygk,...xko->...xygo", ra, la) + E("...xgk,...kyo->...xygo", ra, rh)
               + E("...ygw,...xwo->...xygo", la, vb) + E("...xgw,...wyo->...xygo", la, vb))
        return [part("xyg", E("...xyw,...wgo->...xygo", vb, la), R(rhs))]

    def L9():
        rhs = (E("...gxk,...kyo->...gxyo", lh, rh) - E("...gyk,...kxo->...gxyo", lh, rh)
               + E("...gxw,...wyo->...gxyo", rh, vb) - E("...gyw,...wxo->...gxyo", rh, vb))
        return [part("gxy", E("...xyw,...gwo->...gxyo", vb, rh), R(rhs))]

    def L10():
        rhs = (E("...gxk,...kyo->...gxyo", lh, lh) - E("...gyk,...kxo->...gxyo", lh, lh)
               + E("...gxw,...wyo->...gxyo", rh, f) - E("...gyw,...wxo->...gxyo", rh, f)
               - E("...xyk,...gko->...gxyo", f, B))
        return [part("gxy", E("...xyw,...gwo->...gxyo", vb, lh), R(rhs))]

    def L11():
        lhs = (E("...hxk,...gko->...ghxo", lh, B) + E("...xhk,...gko->...ghxo", ra, B)
               + E("...hxw,...gwo->...ghxo", rh, lh) + E("...xhw,...gwo->...ghxo", la, lh))
        return [part("ghx", R(lhs), 0)]

    def L12():
        lhs = (E("...ygk,...xko->...xygo", ra, ra) + E("...gyk,...xko->...xygo", lh, ra)
               + E("...ygw,...xwo->...xygo", la, f) + E("...gyw,...xwo->...xygo", rh, f))
        return [part("xyg", R(lhs), 0)]

    def L13():
        lhs = (E("...ygk,...xko->...xygo", ra, la) + E("...gyk,...xko->...xygo", lh, la)
               + E("...ygw,...xwo->...xygo", la, vb) + E("...gyw,...xwo->...xygo", rh, vb))
        return [part("xyg", R(lhs), 0)]

    def L14():
        lhs = E("...hxw,...gwo->...ghxo", rh, rh) + E("...xhw,...gwo->...ghxo", la, rh)
        return [part("ghx", R(lhs), 0)]

    return [(f"L{i}", fn) for i, fn in enumerate(
        (L1, L2, L3, L4, L5, L6, L7, L8, L9, L10, L11, L12, L13, L14), start=1)]


def _datum_axioms(d: ExtendingDatum):
    return extending_axioms(d.field, d.g.bracket, d.la, d.ra, d.lh, d.rh, d.f, d.vb)


def validate_extending_structure(d: ExtendingDatum) -> AxiomReport:
    """Report over L1..L14; passes iff the unified product is a Leibniz algebra."""
    return evaluate(d.field, _datum_axioms(d))


def extending_mask(F: Field, B, la, ra, lh, rh, f, vb) -> np.ndarray:
    """Batched version of the validator for stacks of datum tensors."""
    return holds_mask(extending_axioms(F, B, la, ra, lh, rh, f, vb))


def product_tensor(F: Field, B, la, ra, lh, rh, f, vb) -> np.ndarray:
    """Bracket tensor of the unified product; accepts leading batch axes on the blocks."""
    n, m = B.shape[-1], vb.shape[-1]
    batch = np.broadcast_shapes(B.shape[:-3], la.shape[:-3], ra.shape[:-3], lh.shape[:-3],
                                rh.shape[:-3], f.shape[:-3], vb.shape[:-3])
    P = F.zeros(batch + (n + m,) * 3)
    P[..., :n, :n, :n] = B
    P[..., :n, n:, :n] = lh
    P[..., :n, n:, n:] = rh
    P[..., n:, :n, :n] = ra
    P[..., n:, :n, n:] = la
    P[..., n:, n:, :n] = f
    P[..., n:, n:, n:] = vb
    return P


def unified_product(d: ExtendingDatum) -> Algebra:
    """The algebra g x V with the unified bracket, built without checking it."""
    P = product_tensor(d.field, d.g.bracket, d.la, d.ra, d.lh, d.rh, d.f, d.vb)
    names = list(d.g.names) + [f"x{i + 1}" for i in range(d.m)]
    return Algebra.unchecked(d.field, P, names)


def theorem1_oracle(d: ExtendingDatum) -> bool:
    """Leibniz identity checked directly on the assembled product."""
    return leibniz_check(unified_product(d)) is None


def oracle_mask(F: Field, B, la, ra, lh, rh, f, vb) -> np.ndarray:
    P = product_tensor(F, B, la, ra, lh, rh, f, vb)
    return holds_mask([("leibniz", lambda: [leibniz_part(F, P)])])


def inclusion_matrix(d: ExtendingDatum) -> np.ndarray:
    """Matrix of g -> g x V, g |-> (g, 0)."""
    F = d.field
    M = F.zeros((d.n + d.m, d.n))
    M[:d.n, :d.n] = F.eye(d.n)
    return M


# canonical datum from a subalgebra and a projection

def projection_onto(E: Algebra, g_basis: Subspace, complement: Subspace) -> np.ndarray:
    """Projection of E onto g_basis along complement."""
    F = E.field
    if g_basis.dim + complement.dim != E.dim or (g_basis + complement).dim != E.dim:
        raise AxiomError("subspaces are not complementary")
    Bm = F.zeros((E.dim, E.dim))
    Bm[:, :g_basis.dim] = g_basis.basis.T
    Bm[:, g_basis.dim:] = complement.basis.T
    Binv = inverse(F, Bm)
    keep = F.zeros((E.dim, E.dim))
    keep[:g_basis.dim, :g_basis.dim] = F.eye(g_basis.dim)
    return F.reduce(F.einsum("ij,jk,kl->il", Bm, keep, Binv))


def canonical_datum(E: Algebra, g_basis: Subspace, p=None, v_basis=None) -> ExtendingDatum:
    """Extending datum recovered from E, a subalgebra g and a projection p of E onto g.

    g is expressed in the canonical basis of ``g_basis``; V = ker p in the rows of
    ``v_basis`` (default: canonical kernel basis). With p omitted, the complement
    spanned by the standard vectors off g's pivots is used.
    """
    F = E.field
    N = E.dim
    if not is_subalgebra(E, g_basis):
        raise AxiomError("g_basis does not span a subalgebra")
    if p is None:
        p = projection_onto(E, g_basis, Subspace.coordinate(F, N, g_basis.complement_indices()))
    p = F.array(p) if not (isinstance(p, np.ndarray) and p.dtype == F.dtype) else p
    if p.shape != (N, N) or not np.array_equal(F.einsum("ij,jk->ik", p, p), p):
        raise AxiomError("p is not a projection")
    if not all(np.array_equal(F.einsum("ij,j->i", p, v), v) for v in g_basis.basis):
        raise AxiomError("p does not fix the subalgebra")
    if rank(F, p) != g_basis.dim:
        raise AxiomError("p does not project onto the subalgebra")
    if v_basis is None:
        V = kernel(F, p)
    else:
        V = F.array(v_basis)
        if Subspace(F, N, V) != Subspace(F, N, kernel(F, p)) or rank(F, V) != len(V):
            raise AxiomError("v_basis is not a basis of ker p")
    Vsub = Subspace(F, N, V)
    Vinv = _coordinate_map(F, V)
    G = g_basis.basis
    g = subalgebra(E, g_basis)
    n, m = g.dim, len(V)

    def split(w):
        pg = F.einsum("ij,j->i", p, w)
        return g_basis.coordinates(pg), Vinv(F.reduce(w - pg), Vsub)

    blocks = {name: F.zeros(shape) for name, shape in block_shapes(n, m).items()}
    for x in range(m):
        for a in range(n):
            blocks["ra"][x, a], blocks["la"][x, a] = split(E.br(V[x], G[a]))
            blocks["lh"][a, x], blocks["rh"][a, x] = split(E.br(G[a], V[x]))
        for y in range(m):
            blocks["f"][x, y], blocks["vb"][x, y] = split(E.br(V[x], V[y]))
    return ExtendingDatum(g, m, **blocks)


def _coordinate_map(F: Field, V: np.ndarray):
    """Coordinates with respect to the rows of V (assumed independent)."""
    m = len(V)
    if m == 0:
        return lambda w, sub: F.zeros(0)
    R = Subspace(F, V.shape[1], V)
    # rows of V in the canonical basis of their span
    C = F.array([R.coordinates(v) for v in V])
    Cinv = inverse(F, C)

    def coords(w, sub):
        return F.einsum("i,ij->j", sub.coordinates(w), Cinv)
    return coords


# crossed systems, matched pairs, and other special cases

CROSSED_IDS = {"CS1": "L4", "CS2": "L10", "CS3": "L5", "CS4": "L2",
               "CS5": "L7", "CS6": "L11", "CS7": "L12"}
MATCHED_IDS = {"MP1": "L1", "MP2": "L10", "MP3": "L2", "MP4": "L8", "MP5": "L7", "MP6": "L4",
               "MP7": "L3", "MP8": "L9", "MP9": "L11", "MP10": "L12", "MP11": "L13", "MP12": "L14"}


def _relabel(d: ExtendingDatum, ids: dict[str, str]) -> AxiomReport:
    by_id = dict(_datum_axioms(d))
    return evaluate(d.field, [(new, by_id[old]) for new, old in ids.items()])


class CrossedSystem:
    """(g, h, |>, <-, f) with h = (V, {,}) a Leibniz algebra; ◁ and ⇀ vanish."""

    def __init__(self, g: Algebra, h: Algebra, ra=None, lh=None, f=None):
        if g.field != h.field:
            raise ShapeError("field mismatch")
        self.g, self.h = g, h
        self._datum = ExtendingDatum(g, h.dim, ra=ra, lh=lh, f=f, vb=h.bracket)

    @classmethod
    def from_datum(cls, d: ExtendingDatum) -> "CrossedSystem":
        if not (d.is_zero_block("la") and d.is_zero_block("rh")):
            raise AxiomError("a crossed system needs vanishing <| and -> maps")
        return cls(d.g, d.v_algebra(), d.ra, d.lh, d.f)

    def datum(self) -> ExtendingDatum:
        return self._datum

    @property
    def ra(self):
        return self._datum.ra

    @property
    def lh(self):
        return self._datum.lh

    @property
    def f(self):
        return self._datum.f


def validate_crossed_system(cs: CrossedSystem) -> AxiomReport:
    return _relabel(cs.datum(), CROSSED_IDS)


def crossed_product(cs: CrossedSystem) -> Algebra:
    return unified_product(cs.datum())


class MatchedPair:
    """(g, h, <|, |>, <-, ->) with both g and h Leibniz algebras; no cocycle."""

    def __init__(self, g: Algebra, h: Algebra, la=None, ra=None, lh=None, rh=None):
        if g.field != h.field:
            raise ShapeError("field mismatch")
        self.g, self.h = g, h
        self._datum = ExtendingDatum(g, h.dim, la=la, ra=ra, lh=lh, rh=rh, vb=h.bracket)

    @classmethod
    def from_datum(cls, d: ExtendingDatum) -> "MatchedPair":
        if not d.is_zero_block("f"):
            raise AxiomError("a matched pair has no cocycle term")
        return cls(d.g, d.v_algebra(), d.la, d.ra, d.lh, d.rh)

    def datum(self) -> ExtendingDatum:
        return self._datum

    @property
    def field(self) -> Field:
        return self.g.field

    def __getattr__(self, name):
        if name in ("la", "ra", "lh", "rh"):
            return getattr(self._datum, name)
        raise AttributeError(name)


def validate_matched_pair(mp: MatchedPair) -> AxiomReport:
    return _relabel(mp.datum(), MATCHED_IDS)


def bicrossed_product(mp: MatchedPair) -> Algebra:
    return unified_product(mp.datum())


def check_abelian_2cocycle(V_alg: Algebra, f, g: Algebra) -> bool:
    """f takes values in the center of g and satisfies the abelian cocycle identity."""
    F = g.field
    f = F.array(f) if not (isinstance(f, np.ndarray) and f.dtype == F.dtype) else f
    B, vb = g.bracket, V_alg.bracket
    central = (F.is_zero(F.einsum("xyk,gko->xygo", f, B))
               and F.is_zero(F.einsum("xyk,kgo->xygo", f, B)))
    cocycle = F.reduce(F.einsum("yzw,xwo->xyzo", vb, f) - F.einsum("xyw,wzo->xyzo", vb, f)
                       + F.einsum("xzw,wyo->xyzo", vb, f))
    return central and F.is_zero(cocycle)


def twisted_product(g: Algebra, h: Algebra, f) -> Algebra:
    """g x h with bracket ([g,h] + f(x,y), {x,y}); f must be an abelian 2-cocycle."""
    if not check_abelian_2cocycle(h, f, g):
        raise AxiomError("f is not an abelian 2-cocycle with central values")
    return unified_product(ExtendingDatum(g, h.dim, f=f, vb=h.bracket))


def hemisemidirect(g: Algebra, la) -> Algebra:
    """g x V with bracket ([g,h], x <| h) for a right g-module structure on V."""
    if not is_lie(g):
        raise AxiomError("the hemisemidirect product needs a Lie algebra")
    la = g.field.array(la) if not (isinstance(la, np.ndarray) and la.dtype == g.field.dtype) else la
    d = ExtendingDatum(g, la.shape[0], la=la)
    module = evaluate(d.field, [a for a in _datum_axioms(d) if a[0] == "L1"])
    if not module.passed:
        raise AxiomError("<| is not a right module structure")
    P = unified_product(d)
    return Algebra(g.field, P.bracket, P.names)


# cohomologous crossed systems

def _crossed_equiv_axioms(cs: CrossedSystem, cs2: CrossedSystem, r):
    """Identities relating cs to cs2 through r: h -> g (r may be batched)."""
    F = cs.g.field
    E, R = F.einsum, F.reduce
    B, vb = cs.g.bracket, cs.h.bracket

    def ra():
        rhs = cs2.ra + E("...kx,kgo->...xgo", r, B)
        return [part("xg", cs.ra, R(rhs))]

    def lh():
        rhs = cs2.lh + E("...kx,gko->...gxo", r, B)
        return [part("gx", cs.lh, R(rhs))]

    def cocycle():
        rhs = (cs2.f + E("...kx,...jy,kjo->...xyo", r, r, B) - E("xyw,...ow->...xyo", vb, r)
               + E("...kx,kyo->...xyo", r, cs2.lh) + E("...ky,xko->...xyo", r, cs2.ra))
        return [part("xy", cs.f, R(rhs))]

    return [("action_right", ra), ("action_left", lh), ("cocycle", cocycle)]


def extension_equivalent(cs: CrossedSystem, cs2: CrossedSystem, r=None):
    """A map r: h -> g making cs and cs2 cohomologous, or None.

    With ``r`` given, it is only checked; otherwise F_p is searched and the
    lexicographically first witness (entries of r in row-major order) returned.
    """
    F = cs.g.field
    if cs.g != cs2.g or cs.h != cs2.h:
        return None
    n, m = cs.g.dim, cs.h.dim
    if r is not None:
        r = F.array(r).reshape(n, m)
        return r if evaluate(F, _crossed_equiv_axioms(cs, cs2, r)).passed else None
    if not F.is_prime:
        raise UnsupportedEnumeration("searching for r needs a prime field")

    def linear(U):
        axioms = dict(_crossed_equiv_axioms(cs, cs2, U.reshape(-1, n, m)))
        parts = axioms["action_right"]() + axioms["action_left"]()
        return np.concatenate([F.reduce(p.lhs - p.rhs).reshape(len(U), -1) for p in parts], axis=1)

    sols = solve_system(F, n * m, linear,
                        lambda U: holds_mask(_crossed_equiv_axioms(cs, cs2, U.reshape(-1, n, m))))
    return sols[0].reshape(n, m) if len(sols) else None
