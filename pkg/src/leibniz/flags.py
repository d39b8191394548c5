"""Codimension-one extensions: flag datums, their products, enumeration and classification.

A flag datum of the first kind is (g0, alpha, lambda, D, Delta); of the second
kind (g0, nu, D, Delta) with nu != 0. Linear forms are covectors, so
lambda(g) = lam @ g; D and Delta are matrices with columns D(e_j).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .algebra import Algebra, _ader_part, _der_part, derived_subspace
from .errors import AxiomError, BudgetExceeded, ShapeError, UnsupportedEnumeration
from .field import Field, tuples_array
from .linalg import kernel, lex_sort_rows
from .products import ExtendingDatum, unified_product
from .report import AxiomReport, evaluate, holds_mask, part
from .search import check_budget, solve_system

DEFAULT_DIM_CAP = 4

TRANSPORT_NOTE = "g0 transport uses q*Delta'(G) for the undefined second-map term"


def _key(*arrays) -> tuple:
    return tuple(np.concatenate([np.asarray(a).reshape(-1) for a in arrays]).tolist())


@dataclass(frozen=True, eq=False)
class FlagDatum1:
    g0: np.ndarray
    alpha: object
    lam: np.ndarray
    D: np.ndarray
    Delta: np.ndarray

    kind = 1

    def vector(self) -> np.ndarray:
        """Layout (g0, alpha, lambda, D, Delta), the order used for sorting."""
        return np.concatenate([self.g0, [self.alpha], self.lam, self.D.ravel(), self.Delta.ravel()])

    def key(self) -> tuple:
        return (1,) + _key(self.vector())

    def __eq__(self, other):
        return isinstance(other, FlagDatum1) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


@dataclass(frozen=True, eq=False)
class FlagDatum2:
    g0: np.ndarray
    nu: np.ndarray
    D: np.ndarray
    Delta: np.ndarray

    kind = 2

    def vector(self) -> np.ndarray:
        """Layout (g0, nu, D, Delta)."""
        return np.concatenate([self.g0, self.nu, self.D.ravel(), self.Delta.ravel()])

    def key(self) -> tuple:
        return (2,) + _key(self.vector())

    def __eq__(self, other):
        return isinstance(other, FlagDatum2) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


FlagDatum = Union[FlagDatum1, FlagDatum2]


def make_flag1(A: Algebra, g0, alpha, lam, D, Delta) -> FlagDatum1:
    F, n = A.field, A.dim
    return FlagDatum1(F.array(g0).reshape(n), F(alpha), F.array(lam).reshape(n),
                      F.array(D).reshape(n, n), F.array(Delta).reshape(n, n))


def make_flag2(A: Algebra, g0, nu, D, Delta) -> FlagDatum2:
    F, n = A.field, A.dim
    return FlagDatum2(F.array(g0).reshape(n), F.array(nu).reshape(n),
                      F.array(D).reshape(n, n), F.array(Delta).reshape(n, n))


def _unpack1(F: Field, n: int, u: np.ndarray) -> FlagDatum1:
    return FlagDatum1(u[:n], u[n], u[n + 1:2 * n + 1], u[2 * n + 1:2 * n + 1 + n * n].reshape(n, n),
                      u[2 * n + 1 + n * n:].reshape(n, n))


def _unpack2(F: Field, n: int, u: np.ndarray) -> FlagDatum2:
    return FlagDatum2(u[:n], u[n:2 * n], u[2 * n:2 * n + n * n].reshape(n, n), u[2 * n + n * n:].reshape(n, n))


# axioms (parameters may carry leading batch axes)

def flag1_axioms(A: Algebra, g0, alpha, lam, D, Delta):
    F, B = A.field, A.bracket
    E, R = F.einsum, F.reduce
    alpha = np.asarray(alpha)
    a1, a2 = alpha[..., None], alpha[..., None, None]
    S = R(D + Delta)
    Dt = np.swapaxes(D, -1, -2)

    def F1():
        return [
            part("gh", E("ghk,...k->...gh", B, lam)[..., None], 0, "lambda([g,h])"),
            part("g", R(E("...a,...ag->...g", lam, D) + a1 * lam)[..., None], 0, "lambda(D(g))+alpha*lambda(g)"),
            part("g", E("...a,...ag->...g", lam, Delta)[..., None], 0, "lambda(Delta(g))"),
        ]

    def F2():
        return [
            part("", E("...ak,...k->...a", D, g0), R(-a1 * g0), "D(g0)"),
            part("", E("...k,...k->...", lam, g0)[..., None], np.asarray(R(-(alpha * alpha)))[..., None], "lambda(g0)"),
            part("g", R(a2 * np.swapaxes(Delta, -1, -2)), R(-E("gka,...k->...ga", B, g0)), "alpha*Delta(g)"),
        ]

    def F3():
        return [part("gh", E("...kh,gka->...gha", S, B), R(-E("...h,...ag->...gha", lam, Delta)))]

    def F4():
        return [part("g", E("...ak,...kg->...ga", D, S), R(-E("...g,...a->...ga", lam, g0)))]

    def F5():
        rhs = a2 * Dt + E("...k,kga->...ga", g0, B) - 2 * E("...g,...a->...ga", lam, g0)
        return [part("g", E("...ak,...kg->...ga", S, D), R(rhs))]

    def F6():
        return [_der_part(F, B, Delta)]

    def F7():
        p = _ader_part(F, B, D)
        rhs = p.rhs + E("...g,...ah->...gha", lam, D) - E("...h,...ag->...gha", lam, D)
        return [part("gh", p.lhs, R(rhs))]

    return [("F1", F1), ("F2", F2), ("F3", F3), ("F4", F4), ("F5", F5), ("F6", F6), ("F7", F7)]


def flag2_axioms(A: Algebra, g0, nu, D, Delta):
    F, B = A.field, A.bracket
    E, R = F.einsum, F.reduce
    S = R(D + Delta)

    def G1():
        return [
            part("gh", E("ghk,...k->...gh", B, nu)[..., None], 0, "nu([g,h])"),
            part("g", E("gka,...k->...ga", B, g0), 0, "[g,g0]"),
            part("", E("...ak,...k->...a", D, g0), 0, "D(g0)"),
            part("", E("...k,...k->...", nu, g0)[..., None], 0, "nu(g0)"),
        ]

    def G2():
        return [
            part("gh", E("...kh,gka->...gha", S, B), 0, "[g,Delta(h)]+[g,D(h)]"),
            part("g", E("...a,...ag->...g", nu, S)[..., None], 0, "nu(D(g))+nu(Delta(g))"),
        ]

    def G3():
        rhs = E("...k,kga->...ga", g0, B) + 2 * E("...g,...a->...ga", nu, g0)
        return [
            part("g", E("...ak,...kg->...ga", D, S), 0, "D^2(g)+D(Delta(g))"),
            part("g", E("...ak,...kg->...ga", S, D), R(rhs), "D^2(g)+Delta(D(g))"),
        ]

    def G4():
        p = _der_part(F, B, Delta)
        rhs = p.rhs + E("...h,...ag->...gha", nu, Delta) + E("...g,...ah->...gha", nu, D)
        return [part("gh", p.lhs, R(rhs))]

    def G5():
        p = _ader_part(F, B, D)
        rhs = p.rhs - E("...g,...ah->...gha", nu, D) + E("...h,...ag->...gha", nu, D)
        return [part("gh", p.lhs, R(rhs))]

    return [("G1", G1), ("G2", G2), ("G3", G3), ("G4", G4), ("G5", G5)]


def flag1_check(A: Algebra, fd: FlagDatum1) -> AxiomReport:
    return evaluate(A.field, flag1_axioms(A, fd.g0, fd.alpha, fd.lam, fd.D, fd.Delta))


def flag2_check(A: Algebra, fd: FlagDatum2) -> AxiomReport:
    if A.field.is_zero(fd.nu):
        raise AxiomError("a flag datum of the second kind needs nu != 0")
    return evaluate(A.field, flag2_axioms(A, fd.g0, fd.nu, fd.D, fd.Delta))


def flag_check(A: Algebra, fd: FlagDatum) -> AxiomReport:
    return flag1_check(A, fd) if fd.kind == 1 else flag2_check(A, fd)


# correspondence with one-dimensional extending data

def flag_to_datum(A: Algebra, fd: FlagDatum) -> ExtendingDatum:
    F, n = A.field, A.dim
    la, rh, vb = F.zeros((1, n, 1)), F.zeros((n, 1, 1)), F.zeros((1, 1, 1))
    if fd.kind == 1:
        la[0, :, 0] = fd.lam
        vb[0, 0, 0] = fd.alpha
    else:
        la[0, :, 0] = F.reduce(-fd.nu)
        rh[:, 0, 0] = fd.nu
    return ExtendingDatum(A, 1, la=la, ra=fd.D.T[None].copy(), lh=fd.Delta.T[:, None, :].copy(),
                          rh=rh, f=fd.g0[None, None, :].copy(), vb=vb)


def datum_to_flag(d: ExtendingDatum) -> FlagDatum:
    """Inverse of flag_to_datum on data that define extending structures."""
    if d.m != 1:
        raise ShapeError("flag datums correspond to one-dimensional V")
    F = d.field
    g0, D, Delta = d.f[0, 0].copy(), d.ra[0].T.copy(), d.lh[:, 0, :].T.copy()
    nu = d.rh[:, 0, 0].copy()
    if F.is_zero(nu):
        return FlagDatum1(g0, F(d.vb[0, 0, 0]), d.la[0, :, 0].copy(), D, Delta)
    if not (np.array_equal(d.la[0, :, 0], F.reduce(-nu)) and F.is_zero(d.vb)):
        raise AxiomError("datum is not of flag shape")
    return FlagDatum2(g0, nu, D, Delta)


def flag_product(A: Algebra, fd: FlagDatum) -> Algebra:
    """The codimension-one algebra on g x k defined by a flag datum."""
    return unified_product(flag_to_datum(A, fd))


# enumeration over F_p

def _forms_vanishing_on_derived(A: Algebra) -> np.ndarray:
    """All covectors killing [g, g], lexicographically ordered."""
    F, n = A.field, A.dim
    D = derived_subspace(A)
    K = kernel(F, D.basis) if D.dim else F.eye(n)
    C = tuples_array(F.p, len(K))
    forms = F.reduce(C @ np.asarray(K, dtype=np.int64)) if len(K) else np.zeros((1, n), dtype=np.int64)
    return lex_sort_rows(forms.astype(F.dtype) if F.dtype is object else forms)


def _split_inner(U: np.ndarray, n: int):
    return U[:, :n], U[:, n:n + n * n].reshape(-1, n, n), U[:, n + n * n:].reshape(-1, n, n)


def _residuals(F: Field, axiom_list, pick: dict[str, list[int]], batch: int) -> np.ndarray:
    by_id = dict(axiom_list)
    cols = []
    for axiom_id, parts in pick.items():
        ps = by_id[axiom_id]()
        for i in parts:
            cols.append(F.reduce(ps[i].lhs - ps[i].rhs).reshape(batch, -1))
    return np.concatenate(cols, axis=1)


_LINEAR1 = {"F1": [1, 2], "F2": [1, 2], "F3": [0], "F6": [0], "F7": [0]}
_LINEAR2 = {"G1": [1, 3], "G2": [0, 1], "G4": [0], "G5": [0]}


def enumerate_flag_datums(A: Algebra, cap: int = DEFAULT_DIM_CAP, shard=None
                          ) -> tuple[list[FlagDatum1], list[FlagDatum2]]:
    """Both kinds of flag datums of A over F_p, each list sorted lexicographically.

    Linear forms are fixed first (they vanish on the derived algebra); for each
    choice the conditions affine in (g0, D, Delta) are solved exactly and the
    remaining quadratic ones filtered over the solution space.
    """
    F, n = A.field, A.dim
    if not F.is_prime:
        raise UnsupportedEnumeration("flag datums are enumerated over prime fields only")
    if n > cap:
        raise BudgetExceeded(f"dimension {n} exceeds the enumeration cap {cap}")
    nvars = n + 2 * n * n
    forms = _forms_vanishing_on_derived(A)
    first: list[FlagDatum1] = []
    second: list[FlagDatum2] = []
    for lam in forms:
        for alpha in F.elements():
            alpha = F(alpha)

            def linear(U, lam=lam, alpha=alpha):
                g0, D, Delta = _split_inner(U, n)
                return _residuals(F, flag1_axioms(A, g0, alpha, lam, D, Delta), _LINEAR1, len(U))

            def holds(U, lam=lam, alpha=alpha):
                g0, D, Delta = _split_inner(U, n)
                return holds_mask(flag1_axioms(A, g0, alpha, lam, D, Delta))

            for u in solve_system(F, nvars, linear, holds, shard=shard):
                g0, D, Delta = (x[0] for x in _split_inner(u[None], n))
                first.append(FlagDatum1(g0, alpha, lam.copy(), D, Delta))
    for nu in forms:
        if F.is_zero(nu):
            continue

        def linear2(U, nu=nu):
            g0, D, Delta = _split_inner(U, n)
            return _residuals(F, flag2_axioms(A, g0, nu, D, Delta), _LINEAR2, len(U))

        def holds2(U, nu=nu):
            g0, D, Delta = _split_inner(U, n)
            return holds_mask(flag2_axioms(A, g0, nu, D, Delta))

        for u in solve_system(F, nvars, linear2, holds2, shard=shard):
            g0, D, Delta = (x[0] for x in _split_inner(u[None], n))
            second.append(FlagDatum2(g0, nu.copy(), D, Delta))
    first.sort(key=lambda fd: fd.key())
    second.sort(key=lambda fd: fd.key())
    return first, second


# equivalence of flag datums

def _all_vectors(F: Field, n: int) -> np.ndarray:
    G = tuples_array(F.p, n)
    return G.astype(object) if F.dtype is object else G


def transport_flag(A: Algebra, fd: FlagDatum, q, G) -> np.ndarray:
    """Vectors (layout of ``fd.vector()``) of the datums obtained from fd through (q, G).

    ``G`` may be a batch of vectors (shape (k, n)); the result then has k rows.
    Read as: the returned datum is implemented from fd by r(x) = G, v(x) = q x.
    """
    F, B = A.field, A.bracket
    E, R = F.einsum, F.reduce
    G = np.asarray(G)
    single = G.ndim == 1
    G = G[None] if single else G
    q = F(q)
    GG = E("...i,...j,ijo->...o", G, G, B)
    DG = E("ak,...k->...a", fd.D, G)
    EG = E("ak,...k->...a", fd.Delta, G)
    left = E("...k,kga->...ag", G, B)     # [G, e_g]
    right = E("...k,gka->...ag", G, B)    # [e_g, G]
    k = len(G)
    if fd.kind == 1:
        lamG = E("...k,k->...", G, fd.lam)
        g0 = R(q * q * fd.g0 + GG + q * DG + q * EG - q * fd.alpha * G - lamG[:, None] * G)
        alpha = R(q * fd.alpha + lamG)
        D = R(q * fd.D + left - E("g,...a->...ag", fd.lam, G))
        Delta = R(q * fd.Delta + right)
        out = np.concatenate([g0, alpha[:, None], np.broadcast_to(fd.lam, (k, len(fd.lam))),
                              D.reshape(k, -1), Delta.reshape(k, -1)], axis=1)
    else:
        g0 = R(q * q * fd.g0 + GG + q * DG + q * EG)
        D = R(q * fd.D + left + E("g,...a->...ag", fd.nu, G))
        Delta = R(q * fd.Delta + right - E("g,...a->...ag", fd.nu, G))
        out = np.concatenate([g0, np.broadcast_to(fd.nu, (k, len(fd.nu))),
                              D.reshape(k, -1), Delta.reshape(k, -1)], axis=1)
    return out[0] if single else out


def _as_datum(F: Field, n: int, kind: int, vec: np.ndarray) -> FlagDatum:
    return _unpack1(F, n, vec) if kind == 1 else _unpack2(F, n, vec)


def flags_equivalent(A: Algebra, fd: FlagDatum, fd2: FlagDatum, mode: str = "equiv"):
    """Witness that fd is obtained from fd2 (q ascending, then G lexicographic), or None.

    mode "equiv" returns (q, G); mode "cohom" fixes q = 1 and returns G.
    """
    F = A.field
    if mode not in ("equiv", "cohom"):
        raise ValueError(f"unknown mode {mode!r}")
    if fd.kind != fd2.kind:
        return None
    if fd.kind == 1 and not np.array_equal(fd.lam, fd2.lam):
        return None
    if fd.kind == 2 and not np.array_equal(fd.nu, fd2.nu):
        return None
    if not F.is_prime:
        raise UnsupportedEnumeration("equivalence search needs a prime field")
    allG = _all_vectors(F, A.dim)
    target = fd.vector()
    for q in ([1] if mode == "cohom" else F.units()):
        hits = np.nonzero(np.all(transport_flag(A, fd2, q, allG) == target, axis=1))[0]
        if len(hits):
            G = allG[hits[0]].copy()
            return G if mode == "cohom" else (q, G)
    return None


@dataclass
class FlagClassification:
    mode: str
    first: list
    second: list
    classes: list[list]          # each class sorted, classes ordered by representative
    notes: tuple = (TRANSPORT_NOTE,)

    @property
    def count(self) -> int:
        return len(self.classes)

    @property
    def representatives(self) -> list:
        return [c[0] for c in self.classes]


def classify_flags(A: Algebra, mode: str = "equiv", cap: int = DEFAULT_DIM_CAP,
                   data: tuple[list, list] | None = None) -> FlagClassification:
    """Partition all flag datums by the chosen relation.

    Each datum is joined to every datum it is transported to by some (q, G);
    since every such transport is an equivalence witness, the connected
    components are exactly the classes.
    """
    F, n = A.field, A.dim
    if mode not in ("equiv", "cohom"):
        raise ValueError(f"unknown mode {mode!r}")
    first, second = enumerate_flag_datums(A, cap) if data is None else data
    check_budget(len(first) + len(second), "flag datums")
    allG = _all_vectors(F, n)
    qs = [1] if mode == "cohom" else F.units()
    classes = []
    for kind, items in ((1, first), (2, second)):
        if not items:
            continue
        index = {np.asarray(fd.vector(), dtype=np.int64).tobytes(): i for i, fd in enumerate(items)}
        rows, cols = [], []
        for i, fd in enumerate(items):
            for q in qs:
                for vec in np.asarray(transport_flag(A, fd, q, allG), dtype=np.int64):
                    j = index.get(vec.tobytes())
                    if j is None:
                        raise AxiomError("transport left the set of flag datums")
                    rows.append(i)
                    cols.append(j)
        graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(len(items), len(items)))
        _, labels = connected_components(graph, directed=True, connection="weak")
        groups: dict[int, list] = {}
        for i, lab in enumerate(labels):
            groups.setdefault(int(lab), []).append(items[i])
        classes.extend(sorted(groups.values(), key=lambda c: c[0].key()))
    return FlagClassification(mode, first, second, classes)


def iterate_flag_extensions(A: Algebra, steps: int, cap: int = DEFAULT_DIM_CAP):
    """Yield (chain of flag datums, algebra) for every flag extension of length ``steps``."""
    if steps == 0:
        yield (), A
        return
    first, second = enumerate_flag_datums(A, cap)
    for fd in first + second:
        E = flag_product(A, fd)
        E = Algebra(E.field, E.bracket, E.names)
        for chain, top in iterate_flag_extensions(E, steps - 1, cap):
            yield (fd,) + chain, top
