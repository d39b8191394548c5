"""Small named algebras and matched pairs used in examples, tests and the CLI."""
from __future__ import annotations

from .algebra import Algebra
from .field import Field
from .products import MatchedPair


def abelian(field: Field, dim: int) -> Algebra:
    return Algebra.abelian(field, dim)


def sl2(field: Field) -> Algebra:
    """Basis (e, f, h): [e,f] = h, [h,e] = 2e, [h,f] = -2f, antisymmetric."""
    table = {}
    for (i, j), out in {(0, 1): {2: 1}, (2, 0): {0: 2}, (2, 1): {1: -2}}.items():
        table[(i, j)] = out
        table[(j, i)] = {k: -v for k, v in out.items()}
    return Algebra.from_table(field, 3, table, names=["e", "f", "h"])


def nilpotent_three(field: Field) -> Algebra:
    """3-dim non-Lie algebra with [e1,e3] = e2 and [e3,e3] = e1."""
    return Algebra.from_table(field, 3, {(0, 2): {1: 1}, (2, 2): {0: 1}})


def two_dim_lie(field: Field) -> Algebra:
    """Non-abelian 2-dim Lie algebra: [e2,e1] = e2 = -[e1,e2]."""
    return Algebra.from_table(field, 2, {(1, 0): {1: 1}, (0, 1): {1: -1}})


def left_leibniz_two(field: Field) -> Algebra:
    """2-dim non-Lie algebra: [F1,F1] = F2, [F2,F1] = F2."""
    return Algebra.from_table(field, 2, {(0, 0): {1: 1}, (1, 0): {1: 1}}, names=["F1", "F2"])


def two_dim_matched_pair(field: Field) -> MatchedPair:
    """Non-abelian 2-dim Lie g acting on abelian 2-dim h.

    Nonzero actions: f1 <| e1 = f1, f2 <| e1 = f2, f1 |> e1 = e2,
    e1 <- f1 = -e2, e1 -> f1 = -f1.
    """
    g = two_dim_lie(field)
    h = Algebra.abelian(field, 2)
    la = field.zeros((2, 2, 2))
    ra = field.zeros((2, 2, 2))
    lh = field.zeros((2, 2, 2))
    rh = field.zeros((2, 2, 2))
    la[0, 0, 0] = field(1)
    la[1, 0, 1] = field(1)
    ra[0, 0, 1] = field(1)
    lh[0, 0, 1] = field(-1)
    rh[0, 0, 0] = field(-1)
    return MatchedPair(g, h, la=la, ra=ra, lh=lh, rh=rh)


NAMED = {
    "sl2": sl2,
    "nilpotent3": nilpotent_three,
    "lie2": two_dim_lie,
    "leibniz2": left_leibniz_two,
}
