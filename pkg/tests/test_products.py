import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_array
from families import algebra, nilpotent_extension
from leibniz.algebra import (double_derivations, is_abelian, is_lie, is_subalgebra,
                             is_two_sided_ideal, leibniz_check, quotient)
from leibniz.catalog import abelian, nilpotent_three, sl2, two_dim_lie, two_dim_matched_pair
from leibniz.errors import AxiomError, ShapeError, UnsupportedEnumeration
from leibniz.field import Field
from leibniz.flags import flag_to_datum
from leibniz.linalg import Subspace, enumerate_subspaces
from leibniz.morphisms import is_homomorphism, is_isomorphism, iso_search, transport_algebra
from leibniz.products import (BLOCKS, CrossedSystem, ExtendingDatum, MatchedPair,
                              bicrossed_product, block_shapes, canonical_datum,
                              check_abelian_2cocycle, crossed_product, extending_mask,
                              extension_equivalent, hemisemidirect, inclusion_matrix, oracle_mask,
                              projection_onto, theorem1_oracle, twisted_product, unified_product,
                              validate_crossed_system, validate_extending_structure,
                              validate_matched_pair)


def sl2_natural_right_action(F):
    """x <| g = -g.x for the defining representation, basis (e, f, h)."""
    mats = [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[1, 0], [0, -1]]]
    la = F.zeros((2, 3, 2))
    for g, M in enumerate(mats):
        for x in range(2):
            for y in range(2):
                la[x, g, y] = F(-M[y][x])
    return la


def test_trivial_datum_gives_direct_sum(Q):
    g = nilpotent_three(Q)
    d = ExtendingDatum(g, 2)
    rep = validate_extending_structure(d)
    assert rep.passed and len(rep.results) == 14
    assert theorem1_oracle(d)
    P = unified_product(d)
    assert np.array_equal(P.bracket[:3, :3, :3], g.bracket)
    assert Q.is_zero(P.bracket[3:]) and Q.is_zero(P.bracket[:, 3:])


def test_block_shape_mismatch_rejected(Q):
    with pytest.raises(ShapeError):
        ExtendingDatum(two_dim_lie(Q), 1, la=Q.zeros((1, 1, 1)))


def test_hemisemidirect_datum_passes(Q):
    g = sl2(Q)
    d = ExtendingDatum(g, 2, la=sl2_natural_right_action(Q))
    assert validate_extending_structure(d).passed
    assert theorem1_oracle(d)


def test_flag_family_datum_passes(Q):
    A = nilpotent_three(Q)
    table, fd = nilpotent_extension(Q, 1, 0, 0, 0, 0)
    d = flag_to_datum(A, fd)
    assert validate_extending_structure(d).passed
    assert np.array_equal(unified_product(d).bracket, algebra(Q, table).bracket)


def test_only_last_axiom_violated(F2):
    """x2 <| e = x2 and e -> x2 = x1 on a 1-dim abelian g breaks L14 alone."""
    g = abelian(F2, 1)
    la = F2.zeros((2, 1, 2))
    la[1, 0, 1] = 1
    rh = F2.zeros((1, 2, 2))
    rh[0, 1, 0] = 1
    d = ExtendingDatum(g, 2, la=la, rh=rh)
    rep = validate_extending_structure(d)
    assert rep.failed == ["L14"]
    assert not theorem1_oracle(d)


def _random_datum(F, rng, g, m, density):
    shapes = block_shapes(g.dim, m)
    return ExtendingDatum(g, m, **{b: random_array(F, rng, shapes[b], density) for b in BLOCKS})


@given(st.integers(0, 10**6), st.sampled_from([2, 3]), st.integers(1, 2),
       st.sampled_from([0.1, 0.3, 0.6]))
def test_validator_agrees_with_direct_leibniz_check(seed, p, m, density):
    F = Field.prime(p)
    rng = np.random.default_rng(seed)
    g = [abelian(F, 1), two_dim_lie(F), nilpotent_three(F)][seed % 3]
    d = _random_datum(F, rng, g, m, density)
    assert validate_extending_structure(d).passed == theorem1_oracle(d)


def _valid_datum(F, rng):
    """A validated datum: a known product moved by a basis change, then split again."""
    base = [unified_product(two_dim_matched_pair(F).datum()), bicrossed_product(two_dim_matched_pair(F)),
            algebra(F, nilpotent_extension(F, 1, 1, 1, 0, 1)[0])][int(rng.integers(0, 3))]
    while True:
        phi = random_array(F, rng, (4, 4))
        try:
            E = transport_algebra(base, phi)
            break
        except Exception:
            continue
    subs = [S for k in (1, 2, 3) for S in enumerate_subspaces(F, 4, k) if is_subalgebra(E, S)]
    S = subs[int(rng.integers(0, len(subs)))]
    return canonical_datum(E, S)


@given(st.integers(0, 10**6))
def test_perturbed_valid_datums_agree(seed):
    F = Field.prime(3)
    rng = np.random.default_rng(seed)
    d = _valid_datum(F, rng)
    assert validate_extending_structure(d).passed and theorem1_oracle(d)
    name = BLOCKS[seed % 6]
    block = getattr(d, name)
    if block.size == 0:
        return
    bumped = block.copy()
    idx = tuple(int(rng.integers(0, s)) for s in block.shape)
    bumped[idx] = F(bumped[idx] + 1 + seed % 2)
    d2 = d.replace(**{name: bumped})
    assert validate_extending_structure(d2).passed == theorem1_oracle(d2)


def test_batched_masks_match_on_all_small_datums(F2):
    from leibniz.field import tuples_array
    g = abelian(F2, 1)
    shapes = block_shapes(1, 1)
    U = tuples_array(2, 6)
    blocks = {b: U[:, i].reshape((-1,) + shapes[b]) for i, b in enumerate(BLOCKS)}
    fast = extending_mask(F2, g.bracket, **blocks)
    direct = oracle_mask(F2, g.bracket, **blocks)
    assert np.array_equal(fast, direct)
    single = [validate_extending_structure(ExtendingDatum(g, 1, **{b: blocks[b][i] for b in BLOCKS})).passed
              for i in range(len(U))]
    assert np.array_equal(fast, single)


@given(st.integers(0, 10**6))
def test_inclusion_is_injective_homomorphism(seed):
    F = Field.prime(3)
    d = _valid_datum(F, np.random.default_rng(seed))
    P = unified_product(d)
    assert is_homomorphism(d.g, P, inclusion_matrix(d)) is None


@given(st.integers(0, 10**6))
def test_product_then_block_projection_round_trip(seed):
    F = Field.prime(3)
    d = _valid_datum(F, np.random.default_rng(seed))
    P = unified_product(d)
    n = d.n
    back = canonical_datum(P, Subspace.coordinate(F, n + d.m, range(n)))
    assert back == d


def test_matched_pair_product_table(Q):
    mp = two_dim_matched_pair(Q)
    assert validate_matched_pair(mp).passed
    P = bicrossed_product(mp)
    # basis e1, e2, f1, f2
    expected = {(2, 0): {1: 1, 2: 1}, (0, 2): {1: -1, 2: -1}, (3, 0): {3: 1},
                (1, 0): {1: 1}, (0, 1): {1: -1}}
    assert P.table() == expected


def test_canonical_datum_of_direct_sum(Q):
    g, h = nilpotent_three(Q), two_dim_lie(Q)
    E = unified_product(ExtendingDatum(g, 2, vb=h.bracket))
    d = canonical_datum(E, Subspace.coordinate(Q, 5, [0, 1, 2]))
    for name in ("ra", "lh", "f", "la", "rh"):
        assert d.is_zero_block(name)
    assert np.array_equal(d.vb, h.bracket)


def test_canonical_datum_of_bicrossed_product(F5):
    mp = two_dim_matched_pair(F5)
    E = bicrossed_product(mp)
    d = canonical_datum(E, Subspace.coordinate(F5, 4, [0, 1]))
    assert d.is_zero_block("f")
    assert MatchedPair.from_datum(d).datum() == mp.datum()


def test_canonical_datum_rejects_bad_input(Q):
    E = unified_product(two_dim_matched_pair(Q).datum())
    with pytest.raises(AxiomError):
        canonical_datum(E, Subspace.coordinate(Q, 4, [0, 2]))
    with pytest.raises(AxiomError):
        canonical_datum(E, Subspace.coordinate(Q, 4, [0, 1]), p=Q.eye(4))


def test_canonical_datum_with_oblique_projection(Q):
    E = unified_product(two_dim_matched_pair(Q).datum())
    g = Subspace.coordinate(Q, 4, [0, 1])
    W = Subspace(Q, 4, [[1, 0, 1, 0], [0, 0, 0, 1]])
    p = projection_onto(E, g, W)
    d = canonical_datum(E, g, p)
    assert validate_extending_structure(d).passed
    # phi(g, x) = g + x is an isomorphism of the rebuilt product onto E
    phi = Q.zeros((4, 4))
    phi[:, :2] = g.basis.T
    phi[:, 2:] = W.basis.T
    assert is_isomorphism(unified_product(d), E, phi)


def test_crossed_direct_sum_is_ideal_extension(F3):
    cs = CrossedSystem(nilpotent_three(F3), two_dim_lie(F3))
    assert validate_crossed_system(cs).passed
    P = crossed_product(cs)
    assert is_two_sided_ideal(P, Subspace.coordinate(F3, 5, [0, 1, 2]))


def test_twisted_product(Q):
    g, h = abelian(Q, 1), abelian(Q, 1)
    f = Q.array([[[1]]])
    assert check_abelian_2cocycle(h, f, g)
    cs = CrossedSystem(g, h, f=f)
    assert validate_crossed_system(cs).passed
    P = twisted_product(g, h, f)
    assert P.table() == {(1, 1): {0: 1}}


def test_abelian_cocycle_examples(Q):
    g = nilpotent_three(Q)
    h = abelian(Q, 1)
    assert check_abelian_2cocycle(h, Q.zeros((1, 1, 3)), g)
    f = Q.zeros((1, 1, 3))
    f[0, 0, 0] = 1
    assert not check_abelian_2cocycle(h, f, g)
    with pytest.raises(AxiomError):
        twisted_product(g, h, f)


def _pointed_crossed_system(A, dd):
    F = A.field
    n = A.dim
    ra = F.array(dd.D).T.reshape(1, n, n)
    lh = F.array(dd.Delta).T.reshape(n, 1, n)
    f = F.array(dd.g0).reshape(1, 1, n)
    return CrossedSystem(A, abelian(F, 1), ra=ra, lh=lh, f=f)


def test_pointed_double_derivations_are_crossed_systems(F2):
    A = nilpotent_three(F2)
    items = double_derivations(A)
    good = {dd.key() for dd in items}
    for dd in items:
        cs = _pointed_crossed_system(A, dd)
        assert validate_crossed_system(cs).passed
        P = crossed_product(cs)
        assert np.array_equal(P.bracket[3, :3, :3], F2.array(dd.D).T)
        assert np.array_equal(P.bracket[:3, 3, :3], F2.array(dd.Delta).T)
        assert np.array_equal(P.bracket[3, 3, :3], F2.array(dd.g0))
    # every other triple fails
    rng = np.random.default_rng(0)
    from leibniz.algebra import PointedDoubleDerivation
    for _ in range(200):
        g0 = random_array(F2, rng, (3,))
        D, De = random_array(F2, rng, (3, 3)), random_array(F2, rng, (3, 3))
        cand = PointedDoubleDerivation(g0, D, De)
        cs = _pointed_crossed_system(A, cand)
        assert validate_crossed_system(cs).passed == (cand.key() in good)


def test_crossed_system_rejects_module_blocks(Q):
    la = Q.zeros((1, 2, 1))
    la[0, 0, 0] = 1
    d = ExtendingDatum(two_dim_lie(Q), 1, la=la)
    with pytest.raises(AxiomError):
        CrossedSystem.from_datum(d)


@given(st.integers(0, 10**6))
def test_crossed_product_ideal_and_quotient(seed):
    F = Field.prime(3)
    rng = np.random.default_rng(seed)
    A = nilpotent_three(F)
    items = double_derivations(A)
    cs = _pointed_crossed_system(A, items[int(rng.integers(0, len(items)))])
    P = crossed_product(cs)
    I = Subspace.coordinate(F, 4, [0, 1, 2])
    assert is_two_sided_ideal(P, I)
    B, _ = quotient(P, I)
    assert iso_search(B, cs.h) is not None


def test_matched_pair_with_zero_actions(F3):
    mp = MatchedPair(two_dim_lie(F3), nilpotent_three(F3))
    assert validate_matched_pair(mp).passed
    with pytest.raises(AxiomError):
        MatchedPair.from_datum(ExtendingDatum(two_dim_lie(F3), 1, f=F3.array([[[1, 0]]])))


def test_matched_pair_blocks_factorize(F5):
    mp = two_dim_matched_pair(F5)
    P = bicrossed_product(mp)
    G, H = Subspace.coordinate(F5, 4, [0, 1]), Subspace.coordinate(F5, 4, [2, 3])
    assert is_subalgebra(P, G) and is_subalgebra(P, H)
    assert (G + H).dim == 4 and G.intersection_dim(H) == 0


def test_hemisemidirect_matched_pair_is_not_lie(Q):
    g = two_dim_lie(Q)
    la = Q.zeros((1, 2, 1))
    la[0, 0, 0] = 1
    mp = MatchedPair(g, abelian(Q, 1), la=la)
    assert validate_matched_pair(mp).passed
    assert not is_lie(bicrossed_product(mp))


def test_hemisemidirect_examples(Q):
    g = abelian(Q, 1)
    P = hemisemidirect(g, Q.zeros((1, 1, 1)))
    assert is_abelian(P)
    P = hemisemidirect(g, Q.array([[[1]]]))
    assert P.table() == {(1, 0): {1: 1}}
    S = hemisemidirect(sl2(Q), sl2_natural_right_action(Q))
    assert S.dim == 5 and leibniz_check(S) is None and not is_lie(S)
    with pytest.raises(AxiomError):
        hemisemidirect(nilpotent_three(Q), Q.zeros((1, 3, 1)))
    bad = Q.zeros((1, 3, 1))
    bad[0, 2, 0] = 1
    with pytest.raises(AxiomError):
        hemisemidirect(sl2(Q), bad)


def _shift(cs, r):
    """Crossed system cohomologous to cs through r, solved for the other side."""
    F = cs.g.field
    E, R = F.einsum, F.reduce
    B, vb = cs.g.bracket, cs.h.bracket
    ra = R(cs.ra - E("kx,kgo->xgo", r, B))
    lh = R(cs.lh - E("kx,gko->gxo", r, B))
    f = R(cs.f - E("kx,jy,kjo->xyo", r, r, B) + E("xyw,ow->xyo", vb, r)
          - E("kx,kyo->xyo", r, lh) - E("ky,xko->xyo", r, ra))
    return CrossedSystem(cs.g, cs.h, ra=ra, lh=lh, f=f)


def test_extension_equivalent_self(F3):
    cs = _pointed_crossed_system(nilpotent_three(F3), double_derivations(nilpotent_three(F3))[7])
    r = extension_equivalent(cs, cs)
    assert r is not None and F3.is_zero(r)


@pytest.mark.parametrize("seed", range(6))
def test_extension_equivalent_recovers_shift(F3, seed):
    rng = np.random.default_rng(seed)
    A = nilpotent_three(F3)
    items = double_derivations(A)
    cs = _pointed_crossed_system(A, items[int(rng.integers(0, len(items)))])
    G = random_array(F3, rng, (3, 1))
    cs2 = _shift(cs, G)
    assert validate_crossed_system(cs2).passed
    assert extension_equivalent(cs, cs2, r=G) is not None
    found = extension_equivalent(cs, cs2)
    assert found is not None
    assert extension_equivalent(cs, cs2, r=found) is not None


def test_extension_equivalent_needs_same_quotient(F3, Q):
    cs = CrossedSystem(two_dim_lie(F3), abelian(F3, 2))
    cs2 = CrossedSystem(two_dim_lie(F3), two_dim_lie(F3))
    assert extension_equivalent(cs, cs2) is None
    with pytest.raises(UnsupportedEnumeration):
        extension_equivalent(CrossedSystem(two_dim_lie(Q), abelian(Q, 1)),
                             CrossedSystem(two_dim_lie(Q), abelian(Q, 1)))
