from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from leibniz.errors import ParseError, UnsupportedEnumeration
from leibniz.field import Field, enumerate_tuples, tuples_array

PRIMES = [2, 3, 5, 7, 8191, 1_000_003]


def test_rational_parse_and_format():
    Q = Field.rational()
    assert Q.parse("3") == 3
    assert Q.parse("-6/4") == Fraction(-3, 2)
    assert Q.format(Fraction(-3, 2)) == "-3/2"
    assert Q.format(Fraction(4, 2)) == "2"


def test_prime_parse_reduces():
    F = Field.prime(5)
    assert F.parse("7") == 2
    assert F.parse("-1") == 4
    assert F.parse("1/2") == 3
    assert F.format(13) == "3"


@pytest.mark.parametrize("text", ["", "1.5", "a", "1/0", "2/-3", "1//2"])
def test_bad_scalar_text(text):
    with pytest.raises(ParseError):
        Field.rational().parse(text)


def test_denominator_divisible_by_p():
    with pytest.raises(ParseError):
        Field.prime(3).parse("1/6")


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        Field.prime(4)


def test_enumeration_needs_prime_field():
    with pytest.raises(UnsupportedEnumeration):
        Field.rational().elements()


def test_field_equality_and_pickle():
    import pickle
    F = Field.prime(7)
    assert pickle.loads(pickle.dumps(F)) == F
    assert F != Field.prime(5)
    assert Field.rational() == Field.rational()


@pytest.mark.parametrize("p", PRIMES)
def test_inverse_in_prime_field(p):
    F = Field.prime(p)
    for x in [x for x in (1, p - 1, p // 2 + 1, 2 * p + 1) if x % p]:
        assert F(x) * F.inv(x) % p == 1


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6))
def test_rational_text_round_trip(a, b):
    Q = Field.rational()
    x = Fraction(a, b)
    assert Q.parse(Q.format(x)) == x


@given(st.sampled_from(PRIMES), st.integers(-10**9, 10**9))
def test_prime_text_round_trip(p, a):
    F = Field.prime(p)
    assert F.parse(F.format(a)) == a % p
    assert 0 <= F(a) < p


def test_large_prime_arrays_use_exact_integers():
    F = Field.prime(1_000_003)
    a = F.array([[10**6, 2], [3, 4]])
    assert a.dtype == object
    prod = F.einsum("ij,jk->ik", a, a)
    assert prod[0, 0] == (10**12 + 6) % 1_000_003


def test_tuples_are_lexicographic():
    T = tuples_array(3, 2)
    assert T.tolist() == [[i, j] for i in range(3) for j in range(3)]
    assert tuples_array(2, 3, 5, 7).tolist() == [[1, 0, 1], [1, 1, 0]]
    assert len(list(enumerate_tuples(Field.prime(2), 4))) == 16


def test_rational_zeros_are_fractions():
    Q = Field.rational()
    z = Q.zeros((2, 2))
    assert all(isinstance(x, Fraction) for x in z.ravel())
    assert np.array_equal(Q.eye(2), Q.array([[1, 0], [0, 1]]))
