"""Exact scalars over Q and F_p, stored in numpy arrays.

Rational arrays use dtype=object holding ``Fraction``; prime-field arrays
hold residues in [0, p). Small primes use int64 (fast einsum), larger ones
fall back to Python ints in object arrays so products never overflow.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator

import numpy as np

from .errors import ParseError, UnsupportedEnumeration

MAX_PRIME = 2**31
# below this bound an int64 einsum over up to ~10^6 products cannot overflow
_INT64_PRIME_LIMIT = 2**13

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """Either the rationals (``p is None``) or the prime field F_p."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            p = int(p)
            if not _is_prime(p):
                raise ValueError(f"{p} is not prime")
            if p > MAX_PRIME:
                raise ValueError(f"prime {p} exceeds the supported bound 2^31")
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("Field is immutable")

    def __reduce__(self):
        return (Field, (self.p,))

    @classmethod
    def rational(cls) -> "Field":
        return cls(None)

    @classmethod
    def prime(cls, p: int) -> "Field":
        return cls(p)

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return 0 if self.p is None else self.p

    @property
    def dtype(self):
        if self.p is not None and self.p < _INT64_PRIME_LIMIT:
            return np.int64
        return object

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Field.rational()" if self.p is None else f"Field.prime({self.p})"

    def __str__(self):
        return "Q" if self.p is None else f"F_{self.p}"

    # scalars

    def __call__(self, x) -> Fraction | int:
        """Canonical scalar for ``x`` (int, Fraction, or scalar text)."""
        if isinstance(x, str):
            return self.parse(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        x = self(x)
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / x
        return pow(int(x), -1, self.p)

    def parse(self, text: str):
        m = _RATIONAL_RE.match(str(text))
        if not m:
            raise ParseError(f"bad scalar {text!r}")
        num = int(m.group(1))
        den = int(m.group(2)) if m.group(2) else 1
        if den == 0:
            raise ParseError(f"zero denominator in {text!r}")
        if self.p is not None and den % self.p == 0:
            raise ParseError(f"denominator of {text!r} vanishes mod {self.p}")
        return self(Fraction(num, den))

    def format(self, x) -> str:
        x = self(x)
        if self.p is None:
            return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
        return str(x)

    def elements(self) -> list[int]:
        self._need_prime()
        return list(range(self.p))

    def units(self) -> list[int]:
        self._need_prime()
        return list(range(1, self.p))

    # arrays

    def array(self, data, shape=None) -> np.ndarray:
        a = np.asarray(data, dtype=object)
        if shape is not None:
            a = a.reshape(shape)
        flat = [self(v) for v in a.ravel()]
        out = np.empty(len(flat), dtype=object)
        out[:] = flat
        out = out.reshape(a.shape)
        return out.astype(self.dtype) if self.dtype is not object else out

    def zeros(self, shape) -> np.ndarray:
        if self.dtype is object:
            out = np.empty(shape, dtype=object)
            out.fill(Fraction(0) if self.p is None else 0)
            return out
        return np.zeros(shape, dtype=self.dtype)

    def eye(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self(1)
        return out

    def reduce(self, a: np.ndarray) -> np.ndarray:
        """Bring an array produced by integer arithmetic back into canonical range."""
        if self.p is None:
            return a
        return np.mod(a, self.p)

    def einsum(self, spec: str, *ops) -> np.ndarray:
        if self.dtype is object:
            out = np.asarray(np.einsum(spec, *ops, dtype=object, optimize=False))
        else:
            out = np.einsum(spec, *ops)
        return self.reduce(out)

    def is_zero(self, a) -> bool:
        return not np.any(np.asarray(a) != 0)

    def _need_prime(self):
        if self.p is None:
            raise UnsupportedEnumeration("enumeration needs a prime field")


def tuples_array(p: int, length: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Rows ``start..stop`` of the lexicographic list of all residue tuples."""
    total = p**length
    stop = total if stop is None else min(stop, total)
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), length), dtype=np.int64)
    for pos in range(length - 1, -1, -1):
        out[:, pos] = idx % p
        idx //= p
    return out


def enumerate_tuples(field: Field, length: int, chunk: int = 4096) -> Iterator[np.ndarray]:
    """Every vector of F_p^length exactly once, lexicographically."""
    field._need_prime()
    total = field.p**length
    for start in range(0, total, chunk):
        block = tuples_array(field.p, length, start, start + chunk)
        if field.dtype is object:
            block = block.astype(object)
        yield from block
