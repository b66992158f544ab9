"""Exact arithmetic in the ring of integers O of a real quadratic field.

Elements are stored in doubled coordinates (p, q) meaning (p + q*sqrt(d))/2,
which gives one code path for both ring shapes:

* d = 1 (mod 4):  O = Z[(1+sqrt(d))/2], so p and q share a parity;
* otherwise:      O = Z[sqrt(d)], so p and q are both even.

All comparisons against rational bounds are decided by integer sign
analysis, never by floating point.
"""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import isqrt, sqrt

import numpy as np

from . import _chartable
from .errors import FieldMismatch, InvalidElement, OutOfRange


class RingClass(Enum):
    ONE_MOD_FOUR = "one_mod_four"
    OTHER_MOD_FOUR = "other_mod_four"


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def sign_quad(a: int, b: int, d: int) -> int:
    """Exact sign of a + b*sqrt(d) for integers a, b and squarefree d > 1."""
    if b == 0:
        return _sign(a)
    if a == 0:
        return _sign(b)
    sa, sb = _sign(a), _sign(b)
    if sa == sb:
        return sa
    aa = a * a
    bb = b * b * d
    if aa == bb:
        # would force sqrt(d) rational; unreachable for squarefree d > 1
        return 0
    return sa if aa > bb else sb


class FieldData:
    """A real quadratic field Q(sqrt(d)) with its ring data and character table.

    Immutable; instances are shareable across threads.
    """

    __slots__ = ("d", "delta", "ring_class", "prime_divisors", "_chi")

    def __init__(self, d: int):
        if d <= 1:
            raise OutOfRange(f"d must be > 1, got {d}")
        primes = _chartable.check_squarefree(d)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "delta", _chartable.discriminant(d))
        object.__setattr__(
            self,
            "ring_class",
            RingClass.ONE_MOD_FOUR if d % 4 == 1 else RingClass.OTHER_MOD_FOUR,
        )
        object.__setattr__(self, "prime_divisors", tuple(primes))
        object.__setattr__(self, "_chi", _chartable.chi_table(d, primes))
        self._chi.setflags(write=False)

    def __setattr__(self, name, value):  # immutability
        raise AttributeError("FieldData is immutable")

    def chi(self, n: int) -> int:
        """Kronecker character (Delta/n), periodic mod Delta."""
        return int(self._chi[n % self.delta])

    @property
    def chi_values(self) -> np.ndarray:
        """Read-only int8 table, chi_values[n % delta] = chi(n)."""
        return self._chi

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldData) and other.d == self.d

    def __hash__(self) -> int:
        return hash(("FieldData", self.d))

    def __repr__(self) -> str:
        return f"FieldData(d={self.d}, delta={self.delta})"

    # element constructors

    def element(self, p: int, q: int) -> QuadInt:
        """(p + q*sqrt(d))/2 from doubled coordinates."""
        return QuadInt(self, p, q)

    def from_xy(self, x: int, y: int) -> QuadInt:
        """x + y*sqrt(d) from integer lattice coordinates."""
        return QuadInt(self, 2 * x, 2 * y)

    def from_int(self, n: int) -> QuadInt:
        return QuadInt(self, 2 * n, 0)

    def zero(self) -> QuadInt:
        return QuadInt(self, 0, 0)

    def one(self) -> QuadInt:
        return QuadInt(self, 2, 0)

    def sqrt_d(self) -> QuadInt:
        return QuadInt(self, 0, 2)

    def omega(self) -> QuadInt:
        """(1 + sqrt(d))/2; only an integer of the field when d = 1 (mod 4)."""
        return QuadInt(self, 1, 1)

    def omega_bar(self) -> QuadInt:
        """(1 - sqrt(d))/2; only an integer of the field when d = 1 (mod 4)."""
        return QuadInt(self, 1, -1)


@lru_cache(maxsize=128)
def field_new(d: int) -> FieldData:
    """Validated field data for squarefree d > 1, with the full character table."""
    return FieldData(d)


class QuadInt:
    """An element (p + q*sqrt(d))/2 of the ring of integers, immutable."""

    __slots__ = ("field", "p", "q")

    def __init__(self, field: FieldData, p: int, q: int):
        if field.ring_class is RingClass.ONE_MOD_FOUR:
            if (p - q) % 2 != 0:
                raise InvalidElement(f"(p={p}, q={q}) needs p = q (mod 2) for d = {field.d}")
        else:
            if p % 2 != 0 or q % 2 != 0:
                raise InvalidElement(f"(p={p}, q={q}) needs even p, q for d = {field.d}")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("QuadInt is immutable")

    def _check_field(self, other: QuadInt) -> None:
        if self.field.d != other.field.d:
            raise FieldMismatch(f"d={self.field.d} vs d={other.field.d}")

    # ring operations

    def __add__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            other = self.field.from_int(other)
        self._check_field(other)
        return QuadInt(self.field, self.p + other.p, self.q + other.q)

    __radd__ = __add__

    def __sub__(self, other: QuadInt | int) -> QuadInt:
        return self + (-other)

    def __rsub__(self, other: int) -> QuadInt:
        return (-self) + other

    def __neg__(self) -> QuadInt:
        return QuadInt(self.field, -self.p, -self.q)

    def __mul__(self, other: QuadInt | int) -> QuadInt:
        if isinstance(other, int):
            return QuadInt(self.field, self.p * other, self.q * other)
        self._check_field(other)
        d = self.field.d
        pp = self.p * other.p + d * self.q * other.q
        qq = self.p * other.q + self.q * other.p
        if pp % 2 != 0 or qq % 2 != 0:
            raise InvalidElement("product left the ring; invalid operands")
        return QuadInt(self.field, pp // 2, qq // 2)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> QuadInt:
        if n < 0:
            raise OutOfRange("negative powers are not ring elements in general")
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self.p == 2 * other and self.q == 0
        return (
            isinstance(other, QuadInt)
            and self.field.d == other.field.d
            and self.p == other.p
            and self.q == other.q
        )

    def __hash__(self) -> int:
        return hash((self.field.d, self.p, self.q))

    # conjugation, embeddings, norms

    def conj(self) -> QuadInt:
        """Image under sqrt(d) -> -sqrt(d); an involution."""
        return QuadInt(self.field, self.p, -self.q)

    def embed(self) -> tuple[float, float]:
        """(lambda, lambda^sigma) as floats; use cmp() for exact box tests."""
        r = self.q * sqrt(self.field.d)
        return ((self.p + r) / 2.0, (self.p - r) / 2.0)

    def embed_exact(self, digits: int = 40) -> tuple[Fraction, Fraction]:
        """Both embeddings as rationals correct to ~digits decimal places.

        Plain embed() loses precision to cancellation when p is close to
        q*sqrt(d); here sqrt(d) is replaced by an integer square root at a
        fixed scale, so the error stays below |q| * 10**-digits."""
        scale = 10**digits
        root = Fraction(isqrt(self.field.d * scale * scale), scale)
        p_half = Fraction(self.p, 2)
        q_half = Fraction(self.q, 2)
        return (p_half + q_half * root, p_half - q_half * root)

    def trace(self) -> int:
        """lambda + lambda^sigma, always a rational integer."""
        return self.p

    def norm(self) -> int:
        """lambda * lambda^sigma, always a rational integer."""
        return (self.p * self.p - self.field.d * self.q * self.q) // 4

    # exact comparisons

    def cmp(self, bound: Fraction | int) -> int:
        """Exact sign of (lambda - bound) for a rational bound, by integer
        sign analysis of (p*den - 2*num) + q*den*sqrt(d)."""
        frac = Fraction(bound)
        a = self.p * frac.denominator - 2 * frac.numerator
        b = self.q * frac.denominator
        return sign_quad(a, b, self.field.d)

    def sign(self) -> int:
        return sign_quad(self.p, self.q, self.field.d)

    def __lt__(self, other: QuadInt | int) -> bool:
        return (self - other).sign() < 0

    def __le__(self, other: QuadInt | int) -> bool:
        return (self - other).sign() <= 0

    def __gt__(self, other: QuadInt | int) -> bool:
        return (self - other).sign() > 0

    def __ge__(self, other: QuadInt | int) -> bool:
        return (self - other).sign() >= 0

    def lex_sign(self) -> int:
        """Sign under the lexicographic order on (p, q); used for +-Id quotients."""
        if self.p != 0:
            return _sign(self.p)
        return _sign(self.q)

    # divisibility

    def in_two_o(self) -> bool:
        """True iff lambda/2 is again a ring integer."""
        if self.p % 2 != 0 or self.q % 2 != 0:
            return False
        if self.field.ring_class is RingClass.ONE_MOD_FOUR:
            return (self.p - self.q) % 4 == 0
        return self.p % 4 == 0 and self.q % 4 == 0

    def half(self) -> QuadInt:
        """lambda/2, valid only when in_two_o()."""
        if not self.in_two_o():
            raise InvalidElement("element is not divisible by 2 in the ring")
        return QuadInt(self.field, self.p // 2, self.q // 2)

    def is_zero(self) -> bool:
        return self.p == 0 and self.q == 0

    def xy(self) -> tuple[Fraction, Fraction]:
        """Coordinates (x, y) with lambda = x + y*sqrt(d), as exact rationals."""
        return Fraction(self.p, 2), Fraction(self.q, 2)

    def __repr__(self) -> str:
        return f"QuadInt(d={self.field.d}, ({self.p}{self.q:+}*sqrt{self.field.d})/2)"

    def __str__(self) -> str:
        if self.p % 2 == 0 and self.q % 2 == 0:
            return f"{self.p // 2}{self.q // 2:+}*sqrt({self.field.d})"
        return f"({self.p}{self.q:+}*sqrt({self.field.d}))/2"
