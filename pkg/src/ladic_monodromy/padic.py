"""Fixed-precision ℓ-adic scalars and closed-form valuations of q^k - 1.

A :class:`PadicScalar` stores ``unit * prime**valuation`` with the unit known
modulo ``prime**relprec``.  ``relprec`` starts at the working precision ``M``
and only drops when an addition cancels leading digits, so equality tests
compare values only on the digits that are actually known.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

INF = math.inf

# Exact rationals for bounds; Fraction is already reduced with a positive
# denominator and compares with ints.
RationalBound = Fraction

Number = Union[int, Fraction, "PadicScalar"]


class PrecisionError(ArithmeticError):
    """Raised when a computation needs more ℓ-adic digits than are carried."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def valuation(x: Union[int, Fraction], ell: int):
    """ℓ-adic valuation of an integer or rational; ``INF`` for zero."""
    if isinstance(x, Fraction):
        if x == 0:
            return INF
        return valuation(x.numerator, ell) - valuation(x.denominator, ell)
    x = abs(int(x))
    if x == 0:
        return INF
    v = 0
    while x % ell == 0:
        x //= ell
        v += 1
    return v


def _make(prime, precision, val, unit, relprec, exhausted=False):
    s = object.__new__(PadicScalar)
    s.prime = prime
    s.precision = precision
    s.valuation = val
    s.unit = unit
    s.relprec = relprec
    s.exhausted = exhausted
    return s


class PadicScalar:
    """An element of ℚ_ℓ carried to ``precision`` significant digits."""

    __slots__ = ("prime", "precision", "valuation", "unit", "relprec", "exhausted")

    def __init__(self, prime: int, precision: int, valuation=INF, unit: int = 0,
                 relprec: int | None = None, exhausted: bool = False):
        if prime < 2 or not is_prime(prime):
            raise ValueError(f"{prime} is not prime")
        if precision < 1:
            raise ValueError("precision must be positive")
        relprec = precision if relprec is None else relprec
        if not 0 < relprec <= precision:
            raise ValueError("relative precision must lie in 1..precision")
        self.prime = prime
        self.precision = precision
        self.exhausted = exhausted
        if valuation == INF or unit % prime ** relprec == 0:
            self.valuation, self.unit, self.relprec = INF, 0, precision
            return
        unit %= prime ** relprec
        while unit % prime == 0:
            unit //= prime
            valuation += 1
            relprec -= 1
        self.valuation = valuation
        self.unit = unit
        self.relprec = relprec

    # construction -----------------------------------------------------

    @classmethod
    def from_rational(cls, x: Number, prime: int, precision: int) -> "PadicScalar":
        if isinstance(x, PadicScalar):
            if x.prime != prime or x.precision != precision:
                raise ValueError("prime or precision mismatch")
            return x
        x = Fraction(x)
        if x == 0:
            return _make(prime, precision, INF, 0, precision)
        v = valuation(x, prime)
        mod = prime ** precision
        num = x.numerator // prime ** max(v, 0)
        den = x.denominator // prime ** max(-v, 0)
        return _make(prime, precision, v, num * pow(den, -1, mod) % mod, precision)

    @classmethod
    def zero(cls, prime: int, precision: int) -> "PadicScalar":
        return _make(prime, precision, INF, 0, precision)

    @classmethod
    def one(cls, prime: int, precision: int) -> "PadicScalar":
        return _make(prime, precision, 0, 1, precision)

    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.prime != self.prime or other.precision != self.precision:
                raise ValueError("prime or precision mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return PadicScalar.from_rational(other, self.prime, self.precision)
        return NotImplemented

    # predicates -------------------------------------------------------

    def is_zero(self) -> bool:
        return self.valuation == INF

    def is_integral(self) -> bool:
        return self.valuation >= 0

    def is_unit(self) -> bool:
        return self.valuation == 0

    # arithmetic -------------------------------------------------------

    def __neg__(self):
        if self.valuation == INF:
            return self
        m = self.prime ** self.relprec
        return _make(self.prime, self.precision, self.valuation, (-self.unit) % m,
                     self.relprec, self.exhausted)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b = self, other
        if a.valuation == INF:
            return b
        if b.valuation == INF:
            return a
        if a.valuation > b.valuation:
            a, b = b, a
        p = a.prime
        d = b.valuation - a.valuation
        n = min(a.relprec, d + b.relprec)
        if d >= n:
            return a
        mod = p ** n
        t = (a.unit + b.unit * p ** d) % mod
        if t == 0:
            return _make(p, a.precision, INF, 0, a.precision, True)
        v = 0
        while t % p == 0:
            t //= p
            v += 1
        return _make(p, a.precision, a.valuation + v, t, n - v,
                     a.exhausted or b.exhausted)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.valuation == INF or other.valuation == INF:
            return _make(self.prime, self.precision, INF, 0, self.precision)
        r = min(self.relprec, other.relprec)
        return _make(self.prime, self.precision, self.valuation + other.valuation,
                     self.unit * other.unit % self.prime ** r, r,
                     self.exhausted or other.exhausted)

    __rmul__ = __mul__

    def inverse(self) -> "PadicScalar":
        if self.valuation == INF:
            raise ZeroDivisionError("inverse of zero ℓ-adic scalar")
        m = self.prime ** self.relprec
        return _make(self.prime, self.precision, -self.valuation,
                     pow(self.unit, -1, m), self.relprec, self.exhausted)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicScalar.one(self.prime, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).valuation == INF

    __hash__ = None

    # conversion -------------------------------------------------------

    def lift(self) -> Fraction:
        """Rational representative with the unit lifted to the symmetric range."""
        if self.valuation == INF:
            return Fraction(0)
        m = self.prime ** self.relprec
        u = self.unit if 2 * self.unit <= m else self.unit - m
        return Fraction(u) * Fraction(self.prime) ** self.valuation

    def residue(self, k: int) -> int:
        """Value modulo ℓ^k for an integral scalar."""
        if self.valuation == INF or self.valuation >= k:
            return 0
        if self.valuation < 0:
            raise ValueError("non-integral scalar has no residue")
        if self.valuation + self.relprec < k:
            raise PrecisionError(f"residue mod {self.prime}^{k} not known")
        return self.unit * self.prime ** self.valuation % self.prime ** k

    def __repr__(self):
        if self.valuation == INF:
            return f"PadicScalar(ℓ={self.prime}, 0)"
        return (f"PadicScalar(ℓ={self.prime}, v={self.valuation}, u={self.unit}"
                f" mod {self.prime}^{self.relprec})")


def scalar_arith(a: PadicScalar, b: PadicScalar, op: str) -> PadicScalar:
    if not isinstance(b, PadicScalar) or (a.prime, a.precision) != (b.prime, b.precision):
        raise ValueError("operands must share prime and precision")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# closed-form valuations of q^k - 1 --------------------------------------


def _check_unit(q: int, ell: int) -> int:
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    q = int(q)
    if q % ell == 0:
        raise ValueError(f"q={q} is divisible by ℓ={ell}")
    return q


def order_mod(q: int, ell: int) -> int:
    """Order of q in (ℤ/ℓ)^× for odd ℓ, in (ℤ/4)^× for ℓ = 2."""
    q = _check_unit(q, ell)
    mod = 4 if ell == 2 else ell
    x, s = q % mod, 1
    while x != 1:
        x = x * q % mod
        s += 1
    return s


def _val_qs_minus_one(q: int, ell: int, s: int, precision: int | None) -> int:
    if precision is None:
        if q ** s == 1:
            raise ValueError("q^s = 1: q is a root of unity")
        return valuation(q ** s - 1, ell)
    mod = ell ** precision
    t = (pow(q, s, mod) - 1) % mod
    if t == 0:
        raise PrecisionError(f"q^{s} ≡ 1 mod {ell}^{precision}")
    return valuation(t, ell)


def val_qpow(q: int, k: int, ell: int, precision: int | None = None) -> int:
    """v_ℓ(q^k - 1) via the order-of-q case split.

    With ``precision`` set, q is treated as a residue mod ℓ^precision and
    :class:`PrecisionError` is raised when v_ℓ(q^s - 1) is not visible.
    """
    q = _check_unit(q, ell)
    if k < 1:
        raise ValueError("k must be positive")
    s = order_mod(q, ell)
    if k % s == 0:
        return _val_qs_minus_one(q, ell, s, precision) + valuation(k // s, ell)
    return 1 if ell == 2 else 0


def brute_val_qpow(q: int, k: int, ell: int) -> int:
    """v_ℓ(q^k - 1) from the exact integer q^k - 1."""
    q = _check_unit(q, ell)
    n = q ** k - 1
    if n == 0:
        raise ValueError("q^k = 1")
    return valuation(n, ell)


def cbound(q: int, ell: int, k: int, precision: int | None = None) -> Fraction:
    """Upper bound for Σ_{i=1}^k v_ℓ(q^i - 1) as an exact rational."""
    q = _check_unit(q, ell)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return Fraction(0)
    s = order_mod(q, ell)
    core = _val_qs_minus_one(q, ell, s, precision) + Fraction(1, ell - 1)
    if ell == 2:
        return Fraction(k, s) * (core + 1) + Fraction(1, s)
    return Fraction(k, s) * core
