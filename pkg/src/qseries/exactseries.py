"""Truncated formal power series in q with exact rational coefficients.

A :class:`FormalSeries` carries its coefficients modulo q^N for a fixed
truncation order N.  All arithmetic is exact (``fractions.Fraction``
coefficients, arbitrary-precision integers underneath); no floating point
enters this module.  Two series are equal iff every coefficient below the
common order agrees exactly.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from .errors import NotInvertible, OrderExceeded, OrderMismatch

__all__ = [
    "FormalSeries",
    "fs_from_rational",
    "fs_var",
    "fs_mul",
    "fs_inv",
    "fs_qpoch_infinite",
    "fs_extract",
    "geometric_tail",
]


def _as_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    raise TypeError(f"exact mode requires rational coefficients, got {type(value).__name__}")


class FormalSeries:
    """Power series in q modulo q^order, coefficients exact rationals."""

    __slots__ = ("order", "coeffs")

    def __init__(self, coeffs, order=None):
        coeffs = [_as_fraction(c) for c in coeffs]
        if order is None:
            order = len(coeffs)
        if order < 1:
            raise ValueError("order must be a positive integer")
        if len(coeffs) < order:
            coeffs = coeffs + [Fraction(0)] * (order - len(coeffs))
        self.order = order
        self.coeffs = tuple(coeffs[:order])

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, c, order):
        return cls([_as_fraction(c)], order)

    @classmethod
    def variable(cls, order):
        """The series q itself."""
        return cls([Fraction(0), Fraction(1)], order)

    @classmethod
    def q_power(cls, k, order):
        if k < 0:
            raise ValueError("negative powers of q are not representable")
        coeffs = [Fraction(0)] * order
        if k < order:
            coeffs[k] = Fraction(1)
        return cls(coeffs, order)

    # -- helpers ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, FormalSeries):
            if other.order != self.order:
                raise OrderMismatch(f"orders differ: {self.order} vs {other.order}")
            return other
        if isinstance(other, Rational):
            return FormalSeries.constant(other, self.order)
        return None

    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def valuation(self):
        """Index of the first nonzero coefficient, or None for the zero series."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def extract(self, k):
        if not 0 <= k < self.order:
            raise OrderExceeded(f"index {k} outside order {self.order}")
        return self.coeffs[k]

    # -- ring operations ----------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FormalSeries([a + b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    __radd__ = __add__

    def __neg__(self):
        return FormalSeries([-a for a in self.coeffs], self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return FormalSeries([a - b for a, b in zip(self.coeffs, other.coeffs)], self.order)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        if isinstance(other, Rational) and not isinstance(other, FormalSeries):
            f = _as_fraction(other)
            return FormalSeries([c * f for c in self.coeffs], self.order)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = self.order
        a, b = self.coeffs, other.coeffs
        out = [Fraction(0)] * n
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j in range(n - i):
                bj = b[j]
                if bj != 0:
                    out[i + j] += ai * bj
        return FormalSeries(out, n)

    __rmul__ = __mul__

    def inverse(self):
        c = self.coeffs
        if c[0] == 0:
            raise NotInvertible("constant term is zero")
        n = self.order
        inv0 = 1 / c[0]
        out = [Fraction(0)] * n
        out[0] = inv0
        for k in range(1, n):
            s = Fraction(0)
            for j in range(1, k + 1):
                cj = c[j]
                if cj != 0:
                    s += cj * out[k - j]
            out[k] = -s * inv0
        return FormalSeries(out, n)

    def __truediv__(self, other):
        if isinstance(other, Rational) and not isinstance(other, FormalSeries):
            f = _as_fraction(other)
            if f == 0:
                raise ZeroDivisionError("division by zero")
            return FormalSeries([c / f for c in self.coeffs], self.order)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = FormalSeries.constant(1, self.order)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison / display -----------------------------------------

    def __eq__(self, other):
        if isinstance(other, Rational) and not isinstance(other, FormalSeries):
            other = FormalSeries.constant(other, self.order)
        if not isinstance(other, FormalSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = []
        for k, c in enumerate(self.coeffs):
            if c != 0:
                terms.append(f"{c}*q^{k}" if k else f"{c}")
            if len(terms) >= 6:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"FormalSeries({body} mod q^{self.order})"


# -- module-level operations ------------------------------------------


def fs_from_rational(c, order):
    """Constant series c mod q^order."""
    return FormalSeries.constant(c, order)


def fs_var(order):
    """The formal variable q mod q^order."""
    return FormalSeries.variable(order)


def fs_mul(x, y):
    return x * y


def fs_inv(x):
    return x.inverse()


def fs_extract(x, k):
    return x.extract(k)


def fs_qpoch_infinite(a, order):
    """Exact (a;q)_infinity mod q^order for rational or series a.

    Only factors whose a*q^k term survives below the truncation order are
    multiplied; every omitted factor is congruent to 1 mod q^order.
    """
    one = FormalSeries.constant(1, order)
    if isinstance(a, Rational) and not isinstance(a, FormalSeries):
        a = FormalSeries.constant(a, order)
    if a.order != order:
        raise OrderMismatch(f"orders differ: {a.order} vs {order}")
    if a.is_zero():
        return one
    val = a.valuation()
    result = one
    q = FormalSeries.variable(order)
    qk = one
    for k in range(order - val):
        result = result * (one - a * qk)
        qk = qk * q
    return result


def geometric_tail(term, ratio):
    """Sum of term * ratio^j for j >= 1, with a rational ratio != 1.

    Valid whenever the terms of the underlying series are exactly geometric
    from this point on (all q^n shifts having vanished modulo the order).
    """
    ratio = _as_fraction(ratio)
    if ratio == 1:
        raise ZeroDivisionError("geometric tail requires ratio != 1")
    return term * (ratio / (1 - ratio))


def arithmetic_geometric_tail(start_index, ratio, linear_coeff, const_coeff):
    """Closed form of sum_{n >= start_index} ratio^n * (linear_coeff*(n+1) + const_coeff).

    Returns a Fraction; requires |ratio| < 1 for the analytic sum to exist.
    """
    x = _as_fraction(ratio)
    if abs(x) >= 1:
        raise ZeroDivisionError("arithmetic-geometric tail requires |ratio| < 1")
    m = start_index
    geo = x**m / (1 - x)
    # sum_{n>=m} (n+1) x^n = x^m [ (m+1)/(1-x) + x/(1-x)^2 ]
    lin = x**m * (Fraction(m + 1) / (1 - x) + x / (1 - x) ** 2)
    return linear_coeff * lin + const_coeff * geo
