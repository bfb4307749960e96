"""Exact truncated-series ring: axioms, inversion, known product oracles."""

import random
from fractions import Fraction

import pytest

from qseries.errors import NotInvertible, OrderExceeded, OrderMismatch
from qseries.exactseries import (
    FormalSeries,
    fs_from_rational,
    fs_qpoch_infinite,
    fs_var,
    geometric_tail,
)

RNG = random.Random(20260823)


def rand_series(order, rng=RNG, max_den=7):
    coeffs = [
        Fraction(rng.randint(-9, 9), rng.randint(1, max_den)) for _ in range(order)
    ]
    return FormalSeries(coeffs, order)


def test_ring_axioms_random():
    for _ in range(25):
        n = RNG.randint(1, 64)
        a, b, c = rand_series(n), rand_series(n), rand_series(n)
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a + FormalSeries.constant(0, n) == a
        assert a * FormalSeries.constant(1, n) == a
        assert a - a == FormalSeries.constant(0, n)


def test_inverse_roundtrip():
    for _ in range(20):
        n = RNG.randint(2, 48)
        a = rand_series(n)
        if a.coeffs[0] == 0:
            a = a + 1
        one = FormalSeries.constant(1, n)
        assert a * a.inverse() == one
        assert (one / a) * a == one


def test_inverse_requires_unit_constant_term():
    s = FormalSeries([0, 1], 8)
    with pytest.raises(NotInvertible):
        s.inverse()


def test_geometric_series_inverse():
    # 1/(1 - q) = 1 + q + q^2 + ...
    n = 12
    q = fs_var(n)
    inv = (1 - q).inverse()
    assert inv.coeffs == tuple(Fraction(1) for _ in range(n))


def test_scalar_mixing_and_pow():
    n = 10
    q = fs_var(n)
    s = (1 + q) ** 3
    assert s.extract(0) == 1 and s.extract(1) == 3 and s.extract(2) == 3 and s.extract(3) == 1
    assert (q**2).valuation() == 2
    assert ((1 + q) ** 0) == FormalSeries.constant(1, n)
    half = fs_from_rational(Fraction(1, 2), n)
    assert (half * 2) == FormalSeries.constant(1, n)


def test_order_mismatch_and_extract_bounds():
    a = fs_var(8)
    b = fs_var(9)
    with pytest.raises(OrderMismatch):
        _ = a + b
    with pytest.raises(OrderExceeded):
        a.extract(8)
    with pytest.raises(OrderExceeded):
        a.extract(-1)


def test_floats_rejected():
    with pytest.raises(TypeError):
        FormalSeries([0.5], 4)
    with pytest.raises(TypeError):
        fs_var(4) * 0.5


def pentagonal_coeffs(order):
    """Euler pentagonal number theorem oracle for (q; q)_oo."""
    coeffs = [Fraction(0)] * order
    k = 0
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 >= order and e2 >= order:
            break
        sign = Fraction(-1) if k % 2 else Fraction(1)
        if e1 < order:
            coeffs[e1] += sign
        if k and e2 < order:
            coeffs[e2] += sign
        k += 1
    return tuple(coeffs)


def test_qpoch_infinite_matches_pentagonal_oracle():
    order = 60
    q = fs_var(order)
    assert fs_qpoch_infinite(q, order).coeffs == pentagonal_coeffs(order)


def test_qpoch_infinite_rational_argument():
    # (1/2; q)_oo has constant term 1/2 and all factors below the order
    order = 16
    p = fs_qpoch_infinite(Fraction(1, 2), order)
    q = fs_var(order)
    manual = FormalSeries.constant(1, order)
    for k in range(order):
        manual = manual * (1 - Fraction(1, 2) * q**k)
    assert p == manual


def test_geometric_tail_closed_form():
    # sum_{j>=1} t r^j against an explicit long partial sum
    order = 20
    q = fs_var(order)
    t = (1 + q) ** 2
    r = Fraction(1, 3)
    tail = geometric_tail(t, r)
    partial = FormalSeries.constant(0, order)
    rj = Fraction(1)
    for _ in range(200):
        rj *= r
        partial = partial + t * rj
    # 200 terms of a |r|=1/3 geometric series agree far beyond Fraction exactness scale
    diff = tail - partial
    assert all(abs(c) < Fraction(1, 10**80) for c in diff.coeffs)
