"""Core q-calculus primitives: products, series, q-integral, derivatives."""

import cmath
import math
import random
from fractions import Fraction

import pytest

from qseries.errors import DomainError, NonConvergent, PoleError
from qseries.exactseries import fs_var
from qseries.qcore import (
    DEFAULT_POLICY,
    ParameterPoint,
    TruncationPolicy,
    delta_theta,
    hprod,
    jackson_qintegral,
    phi_series,
    q_derivative,
    q_hermite,
    q_partial,
    qbinomial,
    qpoch_finite,
    qpoch_infinite,
    qpoch_infinite_cached,
    qpoch_multi,
    rogers_szego,
    sum_series,
)

RNG = random.Random(77)


def test_qpoch_finite_basics():
    assert qpoch_finite(0.3, 0.5, 0) == 1.0
    assert abs(qpoch_finite(0.3, 0.5, 2) - (1 - 0.3) * (1 - 0.15)) < 1e-15
    with pytest.raises(DomainError):
        qpoch_finite(0.3, 0.5, -1)


def test_qpoch_infinite_against_high_partial():
    for _ in range(20):
        q = RNG.uniform(0.05, 0.8)
        a = cmath.rect(RNG.uniform(0.1, 2.0), RNG.uniform(0, 2 * math.pi))
        direct = 1.0
        for k in range(400):
            direct *= 1 - a * q**k
        val = qpoch_infinite(a, q)
        assert abs(val - direct) <= 1e-12 * max(1.0, abs(direct))


def test_qpoch_cached_agrees_with_reference():
    # memoized path must track the reference path to 1e-12
    for _ in range(50):
        q = RNG.uniform(0.05, 0.8)
        a = cmath.rect(RNG.uniform(0.0, 1.5), RNG.uniform(0, 2 * math.pi))
        ref = qpoch_infinite(a, q)
        got = qpoch_infinite_cached(a, q)
        assert abs(ref - got) <= 1e-12 * max(1.0, abs(ref))


def test_qpoch_multi_and_qbinomial():
    q = 0.5
    assert abs(qpoch_multi([0.2, 0.3], q, 2) - qpoch_finite(0.2, q, 2) * qpoch_finite(0.3, q, 2)) < 1e-15
    assert abs(qbinomial(4, 2, 0.5) - 2.1875) < 1e-12
    assert qbinomial(5, 0, 0.3) == 1.0
    with pytest.raises(DomainError):
        qbinomial(2, 3, 0.5)


def test_parameter_point_validation():
    with pytest.raises(DomainError):
        ParameterPoint(q=1.2)
    with pytest.raises(DomainError):
        ParameterPoint(q=0.5, theta=4.0)
    with pytest.raises(DomainError):
        ParameterPoint(q=fs_var(10), a=0.5)  # floats invalid in exact mode
    pt = ParameterPoint(q=0.5, u=0.2, v=0.7)
    assert pt.swap_uv().u == 0.7 and pt.swap_uv().v == 0.2


def test_phi_series_q_binomial_case():
    # 1phi0(a; -; q, z) = (az; q)_oo / (z; q)_oo
    for _ in range(20):
        q = RNG.uniform(0.05, 0.8)
        a = cmath.rect(RNG.uniform(0.1, 2.0), RNG.uniform(0, 2 * math.pi))
        z = cmath.rect(RNG.uniform(0.05, 0.75), RNG.uniform(0, 2 * math.pi))
        lhs = phi_series([a], [], q, z)
        rhs = qpoch_infinite(a * z, q) / qpoch_infinite(z, q)
        assert abs(lhs - rhs) <= 1e-11 * abs(rhs)


def test_phi_series_shape_rejection_and_pole():
    with pytest.raises(NonConvergent):
        phi_series([0.3, 0.4], [], 0.5, 0.2)  # r > s+1 diverges
    with pytest.raises(NonConvergent):
        phi_series([0.3], [], 0.5, 1.1)  # |z| >= 1 with r = s+1
    with pytest.raises(PoleError):
        phi_series([0.3], [1.0 + 1e-12], 0.5, 0.2)
    # r > s+1 allowed at z = 0
    assert phi_series([0.3, 0.4], [], 0.5, 0.0) == 1.0


def test_phi_series_terminating():
    # numerator q^{-2} terminates the series after 3 terms
    q = 0.5
    qm2 = q**-2
    val = phi_series([qm2], [], q, 0.1)
    direct = sum(
        qpoch_finite(qm2, q, n) * 0.1**n / qpoch_finite(q, q, n) for n in range(3)
    )
    assert abs(val - direct) < 1e-13


def test_sum_series_consecutive_small_rule():
    def terms():
        yield 1.0
        yield 1e-20
        yield 0.5  # a single small term must not stop the sum
        while True:
            yield 0.0

    assert abs(sum_series(terms()) - 1.5) < 1e-15
    with pytest.raises(NonConvergent):
        sum_series(iter(lambda: 1.0, None), TruncationPolicy(max_terms=50))


def test_delta_theta_product_identity():
    # Delta(u, v) = (v - u)(q, qu/v, qv/u; q)_oo
    for _ in range(20):
        q = RNG.uniform(0.05, 0.8)
        u = cmath.rect(RNG.uniform(0.3, 1.2), RNG.uniform(0, 2 * math.pi))
        v = cmath.rect(RNG.uniform(0.3, 1.2), RNG.uniform(0, 2 * math.pi))
        lhs = delta_theta(u, v, q)
        rhs = (v - u) * qpoch_infinite(q, q) * qpoch_infinite(q * u / v, q) * qpoch_infinite(q * v / u, q)
        assert abs(lhs - rhs) <= 1e-11 * max(1.0, abs(rhs))


def test_jackson_qintegral_polynomials():
    # int_0^1 x d_q x = 1/(1+q); int_0^1 x^2 d_q x = 1/(1+q+q^2)
    for q in (0.2, 0.5, 0.8):
        v1 = jackson_qintegral(lambda x: x, 0.0, 1.0, q)
        assert abs(v1 - 1 / (1 + q)) < 1e-12
        v2 = jackson_qintegral(lambda x: x * x, 0.0, 1.0, q)
        assert abs(v2 - 1 / (1 + q + q * q)) < 1e-12
    # q -> 1 approaches the classical integral 1/3 monotonically
    wide = TruncationPolicy(max_terms=100_000)
    errs = [
        abs(jackson_qintegral(lambda x: x * x, 0.0, 1.0, q, wide) - 1 / 3)
        for q in (0.9, 0.99, 0.999)
    ]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-3


def test_q_derivative_and_partial():
    # D_q f = (f(x) - f(qx))/x, so D_q x^n = (1 - q^n) x^{n-1}
    q = 0.4
    d = q_derivative(lambda x: x * x, 0.7, q)
    assert abs(d - (1 - q * q) * 0.7) < 1e-14
    assert abs(q_derivative(lambda x: 3.0, 0.7, q)) == 0.0
    with pytest.raises(DomainError):
        q_derivative(lambda x: x, 0.0, q)
    pt = ParameterPoint(q=q, a=0.3, b=0.2)
    val = q_partial(lambda p: p.a * p.a * p.b, "a", pt)
    assert abs(val - (1 - q * q) * 0.3 * 0.2) < 1e-14


def test_rogers_szego_recurrence():
    # h_{n+1}(a,b) = (a+b) h_n - ab(1-q^n) h_{n-1}
    q = 0.35
    for _ in range(10):
        a = complex(RNG.uniform(-1, 1), RNG.uniform(-1, 1))
        b = complex(RNG.uniform(-1, 1), RNG.uniform(-1, 1))
        for n in range(1, 6):
            lhs = rogers_szego(n + 1, a, b, q)
            rhs = (a + b) * rogers_szego(n, a, b, q) - a * b * (1 - q**n) * rogers_szego(n - 1, a, b, q)
            assert abs(lhs - rhs) < 1e-12


def test_q_hermite_is_rogers_szego_on_circle():
    q = 0.6
    for n in range(7):
        for theta in (0.3, 1.1, 2.5):
            h = q_hermite(n, theta, q)
            rs = rogers_szego(n, cmath.exp(-1j * theta), cmath.exp(1j * theta), q)
            assert abs(h - rs) < 1e-12
    assert abs(q_hermite(1, 0.7, q) - 2 * math.cos(0.7)) < 1e-14


def test_hprod_matches_product_definition():
    q = 0.5
    theta = 1.2
    a = 0.45
    direct = 1.0
    for k in range(200):
        direct *= 1 - 2 * a * (q**k) * math.cos(theta) + a * a * q ** (2 * k)
    assert abs(hprod(theta, [a], q) - direct) < 1e-13
    # h(cos theta; a) = (a e^{i t}, a e^{-i t}; q)_oo
    e = cmath.exp(1j * theta)
    prod = qpoch_infinite(a * e, q) * qpoch_infinite(a / e, q)
    assert abs(hprod(theta, [a], q) - prod.real) < 1e-13


def test_exact_mode_phi_and_products():
    order = 24
    q = fs_var(order)
    a = Fraction(1, 3)
    lhs = phi_series([a], [], q, q / 2)
    rhs = qpoch_infinite(a * q / 2, q) / qpoch_infinite(q / 2, q)
    assert lhs == rhs
