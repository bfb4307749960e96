"""Adaptive theta-quadrature and the weighted-integral closed forms."""

import math
import random

import pytest

from qseries.errors import DomainError, MaxPanelsExceeded
from qseries.qcore import qpoch_finite, qpoch_infinite
from qseries.quadrature import (
    DEFAULT_QUAD,
    QuadratureConfig,
    askey_wilson_integral,
    integrate_theta,
    liu_beta_integral,
    qhermite_gf_check,
    qhermite_orthogonality,
)

RNG = random.Random(4242)


def test_integrate_theta_trivial_integrands():
    val, err = integrate_theta(lambda t: 1.0)
    assert abs(val - math.pi) < 1e-12
    for k in (1, 2, 5):
        val, _ = integrate_theta(lambda t, k=k: math.cos(k * t))
        assert abs(val) < 1e-11
    val, _ = integrate_theta(lambda t: math.cos(t) ** 2)
    assert abs(val - math.pi / 2) < 1e-12


def test_integrate_theta_panel_order_invariance():
    f = lambda t: math.exp(math.sin(3 * t))
    base, _ = integrate_theta(f, DEFAULT_QUAD)
    doubled, _ = integrate_theta(f, QuadratureConfig(panel_order=48))
    assert abs(base - doubled) < 1e-11


def test_integrate_theta_max_panels():
    cfg = QuadratureConfig(max_panels=2, abs_tol=1e-14, rel_tol=1e-15)
    with pytest.raises(MaxPanelsExceeded):
        integrate_theta(lambda t: math.exp(math.sin(20 * t)), cfg)


def test_quadrature_config_validation():
    with pytest.raises(DomainError):
        QuadratureConfig(method="simpson")
    with pytest.raises(DomainError):
        QuadratureConfig(panel_order=1)
    with pytest.raises(DomainError):
        QuadratureConfig(abs_tol=0.0)


def _aw_closed(a, b, c, d, q):
    num = qpoch_infinite(a * b * c * d, q)
    den = 1.0
    for w in (q, a * b, a * c, a * d, b * c, b * d, c * d):
        den *= qpoch_infinite(w, q)
    return 2 * math.pi * num / den


def test_askey_wilson_closed_form():
    for _ in range(6):
        q = RNG.uniform(0.2, 0.7)
        a, b, c, d = (RNG.uniform(-0.6, 0.6) for _ in range(4))
        lhs = askey_wilson_integral(a, b, c, d, q).real
        assert abs(lhs - _aw_closed(a, b, c, d, q)) <= 1e-10 * abs(lhs)
    with pytest.raises(DomainError):
        askey_wilson_integral(1.0, 0.1, 0.1, 0.1, 0.5)


def test_beta_integral_closed_form():
    for _ in range(6):
        q = RNG.uniform(0.2, 0.7)
        a, b, d = (RNG.uniform(-0.6, 0.6) for _ in range(3))
        c = RNG.uniform(0.15, 0.6) * (1 if RNG.random() < 0.5 else -1)
        r = RNG.uniform(0.1, 0.8) * min(0.8 * abs(c) / max(abs(a * b), 1e-12), 1.0)
        lhs = liu_beta_integral(a, b, c, d, r, q).real
        num = qpoch_infinite(a * b * d * r, q)
        den = 1.0
        for w in (q, a * c, a * d, b * c, b * d, c * d, a * b * r / c):
            den *= qpoch_infinite(w, q)
        rhs = 2 * math.pi * num / den
        assert abs(lhs - rhs) <= 1e-9 * abs(rhs)


def test_beta_integral_reduces_to_askey_wilson_at_r_eq_c():
    q, a, b, c, d = 0.5, 0.3, -0.2, 0.4, 0.25
    lhs = liu_beta_integral(a, b, c, d, c, q).real
    rhs = askey_wilson_integral(a, b, c, d, q).real
    assert abs(lhs - rhs) <= 1e-11 * abs(rhs)
    with pytest.raises(DomainError):
        liu_beta_integral(a, b, 0.0, d, 0.1, q)


def test_qhermite_orthogonality_values():
    for q in (0.3, 0.7):
        pq = qpoch_infinite(q, q)
        for m in range(5):
            for n in range(5):
                val = qhermite_orthogonality(m, n, q)
                if m == n:
                    expect = 2 * math.pi * qpoch_finite(q, q, n) / pq
                    assert abs(val - expect) <= 1e-9 * expect
                else:
                    assert abs(val) <= 1e-10
    with pytest.raises(DomainError):
        qhermite_orthogonality(-1, 0, 0.5)


def test_qhermite_generating_function():
    for t in (0.3, -0.55, 0.8):
        rep = qhermite_gf_check(t, 1.1, 0.45)
        assert rep.passed and rep.rel_err <= 1e-10
    with pytest.raises(DomainError):
        qhermite_gf_check(1.0, 0.5, 0.5)
