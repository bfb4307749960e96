"""Adaptive quadrature over theta in [0, pi] for the beta-integral and
q-Hermite orthogonality checks (numeric mode only).

The integrands are analytic on [0, pi] for parameter moduli < 1, so an
adaptive-bisection scheme with a fixed-order Gauss-Legendre panel rule
converges quickly.  Integration runs over the full complex integrand; the
results are real up to roundoff and |imag| <= 1e-9 |real| is asserted as a
diagnostic.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from functools import lru_cache

import numpy as np

from .errors import DomainError, MaxPanelsExceeded
from .identities import IdentityReport
from .qcore import (
    DEFAULT_POLICY,
    hprod,
    phi_series,
    q_hermite,
    qpoch_finite,
    qpoch_infinite,
    sum_series,
)

__all__ = [
    "QuadratureConfig",
    "DEFAULT_QUAD",
    "integrate_theta",
    "askey_wilson_integral",
    "liu_beta_integral",
    "qhermite_orthogonality",
    "qhermite_gf_check",
]


@dataclasses.dataclass(frozen=True)
class QuadratureConfig:
    method: str = "adaptive-bisection"
    panel_order: int = 24
    abs_tol: float = 1e-10
    rel_tol: float = 1e-12
    max_panels: int = 4000

    def __post_init__(self):
        if self.method != "adaptive-bisection":
            raise DomainError(f"unknown quadrature method {self.method!r}")
        if self.panel_order < 2 or self.max_panels < 1:
            raise DomainError("panel_order must be >= 2 and max_panels >= 1")
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise DomainError("tolerances must be positive")


DEFAULT_QUAD = QuadratureConfig()


@lru_cache(maxsize=32)
def _panel_rule(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return tuple(nodes.tolist()), tuple(weights.tolist())


def _panel(f, lo, hi, order):
    nodes, weights = _panel_rule(order)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    total = 0.0
    for x, w in zip(nodes, weights):
        total = total + w * f(mid + half * x)
    return half * total


def integrate_theta(f, config=DEFAULT_QUAD):
    """Integral of f over [0, pi] with an adaptive bisection scheme.

    Each interval is accepted once the whole-panel estimate agrees with
    the sum over its two halves to the interval's share of the tolerance;
    returns (value, err_estimate).
    """
    order = config.panel_order
    rough = _panel(f, 0.0, math.pi, order)
    tol = max(config.abs_tol, config.rel_tol * abs(rough))
    total = 0.0
    err = 0.0
    panels = 0
    stack = [(0.0, math.pi, rough)]
    while stack:
        lo, hi, whole = stack.pop()
        panels += 1
        if panels > config.max_panels:
            raise MaxPanelsExceeded(f"exceeded {config.max_panels} panels")
        mid = 0.5 * (lo + hi)
        left = _panel(f, lo, mid, order)
        right = _panel(f, mid, hi, order)
        delta = abs(whole - (left + right))
        if delta <= tol * (hi - lo) / math.pi:
            total = total + left + right
            err += delta
        else:
            stack.append((lo, mid, left))
            stack.append((mid, hi, right))
    return total, err


def _imag_check(value, label):
    re, im = value.real, abs(value.imag)
    if im > 1e-9 * max(abs(re), 1e-30):
        raise DomainError(f"{label}: imaginary part {im} exceeds diagnostic bound")
    return value


def _aw_weight(theta, q, policy):
    # h(cos 2 theta; 1)
    return hprod(2.0 * theta, [1.0], q, policy)


def askey_wilson_integral(a, b, c, d, q, policy=DEFAULT_POLICY, config=DEFAULT_QUAD):
    """Integral of h(cos2t;1)/h(cost;a,b,c,d) over [0, pi]."""
    if max(abs(a), abs(b), abs(c), abs(d)) >= 1:
        raise DomainError("askey_wilson_integral requires moduli < 1")

    def f(theta):
        return _aw_weight(theta, q, policy) / hprod(theta, [a, b, c, d], q, policy)

    value, _ = integrate_theta(f, config)
    return _imag_check(complex(value), "askey_wilson_integral")


def liu_beta_integral(a, b, c, d, r, q, policy=DEFAULT_POLICY, config=DEFAULT_QUAD):
    """Beta integral extending the Askey-Wilson integral by (c/r; ac, bc).

    Integrand: h(cos2t;1)/h(cost;a,b,c,d) times the {}_3phi_2 with
    numerator (c e^{it}, c e^{-it}, c/r) at argument abr/c; r = c makes
    the series identically 1 and reduces to askey_wilson_integral.
    """
    if c == 0:
        raise DomainError("liu_beta_integral requires c != 0; use askey_wilson_integral")
    if max(abs(a), abs(b), abs(c), abs(d), abs(a * b * r / c)) >= 1:
        raise DomainError("liu_beta_integral requires moduli < 1 including |abr/c|")

    z = a * b * r / c

    def f(theta):
        e = cmath.exp(1j * theta)
        inner = phi_series([c * e, c / e, c / r], [a * c, b * c], q, z, policy)
        return _aw_weight(theta, q, policy) / hprod(theta, [a, b, c, d], q, policy) * inner

    value, _ = integrate_theta(f, config)
    return _imag_check(complex(value), "liu_beta_integral")


def qhermite_orthogonality(m, n, q, config=DEFAULT_QUAD, policy=DEFAULT_POLICY):
    """Integral of H_m H_n h(cos2t;1) over [0, pi].

    Equals 2 pi (q;q)_n delta_{m,n} / (q;q)_oo.
    """
    if m < 0 or n < 0:
        raise DomainError("m and n must be nonnegative")

    def f(theta):
        return (
            q_hermite(m, theta, q)
            * q_hermite(n, theta, q)
            * _aw_weight(theta, q, policy)
        )

    value, _ = integrate_theta(f, config)
    return value


def qhermite_gf_check(t, theta, q, policy=DEFAULT_POLICY, tolerance=1e-10):
    """Generating function check: sum H_n t^n/(q;q)_n vs 1/((t e^{it}, t e^{-it}); q)_oo."""
    if abs(t) >= 1:
        raise DomainError("qhermite_gf_check requires |t| < 1")

    def terms():
        n = 0
        tn = 1.0
        while True:
            yield q_hermite(n, theta, q) * tn / qpoch_finite(q, q, n)
            n += 1
            tn = tn * t

    lhs = sum_series(terms(), policy)
    e = cmath.exp(1j * theta)
    rhs = 1.0 / (qpoch_infinite(t * e, q, policy) * qpoch_infinite(t / e, q, policy))
    rhs = _imag_check(complex(rhs), "qhermite_gf_check").real
    abs_err = abs(lhs - rhs)
    rel_err = abs_err / max(abs(lhs), abs(rhs), 1e-300)
    return IdentityReport(
        identity="QHERMITE_GF",
        point={"t": t, "theta": theta, "q": q},
        lhs=lhs,
        rhs=rhs,
        abs_err=abs_err,
        rel_err=rel_err,
        passed=rel_err <= tolerance,
        mode="numeric",
    )
