"""Registry of q-series identities with paired LHS/RHS evaluators.

Each entry carries the identity's parameter slots, its convergence-domain
predicate, a citation anchor naming the classical result, and evaluators
for both sides.  Evaluators accept a :class:`~qseries.qcore.ParameterPoint`
whose ``q`` is either numeric (complex, |q| < 1) or the formal variable of
an exact truncated series, so the same registry drives floating-point and
coefficient-exact certification.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
import random
from fractions import Fraction

import mpmath

from .errors import DomainError, NonConvergent, QSeriesError, SamplingExhausted
from .exactseries import FormalSeries, fs_var, geometric_tail
from .qcore import (
    DEFAULT_POLICY,
    ParameterPoint,
    TruncationPolicy,
    delta_theta,
    is_formal,
    jackson_qintegral,
    phi_series,
    q_partial,
    qpoch_infinite_cached as qp,
    sum_series,
)

__all__ = [
    "IdentityEntry",
    "IdentityReport",
    "REGISTRY",
    "rho",
    "l_function",
    "sears_transform_check",
    "evaluate_lhs",
    "evaluate_rhs",
    "check_identity",
    "sample_domain",
]

SAMPLE_MARGIN = 0.8  # constrained moduli stay at <= 0.8 of their bound
POLE_DIST = 1e-3  # minimum distance of any denominator factor from 0


# -- helpers -----------------------------------------------------------


def _one(q):
    return FormalSeries.constant(1, q.order) if is_formal(q) else 1.0


def _qpm(values, q, policy):
    out = _one(q)
    for a in values:
        out = out * qp(a, q, policy)
    return out


def _min_factor(w, q, kmax=500):
    """min over k >= 0 of |1 - w q^k|; once |w q^k| < 1/2 the factors stay > 1/2."""
    best = math.inf
    wk = complex(w)
    for _ in range(kmax):
        best = min(best, abs(1 - wk))
        if abs(wk) < 0.5:
            break
        wk *= q
    return best


def _cu(rng, lo, hi):
    """Complex number with modulus uniform in [lo, hi], angle uniform."""
    return cmath.rect(rng.uniform(lo, hi), rng.uniform(0.0, 2 * math.pi))


# A few series (the confluent-limit family) cancel from O(1) terms down to
# results of size (q;q)_oo^3, which near q = 0.8 is below what double
# precision can resolve to 1e-9; those sums run under mpmath instead.
_MP_DPS = 60
_MP_TAIL = 1e-40


def _mp_sum(term_iter, max_terms=4000):
    total = mpmath.mpc(0)
    small = 0
    count = 0
    for term in term_iter:
        total += term
        count += 1
        if count > max_terms:
            raise NonConvergent(f"series did not settle within {max_terms} terms")
        if abs(term) < _MP_TAIL * max(1.0, abs(total)):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
    raise NonConvergent("empty series")


def _uv_ok(u, v, q):
    """Delta(u, v) stays away from its zeros."""
    if u == 0 or v == 0:
        return False
    return _min_factor(u / v, q) >= 0.05 and _min_factor(q * v / u, q) >= 0.05


def _qintegral_conditioned(numer, denom, rhs_fn, cap=300.0):
    """Guard against catastrophic cancellation in the Jackson sums.

    The q-integral is a two-sided sum whose leading terms are the
    integrand at x = u and x = v; when the closed-form value is much
    smaller than those terms the difference loses that many digits.
    ``numer(pt, x)`` / ``denom(pt, x)`` list the integrand's product
    arguments apart from the always-present (qx/u, qx/v; q)_oo pair.
    """

    def cond(pt):
        q = pt.q
        scale = 0.0
        for end, other in ((pt.v, pt.u), (pt.u, pt.v)):
            qn = 1.0
            for _ in range(13):  # term magnitudes can peak well inside the sum
                x = end * qn
                t = abs(1 - q) * qn * abs(end)
                t *= abs(qp(q * x / end, q)) * abs(qp(q * x / other, q))
                for w in numer(pt, x):
                    t *= abs(qp(w, q))
                for w in denom(pt, x):
                    t /= abs(qp(w, q))
                scale = max(scale, t)
                qn *= q
        rhs = abs(rhs_fn(pt, DEFAULT_POLICY))
        return rhs > 0 and scale / rhs <= cap

    return cond


# -- named composite functions ----------------------------------------


def rho(pt, policy=DEFAULT_POLICY):
    """Double q-series rho(a, b, c, d, r, u, v).

    Outer sum over n of
    v (q/du, acuv, bcuv; q)_n (dv)^n / (av, bv, cv; q)_{n+1}
    times the inner {}_3phi_2 at argument abcruv/q; the inner series is
    evaluated freshly for every outer index.
    """
    q, a, b, c, d, r, u, v = pt.q, pt.a, pt.b, pt.c, pt.d, pt.r, pt.u, pt.v
    if d == 0 or r == 0 or c == 0 or u == 0 or v == 0:
        raise DomainError("rho requires c, d, r, u, v all nonzero")
    z = a * b * c * r * u * v / q

    def terms():
        coeff = v / ((1 - a * v) * (1 - b * v) * (1 - c * v))
        qn = _one(q)
        while True:
            qn1 = qn * q
            inner = phi_series(
                [qn1, v * qn1 / r, q / (c * u)],
                [a * v * qn1, b * v * qn1],
                q,
                z,
                policy,
            )
            yield coeff * inner
            coeff = (
                coeff
                * (1 - qn1 / (d * u))
                * (1 - a * c * u * v * qn)
                * (1 - b * c * u * v * qn)
                * (d * v)
                / ((1 - a * v * qn1) * (1 - b * v * qn1) * (1 - c * v * qn1))
            )
            qn = qn1

    return sum_series(terms(), policy)


def l_function(pt, policy=DEFAULT_POLICY):
    """Kernel function L(a, b, u, v, s, t) solving the q-PDE in (a, b)."""
    q, a, b, u, v, s, t = pt.q, pt.a, pt.b, pt.u, pt.v, pt.s, pt.t
    z = a * b * s * t * u / v
    pref = (
        qp(a * v, q, policy)
        * qp(b * v, q, policy)
        * qp(z, q, policy)
        / (
            qp(a * s, q, policy)
            * qp(a * t, q, policy)
            * qp(a * u, q, policy)
            * qp(b * s, q, policy)
            * qp(b * t, q, policy)
            * qp(b * u, q, policy)
        )
    )
    return pref * phi_series([v / s, v / t, v / u], [a * v, b * v], q, z, policy)


# -- shared series pieces ----------------------------------------------


def _ram_half(ratio, w, q, policy):
    """sum_n (-1)^n q^{n(n+1)/2} ratio^n / (w; q)_{n+1}."""

    def terms():
        term = _one(q) / (1 - w * _one(q))
        qn1 = q
        while True:
            yield term
            term = term * (-(qn1) * ratio) / (1 - w * qn1)
            qn1 = qn1 * q

    return sum_series(terms(), policy, formal=is_formal(q))


def _recip5_half_numeric(a, c, d, u, v, q, policy):
    """sum_n (q/du, acuv; q)_n (dv)^n / (av, cv; q)_{n+1}."""

    def terms():
        term = 1.0 / ((1 - a * v) * (1 - c * v))
        qn = 1.0
        while True:
            yield term
            qn1 = qn * q
            term = (
                term
                * (1 - qn1 / (d * u))
                * (1 - a * c * u * v * qn)
                * (d * v)
                / ((1 - a * v * qn1) * (1 - c * v * qn1))
            )
            qn = qn1

    return sum_series(terms(), policy)


def _recip5_half_exact(a, c, d, u, v, q):
    """Exact version; the terms become exactly geometric with ratio dv
    once every q^n shift has vanished modulo the truncation order, so the
    tail is summed in closed form."""
    order = q.order
    one = FormalSeries.constant(1, order)
    dv = Fraction(d) * Fraction(v)
    term = one / ((1 - Fraction(a) * Fraction(v)) * (1 - Fraction(c) * Fraction(v)))
    total = FormalSeries.constant(0, order)
    qn = one
    for _ in range(order + 1):
        total = total + term
        qn1 = qn * q
        term = (
            term
            * (one - qn1 / (Fraction(d) * Fraction(u)))
            * (one - (Fraction(a) * Fraction(c) * Fraction(u) * Fraction(v)) * qn)
            * dv
            / ((one - (Fraction(a) * Fraction(v)) * qn1) * (one - (Fraction(c) * Fraction(v)) * qn1))
        )
        qn = qn1
    # term now holds t_{order+1} = dv * t_order exactly
    return total + term / (1 - dv)


# -- identity evaluators ----------------------------------------------


def _jtp_lhs(pt, P):
    q, x = pt.q, pt.x
    return qp(q, q, P) * qp(x, q, P) * qp(q / x, q, P)


def _jtp_rhs(pt, P):
    q, x = pt.q, pt.x
    formal = is_formal(q)

    def terms():
        yield _one(q)
        tp = _one(q)
        tm = _one(q)
        qn_m = _one(q)  # q^{n-1}
        qn = q  # q^{n}
        while True:
            tp = tp * (-(qn_m)) * x
            tm = tm * (-(qn)) / x
            yield tp + tm
            qn_m = qn
            qn = qn * q

    return sum_series(terms(), P, formal=formal)


def _aa_lhs(pt, P):
    q, a, b, u, v = pt.q, pt.a, pt.b, pt.u, pt.v

    def f(x):
        return qp(q * x / u, q, P) * qp(q * x / v, q, P) / (qp(a * x, q, P) * qp(b * x, q, P))

    return jackson_qintegral(f, u, v, q, P)


def _aa_rhs(pt, P):
    q, a, b, u, v = pt.q, pt.a, pt.b, pt.u, pt.v
    return (
        (1 - q)
        * delta_theta(u, v, q, P)
        * qp(a * b * u * v, q, P)
        / _qpm([a * u, b * u, a * v, b * v], q, P)
    )


def _asv_lhs(pt, P):
    q, a, b, c, u, v = pt.q, pt.a, pt.b, pt.c, pt.u, pt.v

    def f(x):
        return (
            qp(q * x / u, q, P)
            * qp(q * x / v, q, P)
            * qp(a * b * c * u * v * x, q, P)
            / _qpm([a * x, b * x, c * x], q, P)
        )

    return jackson_qintegral(f, u, v, q, P)


def _asv_rhs(pt, P):
    q, a, b, c, u, v = pt.q, pt.a, pt.b, pt.c, pt.u, pt.v
    num = _qpm([a * b * u * v, a * c * u * v, b * c * u * v], q, P)
    den = _qpm([a * u, b * u, c * u, a * v, b * v, c * v], q, P)
    return (1 - q) * delta_theta(u, v, q, P) * num / den


def _qint6_lhs(pt, P):
    q, a, b, c, r, u, v = pt.q, pt.a, pt.b, pt.c, pt.r, pt.u, pt.v

    def f(x):
        return (
            qp(q * x / u, q, P)
            * qp(q * x / v, q, P)
            * qp(a * b * r * x, q, P)
            / _qpm([a * x, b * x, c * x], q, P)
        )

    return jackson_qintegral(f, u, v, q, P)


def _qint_rhs_common(pt, P):
    """Shared RHS of the six/seven-parameter q-integral formulas
    up to the extra (aduv, cduv) factors of the seven-parameter case."""
    q, a, b, c, r, u, v = pt.q, pt.a, pt.b, pt.c, pt.r, pt.u, pt.v
    inner = phi_series(
        [c * u, c * v, c * u * v / r],
        [a * c * u * v, b * c * u * v],
        q,
        a * b * r / c,
        P,
    )
    return inner


def _qint6_rhs(pt, P):
    q, a, b, c, r, u, v = pt.q, pt.a, pt.b, pt.c, pt.r, pt.u, pt.v
    num = _qpm([a * c * u * v, b * c * u * v, a * b * r / c], q, P)
    den = _qpm([a * u, a * v, b * u, b * v, c * u, c * v], q, P)
    return (1 - q) * delta_theta(u, v, q, P) * num / den * _qint_rhs_common(pt, P)


def _qint7_lhs(pt, P):
    q, a, b, c, d, r, u, v = pt.q, pt.a, pt.b, pt.c, pt.d, pt.r, pt.u, pt.v

    def f(x):
        pref = (
            qp(q * x / u, q, P)
            * qp(q * x / v, q, P)
            * qp(a * c * d * u * v * x, q, P)
            * qp(a * b * r * x, q, P)
            / _qpm([a * x, b * x, c * x, d * x], q, P)
        )
        inner = phi_series(
            [a * r, a * x, c * x],
            [a * c * d * u * v * x, a * b * r * x],
            q,
            b * d * u * v,
            P,
        )
        return pref * inner

    return jackson_qintegral(f, u, v, q, P)


def _qint7_rhs(pt, P):
    q, a, b, c, d, r, u, v = pt.q, pt.a, pt.b, pt.c, pt.d, pt.r, pt.u, pt.v
    num = _qpm(
        [a * c * u * v, a * d * u * v, b * c * u * v, c * d * u * v, a * b * r / c], q, P
    )
    den = _qpm([a * u, a * v, b * u, b * v, c * u, c * v, d * u, d * v], q, P)
    return (1 - q) * delta_theta(u, v, q, P) * num / den * _qint_rhs_common(pt, P)


def _qint7r_lhs(pt, P):
    q, a, b, c, d, u, v = pt.q, pt.a, pt.b, pt.c, pt.d, pt.u, pt.v

    def f(x):
        pref = (
            qp(q * x / u, q, P)
            * qp(q * x / v, q, P)
            * qp(a * b * c * u * v * x, q, P)
            * qp(a * c * d * u * v * x, q, P)
            / _qpm([a * x, b * x, c * x, d * x], q, P)
        )
        inner = phi_series(
            [a * c * u * v, a * x, c * x],
            [a * b * c * u * v * x, a * c * d * u * v * x],
            q,
            b * d * u * v,
            P,
        )
        return pref * inner

    return jackson_qintegral(f, u, v, q, P)


def _qint7r_rhs(pt, P):
    q, a, b, c, d, u, v = pt.q, pt.a, pt.b, pt.c, pt.d, pt.u, pt.v
    num = _qpm(
        [a * b * u * v, a * c * u * v, a * d * u * v, b * c * u * v, c * d * u * v], q, P
    )
    den = _qpm([a * u, a * v, b * u, b * v, c * u, c * v, d * u, d * v], q, P)
    return (1 - q) * delta_theta(u, v, q, P) * num / den


def _sears_equiv_lhs(pt, P):
    q, a, b, c, d, r, u, v = pt.q, pt.a, pt.b, pt.c, pt.d, pt.r, pt.u, pt.v

    def f(x):
        pref = (
            qp(q * x / u, q, P)
            * qp(q * x / v, q, P)
            * qp(a * c * d * u * v * x, q, P)
            * qp(b * c * d * u * v * x, q, P)
            / _qpm([a * x, b * x, c * x, d * x], q, P)
        )
        inner = phi_series(
            [c * d * u * v, c * d * u * v * x / r, c * x],
            [a * c * d * u * v * x, b * c * d * u * v * x],
            q,
            a * b * r / c,
            P,
        )
        return pref * inner

    return jackson_qintegral(f, u, v, q, P)


def _sears_equiv_rhs(pt, P):
    q, a, b, c, d, r, u, v = pt.q, pt.a, pt.b, pt.c, pt.d, pt.r, pt.u, pt.v
    num = _qpm(
        [a * c * u * v, a * d * u * v, b * c * u * v, b * d * u * v, c * d * u * v], q, P
    )
    den = _qpm([a * u, a * v, b * u, b * v, c * u, c * v, d * u, d * v], q, P)
    return (1 - q) * delta_theta(u, v, q, P) * num / den * _qint_rhs_common(pt, P)


def _ram_lhs(pt, P):
    q, a, u, v = pt.q, pt.a, pt.u, pt.v
    return qp(q, q, P) * qp(v / u, q, P) * qp(u / v, q, P) / (qp(a * u, q, P) * qp(a * v, q, P))


def _ram_rhs(pt, P):
    q, a, u, v = pt.q, pt.a, pt.u, pt.v
    s1 = _ram_half(v / u, a * v, q, P)
    s2 = _ram_half(u / v, a * u, q, P)
    return (1 - v / u) * s1 + (1 - u / v) * s2


def _recip5_lhs(pt, P):
    q, a, c, d, u, v = pt.q, pt.a, pt.c, pt.d, pt.u, pt.v
    if is_formal(q):
        return v * _recip5_half_exact(a, c, d, u, v, q) - u * _recip5_half_exact(
            a, c, d, v, u, q
        )
    return v * _recip5_half_numeric(a, c, d, u, v, q, P) - u * _recip5_half_numeric(
        a, c, d, v, u, q, P
    )


def _recip5_rhs(pt, P):
    q, a, c, d, u, v = pt.q, pt.a, pt.c, pt.d, pt.u, pt.v
    num = _qpm([a * d * u * v, a * c * u * v, c * d * u * v], q, P)
    den = _qpm([a * u, a * v, c * u, c * v, d * u, d * v], q, P)
    return delta_theta(u, v, q, P) * num / den


def _lambert_half(w, cw, q, P):
    """sum_n w^n / (1 - cw q^n)."""

    def terms():
        wn = _one(q)
        qn = _one(q)
        while True:
            yield wn / (1 - cw * qn)
            wn = wn * w
            qn = qn * q

    return sum_series(terms(), P, formal=is_formal(q))


def _lambert_lhs(pt, P):
    q, c, u, v = pt.q, pt.c, pt.u, pt.v
    return v * _lambert_half(q / (c * u), c * v, q, P) - u * _lambert_half(
        q / (c * v), c * u, q, P
    )


def _lambert_rhs(pt, P):
    q, c, u, v = pt.q, pt.c, pt.u, pt.v
    num = qp(q, q, P) * qp(q, q, P) * qp(u / v, q, P) * qp(q * v / u, q, P)
    den = _qpm([c * u, c * v, q / (c * u), q / (c * v)], q, P)
    return v * num / den


def _recip7_lhs(pt, P):
    return rho(pt, P) - rho(pt.swap_uv(), P)


def _recip7_rhs(pt, P):
    q, a, b, c, d, r, u, v = pt.q, pt.a, pt.b, pt.c, pt.d, pt.r, pt.u, pt.v
    num = _qpm(
        [
            a * c * u * v,
            a * d * u * v,
            b * c * u * v,
            b * d * u * v,
            c * d * u * v,
            a * b * r / d,
        ],
        q,
        P,
    )
    den = _qpm(
        [a * u, a * v, b * u, b * v, c * u, c * v, d * u, d * v, a * b * c * r * u * v / q],
        q,
        P,
    )
    inner = phi_series(
        [d * u, d * v, d * u * v / r], [a * d * u * v, b * d * u * v], q, a * b * r / d, P
    )
    return delta_theta(u, v, q, P) * num / den * inner


def _recip6_lhs(pt, P):
    pt_r = pt.replace(r=pt.d * pt.u * pt.v)
    return rho(pt_r, P) - rho(pt_r.swap_uv(), P)


def _recip6_rhs(pt, P):
    q, a, b, c, d, u, v = pt.q, pt.a, pt.b, pt.c, pt.d, pt.u, pt.v
    num = _qpm(
        [a * b * u * v, a * c * u * v, a * d * u * v, b * c * u * v, b * d * u * v, c * d * u * v],
        q,
        P,
    )
    den = _qpm(
        [a * u, a * v, b * u, b * v, c * u, c * v, d * u, d * v, a * b * c * d * u * u * v * v / q],
        q,
        P,
    )
    return delta_theta(u, v, q, P) * num / den


def _qbin_lhs(pt, P):
    return phi_series([pt.a], [], pt.q, pt.z, P)


def _qbin_rhs(pt, P):
    q, a, z = pt.q, pt.a, pt.z
    return qp(a * z, q, P) / qp(z, q, P)


def _qmehler_lhs(pt, P):
    q, a, b, s, t, z = pt.q, pt.a, pt.b, pt.s, pt.t, pt.z

    def terms():
        hm, h = 0.0, _one(q)
        gm, g = 0.0, _one(q)
        qn = _one(q)  # q^n
        fac = _one(q)  # (q;q)_n
        zn = _one(q)
        while True:
            yield h * g * zn / fac
            hp = (a + b) * h - a * b * (1 - qn) * hm
            gp = (s + t) * g - s * t * (1 - qn) * gm
            hm, h = h, hp
            gm, g = g, gp
            qn = qn * q
            fac = fac * (1 - qn)
            zn = zn * z

    return sum_series(terms(), P, formal=is_formal(q))


def _qmehler_rhs(pt, P):
    q, a, b, s, t, z = pt.q, pt.a, pt.b, pt.s, pt.t, pt.z
    return qp(a * b * s * t * z * z, q, P) / _qpm([a * s * z, a * t * z, b * s * z, b * t * z], q, P)


def _qpde_lhs(pt, P):
    return q_partial(lambda p: l_function(p, P), "a", pt)


def _qpde_rhs(pt, P):
    return q_partial(lambda p: l_function(p, P), "b", pt)


def _sears_lhs(pt, P):
    # slot map: numerator parameters (a, b, c), denominator parameters (u, v)
    q, a, b, c, u, v = pt.q, pt.a, pt.b, pt.c, pt.u, pt.v
    return phi_series([a, b, c], [u, v], q, u * v / (a * b * c), P)


def _sears_rhs(pt, P):
    q, a, b, c, u, v = pt.q, pt.a, pt.b, pt.c, pt.u, pt.v
    pref = (
        qp(v / c, q, P)
        * qp(u * v / (a * b), q, P)
        / (qp(v, q, P) * qp(u * v / (a * b * c), q, P))
    )
    return pref * phi_series([u / a, u / b, c], [u, u * v / (a * b)], q, v / c, P)


def _limit_a_lhs(pt, P):
    with mpmath.workdps(_MP_DPS):
        q = mpmath.mpc(pt.q)
        a = mpmath.mpc(pt.a)
        c = mpmath.mpc(pt.c)
        d = mpmath.mpc(pt.d)

        def terms():
            pf = 1 / ((1 - a) * (1 - c))  # (q/d, ac; q)_n d^n / (a, c; q)_{n+1}
            sa = a / (1 - a)
            sc = c / (1 - c)
            sd = mpmath.mpc(0)
            qn = mpmath.mpc(1)
            n = 0
            while True:
                yield pf * (n + 1 + sa + sc - sd)
                qn1 = qn * q
                pf = pf * (1 - qn1 / d) * (1 - a * c * qn) * d / ((1 - a * qn1) * (1 - c * qn1))
                sa = sa + a * qn1 / (1 - a * qn1)
                sc = sc + c * qn1 / (1 - c * qn1)
                sd = sd + qn1 / (d - qn1)
                qn = qn1
                n += 1

        return complex(_mp_sum(terms(), P.max_terms))


def _limit_a_rhs(pt, P):
    q, a, c, d = pt.q, pt.a, pt.c, pt.d
    pq = qp(q, q, P)
    num = pq * pq * pq * _qpm([a * c, a * d, c * d], q, P)
    den = (qp(a, q, P) * qp(c, q, P) * qp(d, q, P)) ** 2
    return num / den


def _limit_euler_lhs(pt, P):
    q, d = pt.q, pt.d
    if is_formal(q):
        return _limit_euler_lhs_exact(d, q)
    with mpmath.workdps(_MP_DPS):
        qm = mpmath.mpc(q)
        dm = mpmath.mpc(d)

        def terms():
            pf = mpmath.mpc(1)  # (q/d; q)_n d^n
            sd = mpmath.mpc(0)
            qn = mpmath.mpc(1)
            n = 0
            while True:
                yield pf * (n + 1 - sd)
                qn1 = qn * qm
                pf = pf * (1 - qn1 / dm) * dm
                sd = sd + qn1 / (dm - qn1)
                qn = qn1
                n += 1

        return complex(_mp_sum(terms(), P.max_terms))


def _limit_euler_lhs_exact(d, q):
    """Exact sum with an arithmetic-geometric closed-form tail: once every
    q^n shift vanishes modulo the order, the terms are P d^n (n+1 - S)."""
    order = q.order
    one = FormalSeries.constant(1, order)
    d = Fraction(d)
    pf = one  # (q/d; q)_n, stabilizes for n >= order
    sd = FormalSeries.constant(0, order)
    total = FormalSeries.constant(0, order)
    dn = Fraction(1)
    qn = one
    for n in range(order + 1):
        total = total + pf * dn * ((n + 1) - sd)
        qn1 = qn * q
        pf = pf * (one - qn1 / d)
        sd = sd + qn1 / (d * (one - qn1 / d))  # q^{n+1} / (d - q^{n+1})
        dn = dn * d
        qn = qn1
    start = order + 1
    geo = d**start / (1 - d)
    lin = d**start * (Fraction(start + 1) / (1 - d) + d / (1 - d) ** 2)
    return total + pf * lin - pf * sd * geo


def _limit_euler_rhs(pt, P):
    q, d = pt.q, pt.d
    pq = qp(q, q, P)
    return pq * pq * pq / (qp(d, q, P) * qp(d, q, P))


def _dnegq_lhs(pt, P):
    with mpmath.workdps(_MP_DPS):
        q = mpmath.mpc(pt.q)

        def terms():
            yield mpmath.mpc(1)
            pf = mpmath.mpc(1)  # (-q; q)_{n-1}
            inner = mpmath.mpc(0)  # sum_{k=1}^{n-1} q^k / (1 + q^k)
            mqn = mpmath.mpc(1)  # (-q)^n
            qn = mpmath.mpc(1)
            n = 0
            while True:
                n += 1
                mqn = mqn * (-q)
                yield mqn * pf * (2 * n + 3 + 2 * inner)
                qn = qn * q
                pf = pf * (1 + qn)
                inner = inner + qn / (1 + qn)

        return complex(_mp_sum(terms(), P.max_terms))


def _dnegq_rhs(pt, P):
    q = pt.q
    pq = qp(q, q, P)
    pmq = qp(-q, q, P)
    return pq * pq * pq / (pmq * pmq)


def _lambert4_lhs(pt, P):
    q, a = pt.q, pt.a
    pq = qp(q, q, P)
    return pq**4 / (qp(q * a, q, P) ** 2 * qp(q / a, q, P) ** 2)


def _lambert4_rhs(pt, P):
    with mpmath.workdps(_MP_DPS):
        q = mpmath.mpc(pt.q)
        a = mpmath.mpc(pt.a)

        def terms(w, pole):
            # sum_{n>=1} n w^n / (1 - pole q^n)
            wn = mpmath.mpc(1)
            qn = mpmath.mpc(1)
            n = 0
            while True:
                n += 1
                wn = wn * w
                qn = qn * q
                yield n * wn / (1 - pole * qn)

        s1 = _mp_sum(terms(q / a, a), P.max_terms)
        s2 = _mp_sum(terms(q * a, 1 / a), P.max_terms)
        return complex(1 + (1 - a) ** 2 * s1 + (1 - 1 / a) ** 2 * s2)


def _theta_sq_sum(q, P):
    """sum_{n in Z} q^{n^2}, numeric or exact."""
    formal = is_formal(q)
    if formal:
        order = q.order
        coeffs = [Fraction(0)] * order
        coeffs[0] = Fraction(1)
        n = 1
        while n * n < order:
            coeffs[n * n] += 2
            n += 1
        return FormalSeries(coeffs, order)

    def terms():
        yield 1.0
        n = 1
        while True:
            yield 2.0 * q ** (n * n)
            n += 1

    return sum_series(terms(), P)


def _four_square_lhs(pt, P):
    return _theta_sq_sum(pt.q, P) ** 4


def _four_square_rhs(pt, P):
    q = pt.q
    if is_formal(q):
        order = q.order
        coeffs = [Fraction(0)] * order
        coeffs[0] = Fraction(1)
        for n in range(1, order):
            for e in range(n, order, n):
                coeffs[e] += 8 * n
            for e in range(4 * n, order, 4 * n):
                coeffs[e] -= 32 * n
        return FormalSeries(coeffs, order)

    def terms():
        yield 1.0
        n = 0
        while True:
            n += 1
            qn = q**n
            q4n = q ** (4 * n)
            yield 8.0 * n * qn / (1 - qn) - 32.0 * n * q4n / (1 - q4n)

    return sum_series(terms(), P)


def _triangular_sum(q, P):
    formal = is_formal(q)
    if formal:
        order = q.order
        coeffs = [Fraction(0)] * order
        n = 0
        while n * (n + 1) // 2 < order:
            coeffs[n * (n + 1) // 2] += 1
            n += 1
        return FormalSeries(coeffs, order)

    def terms():
        n = 0
        while True:
            yield q ** (n * (n + 1) // 2)
            n += 1

    return sum_series(terms(), P)


def _four_tri_lhs(pt, P):
    return _triangular_sum(pt.q, P) ** 4


def _four_tri_rhs(pt, P):
    q = pt.q
    if is_formal(q):
        order = q.order
        coeffs = [Fraction(0)] * order
        n = 0
        while n < order:
            step = 2 * n + 1
            e = n
            while e < order:
                coeffs[e] += step
                e += step
            n += 1
        return FormalSeries(coeffs, order)

    def terms():
        n = 0
        while True:
            qn = q**n
            q2n1 = q ** (2 * n + 1)
            yield (2 * n + 1) * qn / (1 - q2n1)
            n += 1

    return sum_series(terms(), P)


# -- registry ----------------------------------------------------------


@dataclasses.dataclass(frozen=True)
class IdentityEntry:
    name: str
    slots: tuple
    citation: str
    constraints: str
    predicate: object
    lhs: object
    rhs: object
    sample: object  # sample(rng, q) -> dict of slot values
    exact_points: tuple = ()  # rational specializations for exact mode
    conditioning: object = None  # extra well-conditioning filter for sampling


@dataclasses.dataclass(frozen=True)
class IdentityReport:
    identity: str
    point: dict
    lhs: object
    rhs: object
    abs_err: float
    rel_err: float
    passed: bool
    mode: str
    near_trivial: bool = False
    diagnostics: str = ""


def _scaled_modulus(rng, bound, lo_frac=0.1):
    hi = SAMPLE_MARGIN * bound
    return rng.uniform(lo_frac * hi, hi)


def _sample_uv(rng, lo=0.4, hi=0.9):
    return _cu(rng, lo, hi), _cu(rng, lo, hi)


def _mods_lt(pt, pairs, bound=1.0):
    return all(abs(w) < bound for w in pairs)


_REG = {}


def _register(entry):
    _REG[entry.name] = entry


def _product_floor(product_side, floor=1e-3):
    """Reject draws where the closed-form side is tiny compared with the
    O(1) terms of the series side; such points lose too many digits to
    cancellation for a double-precision check at 1e-9."""

    def cond(pt):
        scale = max(1.0, abs(pt.u), abs(pt.v))
        return abs(product_side(pt, DEFAULT_POLICY)) >= floor * scale

    return cond


def _pt_dict(d, rng, q, names):
    return {k: d[k] for k in names}


# JTP ------------------------------------------------------------------
_register(
    IdentityEntry(
        name="JTP",
        slots=("x",),
        citation="Jacobi triple product identity",
        constraints="x != 0, |q| < 1",
        predicate=lambda pt: pt.x != 0
        and _min_factor(pt.x, pt.q) >= POLE_DIST
        and _min_factor(pt.q / pt.x, pt.q) >= POLE_DIST,
        lhs=_jtp_lhs,
        rhs=_jtp_rhs,
        sample=lambda rng, q: {"x": _cu(rng, 0.3, 1.5)},
        conditioning=lambda pt: abs(_jtp_lhs(pt, DEFAULT_POLICY)) >= 1e-3 * max(1.0, abs(pt.x)),
        exact_points=(
            {"x": Fraction(2)},
            {"x": Fraction(1, 2)},
            {"x": Fraction(-1)},
            {"x": Fraction(3, 2)},
            {"x": Fraction(-2, 3)},
        ),
    )
)

# ANDREWS_ASKEY --------------------------------------------------------


def _aa_sample(rng, q):
    u, v = _sample_uv(rng)
    m = max(abs(u), abs(v))
    a = _cu(rng, 0.05, SAMPLE_MARGIN / m)
    b = _cu(rng, 0.05, SAMPLE_MARGIN / m)
    return {"a": a, "b": b, "u": u, "v": v}


_register(
    IdentityEntry(
        name="ANDREWS_ASKEY",
        slots=("a", "b", "u", "v"),
        citation="Andrews-Askey q-beta integral",
        constraints="max{|au|,|bu|,|av|,|bv|} < 1, uv != 0",
        predicate=lambda pt: pt.u * pt.v != 0
        and _mods_lt(pt, [pt.a * pt.u, pt.b * pt.u, pt.a * pt.v, pt.b * pt.v])
        and _uv_ok(pt.u, pt.v, pt.q),
        lhs=_aa_lhs,
        rhs=_aa_rhs,
        sample=_aa_sample,
        conditioning=_qintegral_conditioned(lambda pt, x: [], lambda pt, x: [pt.a * x, pt.b * x], _aa_rhs),
    )
)

# AL_SALAM_VERMA -------------------------------------------------------


def _asv_sample(rng, q):
    u, v = _sample_uv(rng)
    m = max(abs(u), abs(v))
    return {
        "a": _cu(rng, 0.05, SAMPLE_MARGIN / m),
        "b": _cu(rng, 0.05, SAMPLE_MARGIN / m),
        "c": _cu(rng, 0.05, SAMPLE_MARGIN / m),
        "u": u,
        "v": v,
    }


_register(
    IdentityEntry(
        name="AL_SALAM_VERMA",
        slots=("a", "b", "c", "u", "v"),
        citation="Al-Salam-Verma q-integral",
        constraints="max{|au|,|bu|,|cu|,|av|,|bv|,|cv|} < 1, uv != 0",
        predicate=lambda pt: pt.u * pt.v != 0
        and _mods_lt(
            pt,
            [
                pt.a * pt.u,
                pt.b * pt.u,
                pt.c * pt.u,
                pt.a * pt.v,
                pt.b * pt.v,
                pt.c * pt.v,
            ],
        )
        and _uv_ok(pt.u, pt.v, pt.q),
        lhs=_asv_lhs,
        rhs=_asv_rhs,
        sample=_asv_sample,
        conditioning=_qintegral_conditioned(lambda pt, x: [pt.a * pt.b * pt.c * pt.u * pt.v * x], lambda pt, x: [pt.a * x, pt.b * x, pt.c * x], _asv_rhs),
    )
)

# LIU_QINT6 ------------------------------------------------------------


def _qint6_sample(rng, q):
    u, v = _sample_uv(rng)
    m = max(abs(u), abs(v))
    a = _cu(rng, 0.1, SAMPLE_MARGIN / m)
    b = _cu(rng, 0.1, SAMPLE_MARGIN / m)
    c = _cu(rng, 0.25 * SAMPLE_MARGIN / m, SAMPLE_MARGIN / m)
    rmax = SAMPLE_MARGIN * abs(c) / (abs(a) * abs(b))
    r = _cu(rng, 0.3 * min(rmax, 3.0), min(rmax, 3.0))
    return {"a": a, "b": b, "c": c, "r": r, "u": u, "v": v}


def _qint67_pred(pt, with_d=False):
    mods = [
        pt.a * pt.u,
        pt.b * pt.u,
        pt.c * pt.u,
        pt.a * pt.v,
        pt.b * pt.v,
        pt.c * pt.v,
        pt.a * pt.b * pt.r / pt.c if pt.c != 0 else 2.0,
    ]
    if with_d:
        mods += [pt.d * pt.u, pt.d * pt.v, pt.b * pt.d * pt.u * pt.v]
    return (
        pt.u * pt.v != 0
        and pt.c != 0
        and pt.r != 0
        and _mods_lt(pt, mods)
        and _uv_ok(pt.u, pt.v, pt.q)
    )


_register(
    IdentityEntry(
        name="LIU_QINT6",
        slots=("a", "b", "c", "r", "u", "v"),
        citation="six-parameter extension of the Andrews-Askey integral",
        constraints="max{|au|,|bu|,|cu|,|av|,|bv|,|cv|,|abr/c|} < 1, uv != 0, cr != 0",
        predicate=lambda pt: _qint67_pred(pt),
        lhs=_qint6_lhs,
        rhs=_qint6_rhs,
        sample=_qint6_sample,
        conditioning=_qintegral_conditioned(lambda pt, x: [pt.a * pt.b * pt.r * x], lambda pt, x: [pt.a * x, pt.b * x, pt.c * x], _qint6_rhs),
    )
)

# LIU_QINT7 ------------------------------------------------------------


def _qint7_sample(rng, q):
    d_extra = {"d": None}
    base = _qint6_sample(rng, q)
    m = max(abs(base["u"]), abs(base["v"]))
    d_extra["d"] = _cu(rng, 0.05, SAMPLE_MARGIN / m)
    base.update(d_extra)
    return base


_register(
    IdentityEntry(
        name="LIU_QINT7",
        slots=("a", "b", "c", "d", "r", "u", "v"),
        citation="seven-parameter q-integral formula",
        constraints="max{|au|,|bu|,|cu|,|av|,|bv|,|cv|,|abr/c|} < 1, uv != 0, cr != 0, |bduv| < 1",
        predicate=lambda pt: _qint67_pred(pt, with_d=True),
        lhs=_qint7_lhs,
        rhs=_qint7_rhs,
        sample=_qint7_sample,
        conditioning=_qintegral_conditioned(lambda pt, x: [pt.a * pt.c * pt.d * pt.u * pt.v * x, pt.a * pt.b * pt.r * x], lambda pt, x: [pt.a * x, pt.b * x, pt.c * x, pt.d * x], _qint7_rhs),
    )
)

# LIU_QINT7_R (r = cuv specialization) --------------------------------


def _qint7r_sample(rng, q):
    u, v = _sample_uv(rng)
    m = max(abs(u), abs(v))
    return {
        "a": _cu(rng, 0.1, SAMPLE_MARGIN / m),
        "b": _cu(rng, 0.1, SAMPLE_MARGIN / m),
        "c": _cu(rng, 0.1, SAMPLE_MARGIN / m),
        "d": _cu(rng, 0.05, SAMPLE_MARGIN / m),
        "u": u,
        "v": v,
    }


_register(
    IdentityEntry(
        name="LIU_QINT7_R",
        slots=("a", "b", "c", "d", "u", "v"),
        citation="r = cuv case of the seven-parameter q-integral",
        constraints="max{|au|,|bu|,|cu|,|av|,|bv|,|cv|} < 1, uv != 0",
        predicate=lambda pt: pt.u * pt.v != 0
        and _mods_lt(
            pt,
            [
                pt.a * pt.u,
                pt.b * pt.u,
                pt.c * pt.u,
                pt.a * pt.v,
                pt.b * pt.v,
                pt.c * pt.v,
                pt.d * pt.u,
                pt.d * pt.v,
                pt.b * pt.d * pt.u * pt.v,
            ],
        )
        and _uv_ok(pt.u, pt.v, pt.q),
        lhs=_qint7r_lhs,
        rhs=_qint7r_rhs,
        sample=_qint7r_sample,
        conditioning=_qintegral_conditioned(lambda pt, x: [pt.a * pt.b * pt.c * pt.u * pt.v * x, pt.a * pt.c * pt.d * pt.u * pt.v * x], lambda pt, x: [pt.a * x, pt.b * x, pt.c * x, pt.d * x], _qint7r_rhs),
    )
)

# SEARS_EQUIV ----------------------------------------------------------
_register(
    IdentityEntry(
        name="SEARS_EQUIV",
        slots=("a", "b", "c", "d", "r", "u", "v"),
        citation="integral form equivalent to the seven-parameter formula",
        constraints="as LIU_QINT7",
        predicate=lambda pt: _qint67_pred(pt, with_d=True),
        lhs=_sears_equiv_lhs,
        rhs=_sears_equiv_rhs,
        sample=_qint7_sample,
        conditioning=_qintegral_conditioned(lambda pt, x: [pt.a * pt.c * pt.d * pt.u * pt.v * x, pt.b * pt.c * pt.d * pt.u * pt.v * x], lambda pt, x: [pt.a * x, pt.b * x, pt.c * x, pt.d * x], _sears_equiv_rhs),
    )
)

# RAM_RECIP ------------------------------------------------------------


def _ram_sample(rng, q):
    u, v = _sample_uv(rng, 0.4, 1.1)
    m = max(abs(u), abs(v))
    a = _cu(rng, 0.05, SAMPLE_MARGIN / m)
    return {"a": a, "u": u, "v": v}


_register(
    IdentityEntry(
        name="RAM_RECIP",
        slots=("a", "u", "v"),
        citation="Ramanujan reciprocity theorem",
        constraints="uv != 0, au != q^{-m}, av != q^{-m}",
        predicate=lambda pt: pt.u * pt.v != 0
        and _min_factor(pt.a * pt.u, pt.q) >= POLE_DIST
        and _min_factor(pt.a * pt.v, pt.q) >= POLE_DIST
        and _uv_ok(pt.u, pt.v, pt.q)
        and _uv_ok(pt.v, pt.u, pt.q),
        lhs=_ram_lhs,
        rhs=_ram_rhs,
        sample=_ram_sample,
        conditioning=_product_floor(_ram_lhs),
        exact_points=(
            {"a": Fraction(1, 2), "u": Fraction(1, 2), "v": Fraction(1, 3)},
            {"a": Fraction(-1, 2), "u": Fraction(1, 2), "v": Fraction(1, 3)},
            {"a": Fraction(1, 3), "u": Fraction(1), "v": Fraction(1, 2)},
            {"a": Fraction(3), "u": Fraction(1, 4), "v": Fraction(1, 2)},
            {"a": Fraction(1, 2), "u": Fraction(-1, 3), "v": Fraction(2, 3)},
        ),
    )
)

# RECIP5 ---------------------------------------------------------------


def _recip5_sample(rng, q):
    u, v = _sample_uv(rng)
    m = max(abs(u), abs(v))
    return {
        "a": _cu(rng, 0.05, SAMPLE_MARGIN / m),
        "c": _cu(rng, 0.05, SAMPLE_MARGIN / m),
        "d": _cu(rng, 0.1 * SAMPLE_MARGIN / m, SAMPLE_MARGIN / m),
        "u": u,
        "v": v,
    }


_register(
    IdentityEntry(
        name="RECIP5",
        slots=("a", "c", "d", "u", "v"),
        citation="five-variable reciprocity formula",
        constraints="max{|au|,|av|,|cu|,|cv|,|du|,|dv|} < 1, uv != 0, d != 0",
        predicate=lambda pt: pt.u * pt.v != 0
        and pt.d != 0
        and _mods_lt(
            pt,
            [
                pt.a * pt.u,
                pt.a * pt.v,
                pt.c * pt.u,
                pt.c * pt.v,
                pt.d * pt.u,
                pt.d * pt.v,
            ],
        )
        and _uv_ok(pt.u, pt.v, pt.q),
        lhs=_recip5_lhs,
        rhs=_recip5_rhs,
        sample=_recip5_sample,
        conditioning=_product_floor(_recip5_rhs),
        exact_points=(
            {"a": Fraction(1, 2), "c": Fraction(1, 3), "d": Fraction(1, 2), "u": Fraction(1, 2), "v": Fraction(1, 3)},
            {"a": Fraction(-1, 2), "c": Fraction(1, 4), "d": Fraction(1, 3), "u": Fraction(1, 2), "v": Fraction(-1, 2)},
            {"a": Fraction(1, 3), "c": Fraction(-1, 3), "d": Fraction(1, 2), "u": Fraction(1, 3), "v": Fraction(1, 4)},
            {"a": Fraction(2, 3), "c": Fraction(1, 5), "d": Fraction(-1, 2), "u": Fraction(1, 2), "v": Fraction(1, 3)},
            {"a": Fraction(1, 5), "c": Fraction(1, 2), "d": Fraction(1, 4), "u": Fraction(-1, 2), "v": Fraction(1, 3)},
        ),
    )
)

# LAMBERT --------------------------------------------------------------


def _lambert_sample(rng, q):
    u = _cu(rng, 0.5, 1.0)
    v = _cu(rng, 0.5, 1.0)
    cmin = 1.05 * q / (SAMPLE_MARGIN * min(abs(u), abs(v)))
    c = _cu(rng, cmin, 2.0 * cmin + 0.5)
    return {"c": c, "u": u, "v": v}


def _lambert_pred(pt):
    q, c, u, v = pt.q, pt.c, pt.u, pt.v
    if u * v == 0 or c == 0:
        return False
    if abs(q / (c * u)) >= 1 or abs(q / (c * v)) >= 1:
        return False
    return (
        _min_factor(c * u, q) >= POLE_DIST
        and _min_factor(c * v, q) >= POLE_DIST
        and _uv_ok(pt.u, pt.v, pt.q)
    )


_register(
    IdentityEntry(
        name="LAMBERT",
        slots=("c", "u", "v"),
        citation="Lambert series reciprocity identity",
        constraints="|q/cu| < 1, |q/cv| < 1, cu != q^{-m}, cv != q^{-m}",
        predicate=_lambert_pred,
        lhs=_lambert_lhs,
        rhs=_lambert_rhs,
        sample=_lambert_sample,
        conditioning=_product_floor(_lambert_rhs),
        exact_points=(
            {"c": Fraction(3), "u": Fraction(1, 2), "v": Fraction(1, 4)},
            {"c": Fraction(2), "u": Fraction(1, 3), "v": Fraction(1, 5)},
            {"c": Fraction(-2), "u": Fraction(1, 2), "v": Fraction(1, 3)},
            {"c": Fraction(1, 2), "u": Fraction(1, 2), "v": Fraction(1, 3)},
            {"c": Fraction(5, 2), "u": Fraction(1, 2), "v": Fraction(1, 5)},
        ),
    )
)

# RECIP7 ---------------------------------------------------------------


def _recip7_sample(rng, q):
    u, v = _sample_uv(rng, 0.4, 0.8)
    m = max(abs(u), abs(v))
    a = _cu(rng, 0.1 * SAMPLE_MARGIN / m, SAMPLE_MARGIN / m)
    b = _cu(rng, 0.1 * SAMPLE_MARGIN / m, SAMPLE_MARGIN / m)
    c = _cu(rng, 0.2 * SAMPLE_MARGIN / m, SAMPLE_MARGIN / m)
    d = _cu(rng, 0.2 * SAMPLE_MARGIN / m, SAMPLE_MARGIN / m)
    rmax = SAMPLE_MARGIN * min(
        abs(d) / (abs(a) * abs(b)),
        q / (abs(a) * abs(b) * abs(c) * abs(u) * abs(v)),
    )
    r = _cu(rng, 0.3 * rmax, rmax)
    return {"a": a, "b": b, "c": c, "d": d, "r": r, "u": u, "v": v}


def _recip7_pred(pt):
    q = pt.q
    if pt.u * pt.v == 0 or pt.c == 0 or pt.d == 0 or pt.r == 0:
        return False
    mods = [
        pt.a * pt.u,
        pt.a * pt.v,
        pt.b * pt.u,
        pt.b * pt.v,
        pt.c * pt.u,
        pt.c * pt.v,
        pt.d * pt.u,
        pt.d * pt.v,
        pt.a * pt.b * pt.r / pt.d,
        pt.a * pt.b * pt.c * pt.r * pt.u * pt.v / q,
    ]
    return _mods_lt(pt, mods) and _uv_ok(pt.u, pt.v, pt.q)


_register(
    IdentityEntry(
        name="RECIP7",
        slots=("a", "b", "c", "d", "r", "u", "v"),
        citation="seven-variable reciprocity formula",
        constraints="max{|au|,...,|dv|,|abr/d|,|abcruv/q|} < 1, uv != 0, cdr != 0",
        predicate=_recip7_pred,
        lhs=_recip7_lhs,
        rhs=_recip7_rhs,
        sample=_recip7_sample,
        conditioning=_product_floor(_recip7_rhs),
    )
)

# RECIP6 ---------------------------------------------------------------


def _recip6_sample(rng, q):
    u, v = _sample_uv(rng, 0.4, 0.8)
    m = max(abs(u), abs(v))
    a = _cu(rng, 0.1 * SAMPLE_MARGIN / m, SAMPLE_MARGIN / m)
    b = _cu(rng, 0.1 * SAMPLE_MARGIN / m, SAMPLE_MARGIN / m)
    c = _cu(rng, 0.2 * SAMPLE_MARGIN / m, SAMPLE_MARGIN / m)
    dmax = min(
        SAMPLE_MARGIN / m,
        SAMPLE_MARGIN * q / (abs(a) * abs(b) * abs(c) * abs(u) ** 2 * abs(v) ** 2),
    )
    d = _cu(rng, 0.2 * dmax, dmax)
    return {"a": a, "b": b, "c": c, "d": d, "u": u, "v": v}


def _recip6_pred(pt):
    q = pt.q
    if pt.u * pt.v == 0 or pt.c == 0 or pt.d == 0:
        return False
    mods = [
        pt.a * pt.u,
        pt.a * pt.v,
        pt.b * pt.u,
        pt.b * pt.v,
        pt.c * pt.u,
        pt.c * pt.v,
        pt.d * pt.u,
        pt.d * pt.v,
        pt.a * pt.b * pt.c * pt.d * pt.u**2 * pt.v**2 / q,
    ]
    return _mods_lt(pt, mods) and _uv_ok(pt.u, pt.v, pt.q)


_register(
    IdentityEntry(
        name="RECIP6",
        slots=("a", "b", "c", "d", "u", "v"),
        citation="six-variable reciprocity formula",
        constraints="max{|au|,...,|dv|,|abcd u^2 v^2/q|} < 1, uv != 0, cd != 0",
        predicate=_recip6_pred,
        lhs=_recip6_lhs,
        rhs=_recip6_rhs,
        sample=_recip6_sample,
        conditioning=_product_floor(_recip6_rhs),
    )
)

# QBINOMIAL_THM --------------------------------------------------------
_register(
    IdentityEntry(
        name="QBINOMIAL_THM",
        slots=("a", "z"),
        citation="q-binomial theorem",
        constraints="|z| < 1",
        predicate=lambda pt: abs(pt.z) < 1 and _min_factor(pt.z, pt.q) >= POLE_DIST,
        lhs=_qbin_lhs,
        rhs=_qbin_rhs,
        sample=lambda rng, q: {"a": _cu(rng, 0.1, 2.0), "z": _cu(rng, 0.05, SAMPLE_MARGIN)},
    )
)

# QMEHLER --------------------------------------------------------------


def _qmehler_sample(rng, q):
    a = _cu(rng, 0.3, 1.0)
    b = _cu(rng, 0.3, 1.0)
    s = _cu(rng, 0.3, 1.0)
    t = _cu(rng, 0.3, 1.0)
    zmax = SAMPLE_MARGIN / (max(abs(a), abs(b)) * max(abs(s), abs(t)))
    z = _cu(rng, 0.05, zmax)
    return {"a": a, "b": b, "s": s, "t": t, "z": z}


_register(
    IdentityEntry(
        name="QMEHLER",
        slots=("a", "b", "s", "t", "z"),
        citation="q-Mehler formula for Rogers-Szego polynomials",
        constraints="max{|asz|,|atz|,|bsz|,|btz|} < 1",
        predicate=lambda pt: _mods_lt(
            pt,
            [
                pt.a * pt.s * pt.z,
                pt.a * pt.t * pt.z,
                pt.b * pt.s * pt.z,
                pt.b * pt.t * pt.z,
            ],
        ),
        lhs=_qmehler_lhs,
        rhs=_qmehler_rhs,
        sample=_qmehler_sample,
    )
)

# QPDE_L ---------------------------------------------------------------


def _qpde_sample(rng, q):
    s = _cu(rng, 0.3, 0.9)
    t = _cu(rng, 0.3, 0.9)
    u = _cu(rng, 0.3, 0.9)
    v = _cu(rng, 0.5, 0.9)
    m = max(abs(s), abs(t), abs(u), abs(v))
    a = _cu(rng, 0.1, SAMPLE_MARGIN / m)
    b = _cu(rng, 0.1, SAMPLE_MARGIN / m)
    return {"a": a, "b": b, "s": s, "t": t, "u": u, "v": v}


def _qpde_pred(pt):
    if pt.a == 0 or pt.b == 0 or pt.s * pt.t * pt.u * pt.v == 0:
        return False
    mods = [
        pt.a * pt.s,
        pt.a * pt.t,
        pt.a * pt.u,
        pt.a * pt.v,
        pt.b * pt.s,
        pt.b * pt.t,
        pt.b * pt.u,
        pt.b * pt.v,
        pt.a * pt.b * pt.s * pt.t * pt.u / pt.v,
    ]
    return _mods_lt(pt, mods)


_register(
    IdentityEntry(
        name="QPDE_L",
        slots=("a", "b", "s", "t", "u", "v"),
        citation="q-partial differential equation for the kernel L",
        constraints="moduli of as,...,bv and |abstu/v| < 1; ab != 0",
        predicate=_qpde_pred,
        lhs=_qpde_lhs,
        rhs=_qpde_rhs,
        sample=_qpde_sample,
    )
)

# SEARS_32 -------------------------------------------------------------


def _sears_sample(rng, q):
    a = _cu(rng, 0.6, 1.6)
    b = _cu(rng, 0.6, 1.6)
    u = _cu(rng, 0.1, 0.6)
    v = _cu(rng, 0.1, 0.6)
    c = _cu(rng, 1.05 * abs(v) / SAMPLE_MARGIN, 2.0)
    return {"a": a, "b": b, "c": c, "u": u, "v": v}


def _sears_pred(pt):
    a, b, c, u, v, q = pt.a, pt.b, pt.c, pt.u, pt.v, pt.q
    if a * b * c == 0:
        return False
    return (
        abs(u * v / (a * b * c)) < 1
        and abs(v / c) < 1
        and abs(u) < 1
        and abs(v) < 1
        and abs(u * v / (a * b)) < 1
        and _min_factor(u, q) >= POLE_DIST
        and _min_factor(v, q) >= POLE_DIST
        and _min_factor(u * v / (a * b), q) >= POLE_DIST
        and _min_factor(u * v / (a * b * c), q) >= POLE_DIST
    )


_register(
    IdentityEntry(
        name="SEARS_32",
        slots=("a", "b", "c", "u", "v"),
        citation="Sears transformation of a 3phi2 series",
        constraints="|uv/abc| < 1, |v/c| < 1, |u|,|v|,|uv/ab| < 1",
        predicate=_sears_pred,
        lhs=_sears_lhs,
        rhs=_sears_rhs,
        sample=_sears_sample,
    )
)

# LIMIT_A --------------------------------------------------------------


def _dist_to_qpowers(w, q, kmin=1, kmax=500):
    best = math.inf
    qk = q**kmin
    for _ in range(kmin, kmax):
        best = min(best, abs(w - qk))
        if abs(qk) < 0.5 * abs(w) or abs(qk) < 1e-16:
            break
        qk *= q
    return min(best, abs(w))  # q^k -> 0 limit


_register(
    IdentityEntry(
        name="LIMIT_A",
        slots=("a", "c", "d"),
        citation="confluent (v -> u) limit of the five-variable reciprocity",
        constraints="|a|,|c|,|d| < 1, d != q^m, ac d != 0",
        predicate=lambda pt: pt.d != 0
        and _mods_lt(pt, [pt.a, pt.c, pt.d])
        and _min_factor(pt.a, pt.q) >= POLE_DIST
        and _min_factor(pt.c, pt.q) >= POLE_DIST
        and _dist_to_qpowers(pt.d, pt.q) >= POLE_DIST,
        lhs=_limit_a_lhs,
        rhs=_limit_a_rhs,
        sample=lambda rng, q: {
            "a": _cu(rng, 0.05, SAMPLE_MARGIN),
            "c": _cu(rng, 0.05, SAMPLE_MARGIN),
            "d": _cu(rng, 0.1, SAMPLE_MARGIN),
        },
    )
)

# LIMIT_EULER_D --------------------------------------------------------
_register(
    IdentityEntry(
        name="LIMIT_EULER_D",
        slots=("d",),
        citation="one-parameter limit interpolating the Jacobi cube and Euler identities",
        constraints="|d| < 1, d != 0, d != q^m",
        predicate=lambda pt: pt.d != 0
        and abs(pt.d) < 1
        and _dist_to_qpowers(pt.d, pt.q) >= POLE_DIST,
        lhs=_limit_euler_lhs,
        rhs=_limit_euler_rhs,
        sample=lambda rng, q: {"d": _cu(rng, 0.1, SAMPLE_MARGIN)},
        exact_points=(
            {"d": Fraction(1, 2)},
            {"d": Fraction(-1, 2)},
            {"d": Fraction(1, 3)},
            {"d": Fraction(-2, 3)},
            {"d": Fraction(3, 4)},
        ),
    )
)

# LIMIT_D_NEGQ ---------------------------------------------------------
_register(
    IdentityEntry(
        name="LIMIT_D_NEGQ",
        slots=(),
        citation="d = -q case of the one-parameter limit identity",
        constraints="0 < q < 1",
        predicate=lambda pt: 0 < float(abs(pt.q)) < 1,
        lhs=_dnegq_lhs,
        rhs=_dnegq_rhs,
        sample=lambda rng, q: {},
    )
)

# LAMBERT4 -------------------------------------------------------------


def _lambert4_sample(rng, q):
    lo = 1.05 * q / SAMPLE_MARGIN
    hi = SAMPLE_MARGIN / (1.05 * q)
    m = math.exp(rng.uniform(math.log(lo), math.log(hi)))
    return {"a": cmath.rect(m, rng.uniform(0.0, 2 * math.pi))}


def _lambert4_pred(pt):
    a, q = pt.a, pt.q
    if a == 0:
        return False
    return (
        abs(q * a) < 1
        and abs(q / a) < 1
        and _min_factor(a * q, q) >= POLE_DIST
        and _min_factor(q / a, q) >= POLE_DIST
    )


_register(
    IdentityEntry(
        name="LAMBERT4",
        slots=("a",),
        citation="two-sided Lambert series formula",
        constraints="|qa| < 1, |q/a| < 1, a != q^m (m nonzero integer)",
        predicate=_lambert4_pred,
        lhs=_lambert4_lhs,
        rhs=_lambert4_rhs,
        sample=_lambert4_sample,
    )
)

# FOUR_SQUARE ----------------------------------------------------------
_register(
    IdentityEntry(
        name="FOUR_SQUARE",
        slots=(),
        citation="Jacobi four-square identity",
        constraints="0 < q < 1",
        predicate=lambda pt: 0 < float(abs(pt.q)) < 1,
        lhs=_four_square_lhs,
        rhs=_four_square_rhs,
        sample=lambda rng, q: {},
        exact_points=({},),
    )
)

# FOUR_TRIANGULAR ------------------------------------------------------
_register(
    IdentityEntry(
        name="FOUR_TRIANGULAR",
        slots=(),
        citation="Legendre four-triangular-numbers identity",
        constraints="0 < q < 1",
        predicate=lambda pt: 0 < float(abs(pt.q)) < 1,
        lhs=_four_tri_lhs,
        rhs=_four_tri_rhs,
        sample=lambda rng, q: {},
        exact_points=({},),
    )
)


REGISTRY = dict(_REG)

EXACT_IDENTITIES = (
    "JTP",
    "RAM_RECIP",
    "RECIP5",
    "LAMBERT",
    "LIMIT_EULER_D",
    "FOUR_SQUARE",
    "FOUR_TRIANGULAR",
)


# -- public operations -------------------------------------------------


def _get(identity_id):
    if identity_id not in REGISTRY:
        raise DomainError(f"unknown identity {identity_id!r}")
    return REGISTRY[identity_id]


def evaluate_lhs(identity_id, point, policy=DEFAULT_POLICY, check_domain=True):
    entry = _get(identity_id)
    if check_domain and not is_formal(point.q) and not entry.predicate(point):
        raise DomainError(f"{identity_id}: point violates domain constraints")
    return entry.lhs(point, policy)


def evaluate_rhs(identity_id, point, policy=DEFAULT_POLICY, check_domain=True):
    entry = _get(identity_id)
    if check_domain and not is_formal(point.q) and not entry.predicate(point):
        raise DomainError(f"{identity_id}: point violates domain constraints")
    return entry.rhs(point, policy)


def _point_summary(point):
    entry_vals = {}
    for name in ("a", "b", "c", "d", "r", "u", "v", "x", "s", "t", "z"):
        val = point.get(name)
        if val != 0:
            entry_vals[name] = val
    entry_vals["q"] = point.q if not is_formal(point.q) else f"q mod q^{point.q.order}"
    return entry_vals


def check_identity(identity_id, point, policy=DEFAULT_POLICY, tolerance=1e-9, mode="numeric"):
    """Evaluate both sides and compare; never raises on mere mismatch."""
    entry = _get(identity_id)
    lhs = entry.lhs(point, policy)
    rhs = entry.rhs(point, policy)
    if mode == "exact" or is_formal(point.q):
        equal = lhs == rhs
        diff = 0.0
        if not equal:
            diff = max(abs(float(x - y)) for x, y in zip(lhs.coeffs, rhs.coeffs))
        return IdentityReport(
            identity=identity_id,
            point=_point_summary(point),
            lhs=lhs,
            rhs=rhs,
            abs_err=diff,
            rel_err=diff,
            passed=equal,
            mode="exact",
            diagnostics="" if equal else "coefficient mismatch",
        )
    abs_err = abs(lhs - rhs)
    rel_err = abs_err / max(abs(lhs), abs(rhs), 1e-300)
    near_trivial = abs(lhs) < 1e-12 and abs(rhs) < 1e-12
    return IdentityReport(
        identity=identity_id,
        point=_point_summary(point),
        lhs=lhs,
        rhs=rhs,
        abs_err=abs_err,
        rel_err=rel_err,
        passed=rel_err <= tolerance,
        mode="numeric",
        near_trivial=near_trivial,
    )


def sample_domain(identity_id, seed, count):
    """Deterministic admissible parameter points for one identity."""
    if count < 1:
        raise DomainError("count must be >= 1")
    entry = _get(identity_id)
    rng = random.Random(f"{identity_id}:{seed}")
    points = []
    attempts = 0
    budget = 1000 * count
    while len(points) < count:
        if attempts >= budget:
            raise SamplingExhausted(
                f"{identity_id}: no admissible point in {budget} draws"
            )
        attempts += 1
        q = rng.uniform(0.05, 0.8)
        try:
            slots = entry.sample(rng, q)
            pt = ParameterPoint(q=q, **slots)
        except (ValueError, ZeroDivisionError, DomainError):
            continue
        if not entry.predicate(pt):
            continue
        if entry.conditioning is not None:
            try:
                if not entry.conditioning(pt):
                    continue
            except (QSeriesError, ZeroDivisionError):
                continue
        points.append(pt)
    return points


def exact_point(identity_id, spec, order=40):
    """Build an exact-mode ParameterPoint from a rational specialization."""
    return ParameterPoint(q=fs_var(order), **spec)


def sears_transform_check(point, policy=DEFAULT_POLICY, tolerance=1e-9):
    """Report for the Sears transformation at one parameter point."""
    return check_identity("SEARS_32", point, policy, tolerance)
