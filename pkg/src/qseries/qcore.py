"""Scalar-generic primitives of q-calculus.

Every operation here works on two kinds of scalars:

* numeric mode -- Python floats / complex numbers, |q| < 1 required;
* exact mode -- :class:`~qseries.exactseries.FormalSeries` in q over exact
  rationals, where q itself is the formal variable and parameters are
  rational constants.

Infinite sums and products are governed by a :class:`TruncationPolicy`.
"""

from __future__ import annotations

import cmath
import dataclasses
import math
from functools import lru_cache
from numbers import Rational

from .errors import DomainError, NonConvergent, PoleError
from .exactseries import FormalSeries

__all__ = [
    "TruncationPolicy",
    "ParameterPoint",
    "DEFAULT_POLICY",
    "is_formal",
    "qpoch_finite",
    "qpoch_infinite",
    "qpoch_infinite_cached",
    "qpoch_multi",
    "qbinomial",
    "phi_series",
    "delta_theta",
    "jackson_qintegral",
    "q_derivative",
    "q_partial",
    "rogers_szego",
    "q_hermite",
    "hprod",
    "sum_series",
]


def is_formal(x):
    return isinstance(x, FormalSeries)


@dataclasses.dataclass(frozen=True)
class TruncationPolicy:
    """Term/factor caps and tail tolerances for infinite sums and products."""

    max_terms: int = 2000
    max_factors: int = 4000
    tail_tol: float = 1e-14
    pole_margin: float = 1e-8

    def __post_init__(self):
        if self.max_terms < 1 or self.max_factors < 1:
            raise ValueError("max_terms and max_factors must be >= 1")
        if self.tail_tol <= 0 or self.pole_margin <= 0:
            raise ValueError("tail_tol and pole_margin must be positive")


DEFAULT_POLICY = TruncationPolicy()

# Parameter slots an identity may reference.  s, t, z cover the kernel
# function L(a,b,u,v,s,t) and the q-Mehler / q-binomial-theorem entries.
SLOT_NAMES = ("a", "b", "c", "d", "r", "u", "v", "x", "s", "t", "z")


@dataclasses.dataclass(frozen=True)
class ParameterPoint:
    """Assignment of values to the free symbols of the identities.

    In numeric mode ``q`` is a float/complex with |q| < 1 and the slots are
    complex numbers; in exact mode ``q`` is the formal variable and the
    slots are rational constants.  ``theta`` is a real angle in radians and
    is only meaningful in numeric mode.
    """

    q: object
    a: object = 0
    b: object = 0
    c: object = 0
    d: object = 0
    r: object = 0
    u: object = 0
    v: object = 0
    x: object = 0
    s: object = 0
    t: object = 0
    z: object = 0
    theta: float | None = None

    def __post_init__(self):
        if is_formal(self.q):
            for name in SLOT_NAMES:
                val = getattr(self, name)
                if not isinstance(val, Rational):
                    raise DomainError(f"exact mode requires rational slot values; {name}={val!r}")
        else:
            if abs(self.q) >= 1:
                raise DomainError(f"|q| must be < 1, got |q| = {abs(self.q)}")
            if self.theta is not None and not 0 <= self.theta <= math.pi:
                raise DomainError("theta must lie in [0, pi]")

    def get(self, name):
        return getattr(self, name)

    def replace(self, **kwargs):
        return dataclasses.replace(self, **kwargs)

    def swap_uv(self):
        return self.replace(u=self.v, v=self.u)


def _one_like(q):
    return FormalSeries.constant(1, q.order) if is_formal(q) else 1.0


# -- q-shifted factorials ---------------------------------------------


def qpoch_finite(a, q, n):
    """(a;q)_n as the exact n-factor product; n = 0 gives 1."""
    if n < 0:
        raise DomainError("n must be a nonnegative integer")
    result = _one_like(q)
    qk = _one_like(q)
    for _ in range(n):
        result = result * (1 - a * qk)
        qk = qk * q
    return result


def qpoch_infinite(a, q, policy=DEFAULT_POLICY):
    """(a;q)_infinity, truncated under the policy's log-tail bound."""
    if is_formal(q):
        return _qpoch_infinite_formal(a, q)
    if abs(q) >= 1:
        raise NonConvergent(f"(a;q)_infinity requires |q| < 1, got {abs(q)}")
    mod_a = abs(a)
    if mod_a == 0:
        return 1.0 + 0.0 * a
    mod_q = abs(q)
    # K factors: require |a q^K| <= 1/2 before applying the tail estimate
    # 2|a||q|^K/(1-|q|) < tail_tol.
    if mod_q == 0:
        k_cut = 1
    else:
        bound = policy.tail_tol * (1.0 - mod_q) / (2.0 * mod_a)
        k_cut = max(1, math.ceil(math.log(min(bound, 0.5 / mod_a)) / math.log(mod_q)))
    if k_cut > policy.max_factors:
        raise NonConvergent(f"(a;q)_infinity needs {k_cut} factors, cap is {policy.max_factors}")
    result = 1.0
    qk = _one_like(q)
    for _ in range(k_cut):
        result = result * (1 - a * qk)
        qk = qk * q
    return result


def _qpoch_infinite_formal(a, q):
    order = q.order
    one = FormalSeries.constant(1, order)
    if isinstance(a, Rational) and not is_formal(a):
        a = FormalSeries.constant(a, order)
    if a.is_zero():
        return one
    qval = q.valuation()
    if qval is None or qval < 1:
        raise NonConvergent("formal q must have positive valuation")
    result = one
    qk = one
    term = a
    while not term.is_zero():
        result = result * (one - term)
        qk = qk * q
        term = a * qk
    return result


@lru_cache(maxsize=200000)
def _cached_poch(a, q, max_factors, tail_tol):
    policy = TruncationPolicy(max_factors=max_factors, tail_tol=tail_tol)
    return qpoch_infinite(a, q, policy)


def qpoch_infinite_cached(a, q, policy=DEFAULT_POLICY):
    """Memoized numeric path; must agree with qpoch_infinite to 1e-12."""
    if is_formal(q):
        return _qpoch_infinite_formal(a, q)
    return _cached_poch(complex(a), complex(q), policy.max_factors, policy.tail_tol)


def qpoch_multi(params, q, n=None, policy=DEFAULT_POLICY):
    """(a_1, ..., a_m; q)_n with n an integer or None for infinity."""
    result = _one_like(q)
    for a in params:
        if n is None or n == math.inf:
            result = result * qpoch_infinite(a, q, policy)
        else:
            result = result * qpoch_finite(a, q, n)
    return result


def qbinomial(n, k, q):
    """q-binomial coefficient (q;q)_n / ((q;q)_k (q;q)_{n-k})."""
    if k < 0 or n < 0 or k > n:
        raise DomainError(f"require 0 <= k <= n, got n={n}, k={k}")
    return qpoch_finite(q, q, n) / (qpoch_finite(q, q, k) * qpoch_finite(q, q, n - k))


# -- series summation --------------------------------------------------


def sum_series(term_iter, policy=DEFAULT_POLICY, formal=False):
    """Sum a series with the consecutive-small-terms stopping rule.

    Numeric mode stops once three consecutive terms each satisfy
    |term| < tail_tol * max(1, |partial|); a single small term is not
    trusted because q^{n(n-1)/2} factors produce irregular decay.  Formal
    mode stops after three consecutive exactly-zero terms.
    """
    total = None
    small = 0
    count = 0
    for term in term_iter:
        total = term if total is None else total + term
        count += 1
        if count > policy.max_terms:
            raise NonConvergent(f"series did not settle within {policy.max_terms} terms")
        if formal or is_formal(term):
            small = small + 1 if term.is_zero() else 0
        else:
            scale = max(1.0, abs(total))
            small = small + 1 if abs(term) < policy.tail_tol * scale else 0
        if small >= 3:
            return total
    if total is None:
        raise NonConvergent("empty series")
    return total


def phi_series(num, den, q, z, policy=DEFAULT_POLICY):
    """Basic hypergeometric series {}_r phi_s (num; den; q, z).

    Terms carry the normalizer ((-1)^n q^{n(n-1)/2})^{1+s-r}.  Shapes with
    r > s+1 diverge for z != 0 and are rejected.
    """
    r, s = len(num), len(den)
    e = 1 + s - r
    formal = is_formal(q)
    if e < 0:
        if formal:
            if not (is_formal(z) and (z.is_zero() or z.valuation() >= 1)):
                raise NonConvergent(f"{{}}_{r}phi_{s} diverges for z != 0")
        elif abs(z) != 0:
            raise NonConvergent(f"{{}}_{r}phi_{s} diverges for z != 0")
    if not formal and e == 0 and abs(z) >= 1:
        raise NonConvergent(f"|z| must be < 1 for r = s+1, got {abs(z)}")

    def terms():
        term = _one_like(q)
        qn = _one_like(q)  # q^n
        n = 0
        while True:
            yield term
            num_fac = _one_like(q)
            vanished = False
            for aa in num:
                f = 1 - aa * qn
                if not formal and abs(f) <= 1e-12:
                    vanished = True  # terminating series: (q^{-m};q)_n hits zero
                num_fac = num_fac * f
            if vanished or (formal and num_fac.is_zero()):
                return
            den_fac = 1 - q * qn
            for bb in den:
                f = 1 - bb * qn
                if not formal and abs(f) < policy.pole_margin:
                    raise PoleError(f"denominator parameter {bb!r} within pole margin at n={n}")
                den_fac = den_fac * f
            ratio = num_fac / den_fac * z
            if e:
                sign_pow = (-1) * qn if e > 0 else (-1) / qn
                for _ in range(abs(e)):
                    ratio = ratio * sign_pow
            term = term * ratio
            qn = qn * q
            n += 1

    return sum_series(terms(), policy, formal=formal)


# -- theta function and q-integral ------------------------------------


def delta_theta(u, v, q, policy=DEFAULT_POLICY):
    """Delta(u, v) = v (q, u/v, qv/u; q)_infinity."""
    if is_formal(q):
        if u == 0 or v == 0:
            raise DomainError("Delta(u, v) requires uv != 0")
    elif abs(u * v) == 0:
        raise DomainError("Delta(u, v) requires uv != 0")
    return (
        v
        * qpoch_infinite(q, q, policy)
        * qpoch_infinite(u / v, q, policy)
        * qpoch_infinite(q * v / u, q, policy)
    )


def jackson_qintegral(f, a, b, q, policy=DEFAULT_POLICY):
    """Thomae-Jackson q-integral (1-q) sum_n [b f(bq^n) - a f(aq^n)] q^n."""
    formal = is_formal(q)

    def terms():
        qn = _one_like(q)
        while True:
            upper = b * f(b * qn) if (formal or abs(b) != 0) else 0.0
            lower = a * f(a * qn) if (formal or abs(a) != 0) else 0.0
            yield (upper - lower) * qn
            qn = qn * q

    return (1 - q) * sum_series(terms(), policy, formal=formal)


# -- q-derivatives -----------------------------------------------------


def q_derivative(f, x, q):
    """D_q f at x: (f(x) - f(qx)) / x.  The x -> 0 limit is out of scope."""
    if is_formal(q):
        if x == 0:
            raise DomainError("q-derivative undefined at x = 0")
    elif abs(x) == 0:
        raise DomainError("q-derivative undefined at x = 0")
    return (f(x) - f(q * x)) / x


def q_partial(f, slot, point):
    """q-partial derivative of f(point) in one slot, other slots fixed."""
    val = point.get(slot)
    q = point.q
    if (is_formal(q) and val == 0) or (not is_formal(q) and abs(val) == 0):
        raise DomainError(f"q-partial derivative undefined at {slot} = 0")
    shifted = point.replace(**{slot: q * val})
    return (f(point) - f(shifted)) / val


# -- polynomials -------------------------------------------------------


def rogers_szego(n, a, b, q):
    """Homogeneous polynomial sum_k C(n,k)_q a^k b^{n-k}."""
    total = None
    for k in range(n + 1):
        term = qbinomial(n, k, q) * a**k * b ** (n - k)
        total = term if total is None else total + term
    return total


def q_hermite(n, theta, q):
    """Continuous q-Hermite polynomial H_n(cos theta | q); real-valued."""
    total = 0.0 + 0.0j
    for k in range(n + 1):
        total += complex(qbinomial(n, k, q)) * cmath.exp(1j * (n - 2 * k) * theta)
    return total.real


def hprod(theta, params, q, policy=DEFAULT_POLICY):
    """h(cos theta; a_1, ..., a_m) via the real product form."""
    if abs(q) >= 1:
        raise NonConvergent("h(x; a) requires |q| < 1")
    xv = math.cos(theta)
    result = 1.0
    for a in params:
        if abs(a) == 0:
            continue
        mod_q = abs(q)
        scale = 2.0 * abs(a) * (1.0 + abs(a))
        if mod_q == 0:
            k_cut = 1
        else:
            bound = policy.tail_tol * (1.0 - mod_q) / scale
            k_cut = max(1, math.ceil(math.log(min(bound, 0.5)) / math.log(mod_q)))
        if k_cut > policy.max_factors:
            raise NonConvergent("h(x; a) factor cap exceeded")
        qk = 1.0
        for _ in range(k_cut):
            result = result * (1 - 2 * qk * a * xv + qk * qk * a * a)
            qk = qk * q
    return result
