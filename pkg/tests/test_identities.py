"""Identity registry: sampling, numeric checks, kernel functions."""

import math

import pytest

from qseries.errors import DomainError, SamplingExhausted
from qseries.exactseries import fs_var
from qseries.identities import (
    REGISTRY,
    IdentityEntry,
    check_identity,
    evaluate_lhs,
    evaluate_rhs,
    exact_point,
    l_function,
    rho,
    sample_domain,
    sears_transform_check,
)
from qseries.qcore import ParameterPoint, qpoch_finite, qpoch_infinite

ALL_IDENTITIES = (
    "JTP",
    "ANDREWS_ASKEY",
    "AL_SALAM_VERMA",
    "LIU_QINT6",
    "LIU_QINT7",
    "LIU_QINT7_R",
    "SEARS_EQUIV",
    "RAM_RECIP",
    "RECIP5",
    "LAMBERT",
    "RECIP7",
    "RECIP6",
    "QBINOMIAL_THM",
    "QMEHLER",
    "QPDE_L",
    "SEARS_32",
    "LIMIT_A",
    "LIMIT_EULER_D",
    "LIMIT_D_NEGQ",
    "LAMBERT4",
    "FOUR_SQUARE",
    "FOUR_TRIANGULAR",
)


def test_registry_shape():
    assert set(REGISTRY) == set(ALL_IDENTITIES)
    for name, entry in REGISTRY.items():
        assert entry.name == name
        assert entry.citation and entry.constraints
        assert callable(entry.lhs) and callable(entry.rhs)
        assert callable(entry.sample) and callable(entry.predicate)


# both sides of the limit-family identities scale like powers of (q;q)_oo,
# which is genuinely below 1e-12 for q near 0.8
TINY_SCALE = {"LIMIT_A", "LIMIT_EULER_D", "LIMIT_D_NEGQ", "LAMBERT4"}


@pytest.mark.parametrize("name", ALL_IDENTITIES)
def test_numeric_spot_checks(name):
    for pt in sample_domain(name, seed=20260823, count=3):
        report = check_identity(name, pt, tolerance=1e-9)
        assert report.passed, f"{name}: rel_err={report.rel_err} at {report.point}"
        if name not in TINY_SCALE:
            assert not report.near_trivial


def test_sample_domain_is_deterministic():
    for name in ("JTP", "RECIP5", "LIU_QINT7"):
        first = sample_domain(name, seed=5, count=4)
        second = sample_domain(name, seed=5, count=4)
        for p1, p2 in zip(first, second):
            assert p1.q == p2.q
            for slot in REGISTRY[name].slots:
                assert p1.get(slot) == p2.get(slot)
    # a different seed must move at least the q draws
    other = sample_domain("JTP", seed=6, count=4)
    assert [p.q for p in other] != [p.q for p in sample_domain("JTP", 5, 4)]


def test_sample_domain_respects_bounds():
    for name in ALL_IDENTITIES:
        for pt in sample_domain(name, seed=11, count=2):
            assert 0.05 <= pt.q <= 0.8
            assert REGISTRY[name].predicate(pt)


def test_evaluate_sides_reject_bad_points():
    with pytest.raises(DomainError):
        evaluate_lhs("NO_SUCH_IDENTITY", ParameterPoint(q=0.5))
    bad = ParameterPoint(q=0.5, x=0.0)  # JTP needs x != 0
    with pytest.raises(DomainError):
        evaluate_lhs("JTP", bad)
    with pytest.raises(DomainError):
        evaluate_rhs("JTP", bad)


def test_check_identity_reports_mismatch_without_raising():
    # two admissible points for the same identity disagree across sides
    pt = sample_domain("JTP", seed=3, count=1)[0]
    good = check_identity("JTP", pt)
    assert good.passed and good.abs_err < 1e-9 * abs(good.lhs)
    skew = pt.replace(x=pt.x * 1.01)
    bad_lhs = evaluate_lhs("JTP", pt)
    bad_rhs = evaluate_rhs("JTP", skew)
    assert abs(bad_lhs - bad_rhs) > 1e-6  # sanity: sides really depend on x


def test_rho_against_brute_force_double_sum():
    q, a, b, c, d, r, u, v = 0.5, 0.2, 0.3, 0.4, 0.3, 0.6, 0.5, 0.4
    pt = ParameterPoint(q=q, a=a, b=b, c=c, d=d, r=r, u=u, v=v)
    z = a * b * c * r * u * v / q
    brute = 0.0
    for n in range(120):
        outer = (
            v
            * qpoch_finite(q / (d * u), q, n)
            * qpoch_finite(a * c * u * v, q, n)
            * qpoch_finite(b * c * u * v, q, n)
            * (d * v) ** n
            / (
                qpoch_finite(a * v, q, n + 1)
                * qpoch_finite(b * v, q, n + 1)
                * qpoch_finite(c * v, q, n + 1)
            )
        )
        qn1 = q ** (n + 1)
        inner = 0.0
        for k in range(120):
            inner += (
                qpoch_finite(qn1, q, k)
                * qpoch_finite(v * qn1 / r, q, k)
                * qpoch_finite(q / (c * u), q, k)
                * z**k
                / (
                    qpoch_finite(q, q, k)
                    * qpoch_finite(a * v * qn1, q, k)
                    * qpoch_finite(b * v * qn1, q, k)
                )
            )
        brute += outer * inner
    got = rho(pt)
    assert abs(got - brute) <= 1e-11 * abs(brute)


def test_rho_requires_nonzero_slots():
    with pytest.raises(DomainError):
        rho(ParameterPoint(q=0.5, a=0.1, b=0.1, c=0.2, d=0.0, r=0.3, u=0.4, v=0.5))


def test_l_function_collapses_at_u_equals_v():
    # v/u = 1 terminates the series at its first term, leaving pure products
    q, a, b, u, s, t = 0.45, 0.3, 0.25, 0.5, 0.2, 0.35
    pt = ParameterPoint(q=q, a=a, b=b, u=u, v=u, s=s, t=t)
    z = a * b * s * t * u / u
    expect = (
        qpoch_infinite(a * u, q)
        * qpoch_infinite(b * u, q)
        * qpoch_infinite(z, q)
        / (
            qpoch_infinite(a * s, q)
            * qpoch_infinite(a * t, q)
            * qpoch_infinite(a * u, q)
            * qpoch_infinite(b * s, q)
            * qpoch_infinite(b * t, q)
            * qpoch_infinite(b * u, q)
        )
    )
    got = l_function(pt)
    assert abs(got - expect) <= 1e-12 * abs(expect)


def test_sears_transform_check_wraps_registry_entry():
    pt = sample_domain("SEARS_32", seed=9, count=1)[0]
    report = sears_transform_check(pt)
    assert report.identity == "SEARS_32"
    assert report.passed


def test_exact_point_builds_formal_q():
    pt = exact_point("JTP", REGISTRY["JTP"].exact_points[0], order=24)
    assert pt.q.order == 24
    report = check_identity("JTP", pt, mode="exact")
    assert report.passed and report.mode == "exact"


def _with_fake_entry(entry):
    REGISTRY[entry.name] = entry
    return entry.name


def test_near_trivial_flag_and_sampling_exhaustion():
    zero = IdentityEntry(
        name="_FAKE_ZERO",
        slots=(),
        citation="test fixture",
        constraints="none",
        predicate=lambda pt: True,
        lhs=lambda pt, P: 0.0,
        rhs=lambda pt, P: 0.0,
        sample=lambda rng, q: {},
    )
    never = IdentityEntry(
        name="_FAKE_NEVER",
        slots=(),
        citation="test fixture",
        constraints="unsatisfiable",
        predicate=lambda pt: False,
        lhs=lambda pt, P: 0.0,
        rhs=lambda pt, P: 0.0,
        sample=lambda rng, q: {},
    )
    names = [_with_fake_entry(zero), _with_fake_entry(never)]
    try:
        report = check_identity("_FAKE_ZERO", ParameterPoint(q=0.5))
        assert report.near_trivial and report.passed
        with pytest.raises(SamplingExhausted):
            sample_domain("_FAKE_NEVER", seed=1, count=1)
    finally:
        for name in names:
            del REGISTRY[name]


def test_check_identity_exact_mismatch_reports_diff():
    fake = IdentityEntry(
        name="_FAKE_EXACT",
        slots=(),
        citation="test fixture",
        constraints="none",
        predicate=lambda pt: True,
        lhs=lambda pt, P: 1 + pt.q,
        rhs=lambda pt, P: 1 + 2 * pt.q,
        sample=lambda rng, q: {},
    )
    name = _with_fake_entry(fake)
    try:
        report = check_identity(name, ParameterPoint(q=fs_var(8)), mode="exact")
        assert not report.passed
        assert math.isclose(report.abs_err, 1.0)
        assert report.diagnostics == "coefficient mismatch"
    finally:
        del REGISTRY[name]
