"""Command-line driver: list identities, run checks and suites, emit reports.

Report format: JSON object {config, results, summary}.  All numbers are
serialized as decimal strings with 17 significant digits so values
round-trip exactly; complex values serialize as {"re": ..., "im": ...}.
Wall-clock duration is printed to standard output but deliberately kept
out of the JSON body so identical configurations produce byte-identical
reports.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .errors import QSeriesError
from .identities import (
    EXACT_IDENTITIES,
    REGISTRY,
    check_identity,
    exact_point,
    sample_domain,
)
from .qcore import (
    DEFAULT_POLICY,
    SLOT_NAMES,
    ParameterPoint,
    qpoch_finite,
    qpoch_infinite,
)
from . import quadrature as quad

__all__ = ["RunConfig", "SuiteReport", "main"]

ENV_TOL = "QSERIES_TOL"
ENV_JOBS = "QSERIES_JOBS"


@dataclasses.dataclass(frozen=True)
class RunConfig:
    mode: str = "numeric"
    seed: int = 0
    samples: int = 100
    tolerance: float = 1e-9
    order: int = 40
    only: tuple = ()
    out: str | None = None
    jobs: int = 1


@dataclasses.dataclass
class SuiteReport:
    config: RunConfig
    results: list
    summary: dict
    duration: float


# -- serialization -----------------------------------------------------


def _fmt(x):
    if isinstance(x, complex):
        return {"re": f"{x.real:.17g}", "im": f"{x.imag:.17g}"}
    return f"{float(x):.17g}"


def _fmt_value(v):
    """Numeric scalars to decimal strings; anything else to str."""
    if isinstance(v, (int, float, complex)):
        return _fmt(complex(v)) if isinstance(v, complex) else _fmt(v)
    return str(v)


def _result_dict(rep):
    return {
        "identity": rep.identity,
        "mode": rep.mode,
        "point": {k: _fmt_value(v) for k, v in sorted(rep.point.items())},
        "lhs": _fmt_value(rep.lhs) if rep.mode == "numeric" else None,
        "rhs": _fmt_value(rep.rhs) if rep.mode == "numeric" else None,
        "abs_err": _fmt(rep.abs_err),
        "rel_err": _fmt(rep.rel_err),
        "passed": rep.passed,
        "near_trivial": rep.near_trivial,
        "skipped": False,
        "reason": None,
    }


def _skip_dict(identity, mode, point, reason):
    return {
        "identity": identity,
        "mode": mode,
        "point": {k: _fmt_value(v) for k, v in sorted(point.items())},
        "lhs": None,
        "rhs": None,
        "abs_err": None,
        "rel_err": None,
        "passed": None,
        "near_trivial": False,
        "skipped": True,
        "reason": reason,
    }


def _summarize(results):
    return {
        "total": len(results),
        "passed": sum(1 for r in results if r["passed"] is True and not r["near_trivial"]),
        "failed": sum(1 for r in results if r["passed"] is False),
        "skipped": sum(1 for r in results if r["skipped"]),
        "near_trivial": sum(1 for r in results if r["near_trivial"]),
    }


def _emit(report, out_path):
    body = {
        "config": {
            "mode": report.config.mode,
            "seed": report.config.seed,
            "samples": report.config.samples,
            "tolerance": _fmt(report.config.tolerance),
            "order": report.config.order,
            "only": list(report.config.only),
            "jobs": report.config.jobs,
        },
        "results": report.results,
        "summary": report.summary,
    }
    text = json.dumps(body, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    return text


def _print_summary(report):
    s = report.summary
    print(
        f"{s['total']} checks: {s['passed']} passed, {s['failed']} failed, "
        f"{s['skipped']} skipped, {s['near_trivial']} near-trivial "
        f"({report.duration:.2f}s)"
    )


def _exit_code(report):
    return 0 if report.summary["failed"] == 0 else 1


# -- task execution ----------------------------------------------------


def _run_one(task):
    name, point, tolerance, mode = task
    try:
        rep = check_identity(name, point, DEFAULT_POLICY, tolerance, mode)
        return _result_dict(rep)
    except QSeriesError as exc:
        summary = {"q": point.q if not mode == "exact" else f"mod q^{point.q.order}"}
        for slot in SLOT_NAMES:
            if point.get(slot) != 0:
                summary[slot] = point.get(slot)
        return _skip_dict(name, mode, summary, f"{type(exc).__name__}: {exc}")


def _run_tasks(tasks, jobs):
    if jobs <= 1 or len(tasks) < 2:
        return [_run_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_run_one, tasks, chunksize=4))


# -- subcommands -------------------------------------------------------


def _selected(only):
    if not only:
        return list(REGISTRY)
    names = []
    for name in REGISTRY:
        if any(pat.lower() in name.lower() for pat in only):
            names.append(name)
    return names


def cmd_list(filter_text=None):
    rows = []
    for name, entry in REGISTRY.items():
        if filter_text and filter_text.lower() not in name.lower():
            continue
        slots = ", ".join(entry.slots) if entry.slots else "-"
        rows.append((name, slots, entry.constraints, entry.citation))
    widths = [max(len(r[i]) for r in rows) if rows else 0 for i in range(3)]
    lines = []
    for r in rows:
        lines.append(
            f"{r[0]:<{widths[0]}}  {r[1]:<{widths[1]}}  {r[2]:<{widths[2]}}  {r[3]}"
        )
    return "\n".join(lines)


def _exact_tasks(name, cfg):
    entry = REGISTRY[name]
    tasks = []
    if entry.slots:
        for spec in entry.exact_points:
            tasks.append((name, exact_point(name, spec, cfg.order), cfg.tolerance, "exact"))
    else:
        # parameterless identities: vary the truncation order instead
        for k in range(5):
            order = max(4, cfg.order - 4 * k)
            tasks.append((name, exact_point(name, {}, order), cfg.tolerance, "exact"))
    return tasks


def cmd_suite(cfg):
    t0 = time.time()
    names = _selected(cfg.only)
    tasks = []
    results = []
    for name in names:
        if cfg.mode == "exact":
            if name not in EXACT_IDENTITIES:
                continue
            tasks.extend(_exact_tasks(name, cfg))
        else:
            try:
                points = sample_domain(name, cfg.seed, cfg.samples)
            except QSeriesError as exc:
                results.append(
                    _skip_dict(name, cfg.mode, {}, f"{type(exc).__name__}: {exc}")
                )
                continue
            tasks.extend((name, pt, cfg.tolerance, cfg.mode) for pt in points)
    results.extend(_run_tasks(tasks, cfg.jobs))
    return SuiteReport(cfg, results, _summarize(results), time.time() - t0)


def cmd_check(name, cfg, explicit=None):
    t0 = time.time()
    if name not in REGISTRY:
        raise KeyError(name)
    entry = REGISTRY[name]
    results = []
    if explicit is not None:
        pt = ParameterPoint(**explicit)
        if not entry.predicate(pt):
            results.append(
                _skip_dict(
                    name,
                    cfg.mode,
                    {k: v for k, v in explicit.items()},
                    "point violates domain constraints",
                )
            )
        else:
            results.append(_run_one((name, pt, cfg.tolerance, cfg.mode)))
    elif cfg.mode == "exact":
        if name not in EXACT_IDENTITIES:
            results.append(
                _skip_dict(name, cfg.mode, {}, "identity not in the exact-mode subset")
            )
        else:
            results.extend(_run_tasks(_exact_tasks(name, cfg), cfg.jobs))
    else:
        points = sample_domain(name, cfg.seed, cfg.samples)
        tasks = [(name, pt, cfg.tolerance, cfg.mode) for pt in points]
        results.extend(_run_tasks(tasks, cfg.jobs))
    return SuiteReport(cfg, results, _summarize(results), time.time() - t0)


def _integral_report(name, point, lhs, rhs, tolerance, absolute=False):
    abs_err = abs(lhs - rhs)
    rel_err = abs_err / max(abs(lhs), abs(rhs), 1e-300)
    passed = abs_err <= tolerance if absolute else rel_err <= tolerance
    return {
        "identity": name,
        "mode": "numeric",
        "point": {k: _fmt_value(v) for k, v in sorted(point.items())},
        "lhs": _fmt_value(lhs),
        "rhs": _fmt_value(rhs),
        "abs_err": _fmt(abs_err),
        "rel_err": _fmt(rel_err),
        "passed": passed,
        "near_trivial": False,
        "skipped": False,
        "reason": None,
    }


def cmd_integrals(cfg):
    if cfg.mode != "numeric":
        raise ValueError("integrals run in numeric mode only")
    t0 = time.time()
    rng = random.Random(f"INTEGRALS:{cfg.seed}")
    results = []
    n_pts = cfg.samples

    def draw4():
        q = rng.uniform(0.2, 0.7)
        vals = [rng.uniform(0.05, 0.64) * (1 if rng.random() < 0.5 else -1) for _ in range(4)]
        return (q, *vals)

    for _ in range(n_pts):
        q, a, b, c, d = draw4()
        lhs = quad.askey_wilson_integral(a, b, c, d, q).real
        num = qpoch_infinite(a * b * c * d, q)
        den = 1.0
        for w in (q, a * b, a * c, a * d, b * c, b * d, c * d):
            den *= qpoch_infinite(w, q)
        rhs = 2 * math.pi * num / den
        results.append(
            _integral_report(
                "ASKEY_WILSON", {"q": q, "a": a, "b": b, "c": c, "d": d}, lhs, rhs, max(cfg.tolerance, 1e-8)
            )
        )

    for _ in range(n_pts):
        q, a, b, c, d = draw4()
        while abs(c) < 0.05:
            q, a, b, c, d = draw4()
        rmax = 0.8 * abs(c) / max(abs(a * b), 1e-12)
        r = rng.uniform(0.1, 1.0) * min(rmax, 1.0) * (1 if rng.random() < 0.5 else -1)
        lhs = quad.liu_beta_integral(a, b, c, d, r, q).real
        num = qpoch_infinite(a * b * d * r, q)
        den = 1.0
        for w in (q, a * c, a * d, b * c, b * d, c * d, a * b * r / c):
            den *= qpoch_infinite(w, q)
        rhs = 2 * math.pi * num / den
        results.append(
            _integral_report(
                "LIU_BETA",
                {"q": q, "a": a, "b": b, "c": c, "d": d, "r": r},
                lhs,
                rhs,
                max(cfg.tolerance, 1e-7),
            )
        )
        red_lhs = quad.liu_beta_integral(a, b, c, d, c, q).real
        red_rhs = quad.askey_wilson_integral(a, b, c, d, q).real
        results.append(
            _integral_report(
                "LIU_BETA_R_EQ_C",
                {"q": q, "a": a, "b": b, "c": c, "d": d},
                red_lhs,
                red_rhs,
                max(cfg.tolerance, 1e-9),
            )
        )

    for q in (0.3, 0.5, 0.7):
        pq_inf = qpoch_infinite(q, q)
        for m in range(7):
            for n in range(7):
                val = quad.qhermite_orthogonality(m, n, q)
                if m == n:
                    rhs = 2 * math.pi * qpoch_finite(q, q, n) / pq_inf
                    results.append(
                        _integral_report(
                            "QHERMITE_ORTHO", {"q": q, "m": m, "n": n}, val, rhs, 1e-8
                        )
                    )
                else:
                    results.append(
                        _integral_report(
                            "QHERMITE_ORTHO", {"q": q, "m": m, "n": n}, val, 0.0, 1e-9, absolute=True
                        )
                    )

    for _ in range(n_pts):
        q = rng.uniform(0.1, 0.7)
        t = rng.uniform(-0.8, 0.8)
        theta = rng.uniform(0.0, math.pi)
        rep = quad.qhermite_gf_check(t, theta, q, tolerance=max(cfg.tolerance, 1e-10))
        results.append(_result_dict(rep))

    return SuiteReport(cfg, results, _summarize(results), time.time() - t0)


# -- argument parsing --------------------------------------------------


def _add_common(p):
    p.add_argument("--mode", choices=("numeric", "exact"), default="numeric")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--order", type=int, default=40)
    p.add_argument("--only", nargs="*", default=())
    p.add_argument("--out", default=None)
    p.add_argument("--jobs", type=int, default=None)


def _config_from(args, default_samples):
    tol = args.tol
    if tol is None:
        tol = float(os.environ.get(ENV_TOL, "1e-9"))
    jobs = args.jobs
    if jobs is None:
        jobs = int(os.environ.get(ENV_JOBS, "1"))
    samples = args.samples if args.samples is not None else default_samples
    if samples < 1 or tol <= 0 or jobs < 1 or args.order < 1 or args.seed < 0:
        raise ValueError("invalid configuration values")
    return RunConfig(
        mode=args.mode,
        seed=args.seed,
        samples=samples,
        tolerance=tol,
        order=args.order,
        only=tuple(args.only),
        out=args.out,
        jobs=jobs,
    )


def _parse_scalar(text):
    return complex(text.replace(" ", ""))


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="qseries", description="q-series identity verification harness"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_list = sub.add_parser("list", help="list registry entries")
    p_list.add_argument("--filter", default=None)

    p_check = sub.add_parser("check", help="check one identity")
    p_check.add_argument("identity")
    _add_common(p_check)
    p_check.add_argument("--q", type=float, default=None)
    for slot in SLOT_NAMES:
        p_check.add_argument(f"--{slot}", type=_parse_scalar, default=None)

    p_suite = sub.add_parser("suite", help="run the full suite")
    _add_common(p_suite)

    p_int = sub.add_parser("integrals", help="run the quadrature checks")
    _add_common(p_int)

    args = parser.parse_args(argv)

    try:
        if args.command == "list":
            print(cmd_list(args.filter))
            return 0
        if args.command == "check":
            cfg = _config_from(args, default_samples=10)
            explicit = None
            if args.q is not None:
                explicit = {"q": args.q}
                for slot in SLOT_NAMES:
                    val = getattr(args, slot)
                    if val is not None:
                        explicit[slot] = val
            report = cmd_check(args.identity, cfg, explicit)
        elif args.command == "suite":
            cfg = _config_from(args, default_samples=100)
            report = cmd_suite(cfg)
        else:
            cfg = _config_from(args, default_samples=20)
            report = cmd_integrals(cfg)
    except KeyError as exc:
        print(f"error: unknown identity {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, QSeriesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    text = _emit(report, cfg.out)
    if not cfg.out:
        print(text)
    _print_summary(report)
    return _exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
