"""Batch command-line front end.

Commands: qpoly, scan, verify, series-dump, stirling-dump.  Data goes to
stdout (or --out); progress and diagnostics go to stderr.  Exit status:
0 = all certified and passing, 1 = a verified violation of an asserted
property, 2 = uncertified or aborted computation.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from . import analysis, darcais, series, stirling
from .darcais import EnumerationLimitError
from .partitions import enumerate_partitions, multiplicities, partition_count

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_ABORTED = 2

FORMATS = ("csv", "json", "tsv")
METHOD_CHOICES = darcais.method_names() + ["all"]
SUITES = ("identities", "logconcave", "stirling", "all")


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one CLI invocation."""

    command: str
    fmt: str = "tsv"
    out: str | None = None
    mode: str = "exact"
    precision_cap: int = analysis.DEFAULT_PRECISION_CAP
    exact_fallback: int = analysis.DEFAULT_EXACT_FALLBACK
    jobs: int = 1
    ns: tuple[int, ...] = ()
    ks: tuple[int, ...] = ()
    method: str = "recursion"
    n_max: int | None = None
    suite: str = "all"
    rule: str = "sigma-minus-one"
    order: int = 10

    def __post_init__(self):
        if self.fmt not in FORMATS:
            raise ValueError(f"unknown format {self.fmt!r}")
        if self.precision_cap < 53:
            raise ValueError("precision cap must be >= 53 bits")
        if self.mode not in ("exact", "adaptive-float"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if self.command == "qpoly":
            if not self.ns:
                raise ValueError("empty n range")
            if self.method not in METHOD_CHOICES:
                raise ValueError(f"unknown method {self.method!r}")
        if self.command == "scan" and not self.ks:
            raise ValueError("empty k range")
        if self.command == "verify" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")


def parse_range(text: str) -> tuple[int, ...]:
    """Parse "7" or "2..5" (inclusive) into a tuple of ints."""
    if ".." in text:
        lo_s, hi_s = text.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
        if hi < lo:
            raise ValueError(f"empty range {text!r}")
        return tuple(range(lo, hi + 1))
    return (int(text),)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out, "w") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")


# ---------------------------------------------------------------------------
# qpoly
# ---------------------------------------------------------------------------

def cmd_qpoly(config: RunConfig) -> int:
    methods = darcais.method_names() if config.method == "all" else [config.method]
    blocks: dict[str, list[darcais.QPolynomial]] = {}
    for method in methods:
        blocks[method] = [darcais.q_polynomial(n, method) for n in config.ns]
    agree = all(
        blocks[m][i].coeffs == blocks[methods[0]][i].coeffs
        for m in methods
        for i in range(len(config.ns))
    )

    if config.fmt == "json":
        if config.method == "all":
            payload = {
                "methods": {
                    m: [{"n": p.n, "coeffs": [str(c) for c in p.coeffs]} for p in polys]
                    for m, polys in blocks.items()
                },
                "agree": agree,
            }
        else:
            payload = [
                {"n": p.n, "coeffs": [str(c) for c in p.coeffs]}
                for p in blocks[config.method]
            ]
        _emit(json.dumps(payload, separators=(",", ":")), config.out)
    elif config.fmt == "csv":
        lines = ["method,n,k,coeff"]
        for m in methods:
            for p in blocks[m]:
                lines.extend(f"{m},{p.n},{k},{c}" for k, c in enumerate(p.coeffs))
        _emit("\n".join(lines), config.out)
    else:
        lines = []
        for m in methods:
            if config.method == "all":
                lines.append(f"# method={m}")
            for p in blocks[m]:
                lines.extend(p.dump_lines())
        if config.method == "all":
            lines.append(f"# verdict {'agree' if agree else 'disagree'}")
        _emit("\n".join(lines), config.out)

    if not agree:
        print("qpoly: methods disagree", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


# ---------------------------------------------------------------------------
# scan
# ---------------------------------------------------------------------------

def _scan_one(args: tuple) -> analysis.ScanReport:
    k, n_max, mode, fallback, cap, rule = args
    if rule == "sigma-minus-one":
        return analysis.scan_conjecture(
            k, n_max, mode, exact_fallback=fallback, precision_cap=cap
        )
    return analysis.scan_conjecture_custom(
        rule, k, n_max, mode, exact_fallback=fallback, precision_cap=cap
    )


def cmd_scan(config: RunConfig) -> int:
    jobs = [
        (k, config.n_max, config.mode, config.exact_fallback, config.precision_cap, config.rule)
        for k in sorted(config.ks)
    ]
    if config.jobs > 1 and len(jobs) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=config.jobs) as pool:
            reports = list(pool.map(_scan_one, jobs))
    else:
        reports = []
        for job in jobs:
            reports.append(_scan_one(job))
            print(f"scan: k={job[0]} done in {int(reports[-1].elapsed * 1000)} ms",
                  file=sys.stderr)
    reports.sort(key=lambda r: r.k)

    if config.fmt == "json":
        _emit(json.dumps([r.to_dict() for r in reports], separators=(",", ":")), config.out)
    elif config.fmt == "tsv":
        lines = [analysis.SCAN_CSV_HEADER.replace(",", "\t")]
        lines.extend(r.csv_row().replace(",", "\t") for r in reports)
        _emit("\n".join(lines), config.out)
    else:
        lines = [analysis.SCAN_CSV_HEADER]
        lines.extend(r.csv_row() for r in reports)
        _emit("\n".join(lines), config.out)

    if any(not r.certified for r in reports):
        print("scan: uncertified results present", file=sys.stderr)
        return EXIT_ABORTED
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _checks_identities(n_max: int) -> list[tuple[str, bool]]:
    checks = []
    f = series.f_series(n_max)
    checks.append((
        "exp-of-f-equals-partition-series",
        series.series_exp(f) == series.partition_series(n_max),
    ))
    pseries = series.partition_series(n_max)
    ok = True
    for k in range(0, min(5, n_max) + 1):
        lhs = darcais.coefficient_series(k, n_max)
        rhs = series.series_multiply(series.series_power(f, k), pseries)
        inv_kf = Fraction(1, math.factorial(k))
        ok = ok and all(lhs[n] == rhs[n] * inv_kf for n in range(n_max + 1))
    checks.append(("generating-identity-per-k", ok))
    enum_cap = min(n_max, darcais.enumeration_limit())
    ok = True
    for n in range(enum_cap + 1):
        ref = darcais.q_via_recursion(n).coeffs
        ok = ok and all(
            darcais.q_polynomial(n, m).coeffs == ref for m in darcais.method_names()[1:]
        )
    checks.append(("four-way-agreement", ok))
    table = darcais.q_table_via_recursion(n_max)
    checks.append((
        "edge-coefficients",
        all(
            q.coeffs[0] == partition_count(q.n) and q.coeffs[q.n] == Fraction(1, math.factorial(q.n))
            for q in table
        ),
    ))
    order = min(n_max, 100)
    fs = series.f_series(order)
    powers = {j: series.series_power(fs, j) for j in range(1, 7)}
    ok = True
    for a in range(1, 6):
        for b in range(1, 7 - a):
            ok = ok and series.series_multiply(powers[a], powers[b]) == powers[a + b]
    checks.append(("power-consistency", ok))
    return checks


def _checks_logconcave(n_max: int) -> list[tuple[str, bool]]:
    checks = []
    table = darcais.q_table_via_recursion(n_max)
    checks.append((
        "qpoly-rows-log-concave",
        all(analysis.is_log_concave(q.coeffs) is None for q in table[1:]),
    ))
    checks.append((
        "qpoly-rows-unimodal",
        all(analysis.is_unimodal(q.coeffs)[0] for q in table[1:]),
    ))
    checks.append((
        "qpoly-coefficients-positive",
        all(c > 0 for q in table for c in q.coeffs),
    ))
    pn = [partition_count(n) for n in range(25, 1001)]
    checks.append(("partition-count-tail-log-concave", analysis.is_log_concave(pn) is None))
    hi = max(60, min(n_max, 300))
    ok = True
    for k in (2, 3):
        seq = analysis.surrogate_binomial_sequence(k, 27, hi)
        ok = ok and analysis.is_log_concave(seq) is None
    checks.append(("binomial-surrogate-log-concave", ok))
    seq = analysis.surrogate_truncated_sequence(5, 27, 32)
    checks.append(("truncated-surrogate-log-concave", analysis.is_log_concave(seq) is None))
    return checks


def _checks_stirling(n_max: int) -> list[tuple[str, bool]]:
    checks = []
    top = max(n_max, 10)
    checks.append((
        "row-sums",
        all(
            sum(stirling.stirling_unsigned(n, m) for m in range(n + 1)) == math.factorial(n)
            for n in range(top + 1)
        ),
    ))
    ok = True
    for n in range(min(top, 25) + 1):
        poly = [1]
        for i in range(n):
            poly = [0] + poly
            prev = poly[:]
            for j in range(len(poly) - 1):
                poly[j] += i * prev[j + 1]
        ok = ok and all(
            stirling.stirling_unsigned(n, m) == poly[m] for m in range(n + 1)
        )
    checks.append(("rising-factorial-expansion", ok))
    checks.append((
        "sibuya-inequality",
        all(
            stirling.sibuya_check(n, m).holds
            for n in range(2, top + 1)
            for m in range(2, n + 1)
        ),
    ))
    ok = True
    for n in range(2, min(top, 60) + 1):
        for m in range(1, n + 1):
            if Fraction(m) < 2 * stirling.harmonic(n) + 1:
                continue
            for t in range(0, n - m + 1):
                ok = ok and stirling.stirling_ratio_decay_check(n, m, t)
    checks.append(("ratio-decay-bound", ok))
    part_cap = min(max(n_max, 2), 18)
    descent_ok = True
    mode_ok = True
    logconcave_ok = True
    for n in range(2, part_cap + 1):
        for part in enumerate_partitions(n):
            k_vec = list(multiplicities(part).values())
            descent_ok = descent_ok and stirling.descent_check(k_vec, n).holds
            mode_ok = mode_ok and stirling.mode_bound_check(k_vec, n).holds
            logconcave_ok = logconcave_ok and analysis.is_log_concave(stirling.q_coeffs(k_vec)) is None
    checks.append(("constrained-sum-descent", descent_ok))
    checks.append(("mode-below-threshold", mode_ok))
    checks.append(("binomial-product-log-concave", logconcave_ok))
    return checks


_SUITE_BUILDERS: dict[str, tuple[Callable[[int], list[tuple[str, bool]]], int]] = {
    "identities": (_checks_identities, 20),
    "logconcave": (_checks_logconcave, 60),
    "stirling": (_checks_stirling, 40),
}


def cmd_verify(config: RunConfig) -> int:
    suites = list(_SUITE_BUILDERS) if config.suite == "all" else [config.suite]
    results: list[tuple[str, str, bool]] = []
    for name in suites:
        builder, default_knob = _SUITE_BUILDERS[name]
        knob = config.n_max if config.n_max is not None else default_knob
        for check, ok in builder(knob):
            results.append((name, check, ok))
            print(f"verify: {name}/{check}: {'pass' if ok else 'FAIL'}", file=sys.stderr)

    if config.fmt == "json":
        payload = [
            {"suite": s, "check": c, "status": "pass" if ok else "fail"}
            for s, c, ok in results
        ]
        _emit(json.dumps(payload, separators=(",", ":")), config.out)
    else:
        sep = "," if config.fmt == "csv" else "\t"
        lines = [sep.join(("suite", "check", "status"))]
        lines.extend(
            sep.join((s, c, "pass" if ok else "fail")) for s, c, ok in results
        )
        _emit("\n".join(lines), config.out)
    return EXIT_OK if all(ok for _, _, ok in results) else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# dumps
# ---------------------------------------------------------------------------

def cmd_series_dump(config: RunConfig) -> int:
    s = series.custom_series(config.rule, config.order)
    if config.fmt == "json":
        payload = {
            "rule": config.rule,
            "order": s.order,
            "coeffs": [str(c) for c in s.coeffs],
        }
        _emit(json.dumps(payload, separators=(",", ":")), config.out)
    elif config.fmt == "csv":
        lines = ["n,coeff"] + [f"{n},{c}" for n, c in enumerate(s.coeffs)]
        _emit("\n".join(lines), config.out)
    else:
        _emit("\n".join(s.dump_lines()), config.out)
    return EXIT_OK


def cmd_stirling_dump(config: RunConfig) -> int:
    n_max = config.n_max if config.n_max is not None else 10
    table = stirling.StirlingTable(n_max)
    if config.fmt == "json":
        payload = {"n_max": n_max, "rows": [table.row(n) for n in range(n_max + 1)]}
        _emit(json.dumps(payload, separators=(",", ":")), config.out)
    elif config.fmt == "csv":
        lines = ["n,m,value"]
        for n in range(n_max + 1):
            lines.extend(f"{n},{m},{v}" for m, v in enumerate(table.row(n)))
        _emit("\n".join(lines), config.out)
    else:
        lines = []
        for n in range(n_max + 1):
            lines.extend(f"{n} {m} {v}" for m, v in enumerate(table.row(n)))
        _emit("\n".join(lines), config.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _add_shared(parser: argparse.ArgumentParser, default_fmt: str) -> None:
    parser.add_argument("--format", choices=FORMATS, default=default_fmt)
    parser.add_argument("--out", default=None, help="output path (default: stdout)")
    parser.add_argument("--mode", choices=("exact", "adaptive-float"), default="exact")
    parser.add_argument("--precision-cap", type=int, default=analysis.DEFAULT_PRECISION_CAP,
                        help="highest enclosure precision before exact fallback")
    parser.add_argument("--exact-fallback", type=int, default=analysis.DEFAULT_EXACT_FALLBACK,
                        help="largest n recomputed exactly when enclosures overlap")
    parser.add_argument("--jobs", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nekrasov",
        description="Exact Nekrasov-Okounkov / D'Arcais polynomial computations "
                    "and log-concavity verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    qp = sub.add_parser("qpoly", help="compute Q_n coefficient tables")
    qp.add_argument("--n", required=True, help="single n or inclusive range lo..hi")
    qp.add_argument("--method", choices=METHOD_CHOICES, default="recursion")
    _add_shared(qp, "tsv")

    sc = sub.add_parser("scan", help="first log-concavity violation of c_{.,k}")
    sc.add_argument("--k", required=True, help="single k or inclusive range lo..hi")
    sc.add_argument("--n-max", type=int, default=None,
                    help="scan bound (default: max(2*2^k, 256))")
    sc.add_argument("--rule", default="sigma-minus-one",
                    choices=series.series_rule_names())
    _add_shared(sc, "csv")

    vf = sub.add_parser("verify", help="run named invariant suites")
    vf.add_argument("--suite", choices=SUITES, default="all")
    vf.add_argument("--n-max", type=int, default=None, help="suite size knob")
    _add_shared(vf, "csv")

    sd = sub.add_parser("series-dump", help="dump a generating rule's coefficients")
    sd.add_argument("--rule", default="sigma-minus-one",
                    choices=series.series_rule_names())
    sd.add_argument("--order", type=int, default=10)
    _add_shared(sd, "tsv")

    st = sub.add_parser("stirling-dump", help="dump the unsigned Stirling triangle")
    st.add_argument("--n-max", type=int, default=10)
    _add_shared(st, "tsv")

    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    kwargs = dict(
        command=ns.command,
        fmt=ns.format,
        out=ns.out,
        mode=ns.mode,
        precision_cap=ns.precision_cap,
        exact_fallback=ns.exact_fallback,
        jobs=ns.jobs,
    )
    if ns.command == "qpoly":
        kwargs.update(ns=parse_range(ns.n), method=ns.method)
    elif ns.command == "scan":
        kwargs.update(ks=parse_range(ns.k), n_max=ns.n_max, rule=ns.rule)
    elif ns.command == "verify":
        kwargs.update(suite=ns.suite, n_max=ns.n_max)
    elif ns.command == "series-dump":
        kwargs.update(rule=ns.rule, order=ns.order)
    elif ns.command == "stirling-dump":
        kwargs.update(n_max=ns.n_max)
    return RunConfig(**kwargs)


_DISPATCH: dict[str, Callable[[RunConfig], int]] = {
    "qpoly": cmd_qpoly,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "series-dump": cmd_series_dump,
    "stirling-dump": cmd_stirling_dump,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        config = config_from_args(ns)
        return _DISPATCH[config.command](config)
    except EnumerationLimitError as exc:
        print(f"nekrasov: {exc}", file=sys.stderr)
        return EXIT_ABORTED
    except ValueError as exc:
        print(f"nekrasov: {exc}", file=sys.stderr)
        return EXIT_ABORTED


if __name__ == "__main__":
    sys.exit(main())
