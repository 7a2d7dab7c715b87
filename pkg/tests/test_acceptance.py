"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.  The heavy fixtures (the exact Q table up to n = 300 and
the exact power rows at order 3000) are session-scoped and shared.
"""

import math
import time
from fractions import Fraction

import pytest

from nekrasov import analysis, darcais, series
from nekrasov.cli import EXIT_OK, main
from nekrasov.partitions import enumerate_partitions, multiplicities, partition_count
from nekrasov.series import f_series, ln_lower_bound, partition_series, series_exp
from nekrasov.stirling import (
    descent_check,
    harmonic,
    mode_bound_check,
    q_coeffs,
    sibuya_check,
    stirling_ratio_decay_check,
)

KNOWN_SMALL = {
    0: (Fraction(1),),
    1: (Fraction(1), Fraction(1)),
    2: (Fraction(2), Fraction(5, 2), Fraction(1, 2)),
    3: (Fraction(3), Fraction(29, 6), Fraction(2), Fraction(1, 6)),
}

N0_TABLE = {2: 6, 3: 21, 4: 39, 5: 73, 6: 135, 7: 251, 8: 475, 9: 917,
            10: 1801, 11: 3595, 12: 7259, 13: 14787}


def verdict(num: int, ok: bool, detail: str) -> None:
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


@pytest.fixture(scope="session")
def q_table_300():
    t0 = time.perf_counter()
    table = darcais.q_table_via_recursion(300)
    print(f"\n[fixture] exact Q table up to n=300 in {time.perf_counter() - t0:.1f}s")
    return table


def test_criterion_01_paper_polynomials(capsys):
    t0 = time.perf_counter()
    code = main(["qpoly", "--n", "0..3", "--method", "all"])
    out = capsys.readouterr().out
    elapsed = time.perf_counter() - t0
    ok = code == EXIT_OK and "# verdict agree" in out
    for n, coeffs in KNOWN_SMALL.items():
        for k, c in enumerate(coeffs):
            ok = ok and f"{n} {k} {c}" in out
        for method in darcais.method_names():
            ok = ok and darcais.q_polynomial(n, method).coeffs == coeffs
    ok = ok and elapsed < 1.0
    with capsys.disabled():
        verdict(1, ok, f"Q_0..Q_3 exact, four methods agree ({elapsed:.2f}s < 1s)")


def test_criterion_02_four_way_agreement():
    t0 = time.perf_counter()
    ok = True
    for n in range(26):
        ref = darcais.q_via_recursion(n).coeffs
        ok = ok and darcais.q_via_hooks(n).coeffs == ref
        ok = ok and darcais.q_via_trivial_hooks(n).coeffs == ref
        ok = ok and darcais.q_via_multiplicities(n).coeffs == ref
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 120.0
    verdict(2, ok, f"four-way agreement for n <= 25 ({elapsed:.1f}s < 120s)")


def test_criterion_03_conjecture_table_exact():
    t0 = time.perf_counter()
    ok = True
    rows = []
    for k in range(2, 10):
        report = analysis.scan_conjecture(k, mode="exact")
        rows.append(f"k={k}: n0={report.n0} ({report.elapsed:.1f}s)")
        ok = ok and report.n0 == N0_TABLE[k] and report.certified
        ok = ok and report.mode_of_certification == "exact"
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 600.0
    verdict(3, ok, f"exact n0 table k=2..9: {'; '.join(rows)} ({elapsed:.1f}s < 600s)")


def test_criterion_04_conjecture_table_certified_float():
    t0 = time.perf_counter()
    ok = True
    rows = []
    for k in range(10, 14):
        report = analysis.scan_conjecture(k, mode="adaptive-float")
        rows.append(f"k={k}: n0={report.n0} ({report.elapsed:.1f}s)")
        ok = ok and report.n0 == N0_TABLE[k]
        ok = ok and report.certified and report.mode_of_certification == "adaptive-float"
        ok = ok and report.violations_checked == report.n0 - 1
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 3600.0
    verdict(4, ok, f"certified float n0 table k=10..13: {'; '.join(rows)} "
                   f"(actual runtime {elapsed:.1f}s < 3600s)")


def test_criterion_05_log_concavity_to_300(q_table_300):
    t0 = time.perf_counter()
    ok = True
    for q in q_table_300[1:]:
        ok = ok and analysis.is_log_concave(q.coeffs) is None
        ok = ok and all(c > 0 for c in q.coeffs)
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 900.0
    verdict(5, ok, f"Q_n log-concave and positive for n <= 300 ({elapsed:.1f}s < 900s)")


def test_criterion_06_identity_suite(q_table_300):
    ok = series_exp(f_series(200)) == partition_series(200)
    f = f_series(100)
    pseries = partition_series(100)
    for k in range(0, 6):
        lhs = darcais.coefficient_series(k, 100)
        rhs = series.series_multiply(series.series_power(f, k), pseries)
        inv = Fraction(1, math.factorial(k))
        ok = ok and all(lhs[n] == rhs[n] * inv for n in range(101))
    for q in q_table_300[:101]:
        ok = ok and q.coeffs[0] == partition_count(q.n)
        ok = ok and q.coeffs[q.n] == Fraction(1, math.factorial(q.n))
    verdict(6, ok, "exp(f)=partition series at N=200; generating identity k<=5, "
                   "N<=100; edge coefficients n<=100; all exact")


def test_criterion_07_stirling_suite():
    t0 = time.perf_counter()
    ok = all(
        sibuya_check(n, m).holds for n in range(2, 151) for m in range(2, n + 1)
    )
    for n in range(2, 61):
        bound = 2 * harmonic(n) + 1
        for m in range(1, n + 1):
            if Fraction(m) < bound:
                continue
            for t in range(0, n - m + 1):
                ok = ok and stirling_ratio_decay_check(n, m, t)
    for n in range(2, 19):
        for p in enumerate_partitions(n):
            k_vec = list(multiplicities(p).values())
            ok = ok and descent_check(k_vec, n).holds
            ok = ok and mode_bound_check(k_vec, n).holds
            ok = ok and analysis.is_log_concave(q_coeffs(k_vec)) is None
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 300.0
    verdict(7, ok, f"Sibuya n<=150; decay bound n<=60; descent, mode and "
                   f"log-concavity over partitions of n<=18 ({elapsed:.1f}s < 300s)")


def test_criterion_08_surrogate_log_concavity():
    ok = True
    for k in (2, 3, 4, 5):
        seq = analysis.surrogate_binomial_sequence(k, 27, 300)
        ok = ok and analysis.is_log_concave(seq) is None
    windows = []
    for k in range(2, 9):
        hi = min(2**k, 400)
        if hi < 29:
            windows.append(f"k={k}: empty")
            continue  # fewer than three points: nothing to check
        seq = analysis.surrogate_truncated_sequence(k, 27, hi)
        ok = ok and analysis.is_log_concave(seq) is None
        windows.append(f"k={k}: 27..{hi}")
    verdict(8, ok, f"binomial surrogate log-concave 27..300 for k=2..5; "
                   f"truncated surrogate windows {', '.join(windows)}")


def test_criterion_09_asymptotic_ratio_properties():
    ok = True
    details = []
    for k in (1, 2, 3):
        for n in (100, 300, 1000, 3000):
            report = analysis.partial_sum_ratio(k, n)
            # exact-side envelope: 5 k^2 ln(n)/n with a rational lower bound
            # on ln(n), so the asserted inequality implies the stated one
            envelope = Fraction(5 * k * k) * ln_lower_bound(n) / n
            dev = max(abs(Fraction(report.ratio_lo) - 1), abs(Fraction(report.ratio_hi) - 1))
            ok = ok and dev <= envelope
            details.append(f"k={k},n={n}: |r-1|<={float(dev):.2e}")
    r500 = analysis.hardy_ramanujan_ratio(500)
    ok = ok and 0.9 <= r500.ratio_lo <= r500.ratio_hi <= 1.1
    rs = [analysis.hardy_ramanujan_ratio(n) for n in (100, 200, 400)]
    dist_lo = [max(r.ratio_lo - 1, 1 - r.ratio_hi, 0.0) for r in rs]
    dist_hi = [max(r.ratio_hi - 1, 1 - r.ratio_lo) for r in rs]
    ok = ok and dist_lo[0] > dist_hi[1] and dist_lo[1] > dist_hi[2]
    verdict(9, ok, f"partial-sum ratios within 5 k^2 ln(n)/n at 12 grid points; "
                   f"HR ratio at 500 in [0.9, 1.1], monotone over 100/200/400")


def test_criterion_10_tail_monotonicity(q_table_300):
    ok = True
    details = []
    for n in (50, 100, 200, 300):
        start = math.ceil(math.sqrt(n) * math.log(n))
        coeffs = q_table_300[n].coeffs
        ok = ok and analysis.tail_monotone_from(coeffs, start)
        details.append(f"n={n}: from {start}")
    verdict(10, ok, f"Q_n rows monotone decreasing from ceil(sqrt(n) ln n): "
                    f"{', '.join(details)}")
