"""Log-concavity diagnostics, conjecture scanners, and ratio reports.

The scanners look for the first n where the coefficients c_{n,k} of f(q)^k
violate log-concavity (c_n^2 < c_{n-1} c_{n+1}).  Two modes:

* exact: scaled-integer convolution (one common denominator per power row),
  every comparison an integer cross-multiplication.  The truncation order
  doubles until a violation is found or n_max is reached.
* adaptive-float: ball-arithmetic enclosures at 53 bits, escalated to 64-bit
  extended precision where a comparison's enclosures overlap, then to exact
  rationals below the exact-fallback bound.  A comparison is never reported
  without a disjoint-enclosure or exact certificate; if escalation runs out,
  the scan is flagged uncertified rather than guessed.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .partitions import partition_count
from .series import (
    BallSeries,
    _ld_available,
    custom_series,
    pi2_over_6_bounds,
    sigma_sieve,
)

DEFAULT_EXACT_FALLBACK = 400
DEFAULT_PRECISION_CAP = 212
SCAN_CSV_HEADER = "k,n0,mode,elapsed_ms,n_max"
RATIO_CSV_HEADER = "k,n,ratio_lo,ratio_hi,envelope"


# ---------------------------------------------------------------------------
# Sequence diagnostics
# ---------------------------------------------------------------------------

def is_log_concave(seq: Sequence) -> int | None:
    """Index of the first interior log-concavity violation, or None.

    Comparisons are exact (integer/rational cross-multiplication).
    """
    if len(seq) == 0:
        raise ValueError("sequence must be non-empty")
    for i in range(1, len(seq) - 1):
        if seq[i] * seq[i] < seq[i - 1] * seq[i + 1]:
            return i
    return None


def is_unimodal(seq: Sequence) -> tuple[bool, int]:
    """(unimodal?, leftmost argmax).

    A sequence is unimodal iff it weakly rises up to its leftmost maximum
    and weakly falls afterwards.
    """
    if len(seq) == 0:
        raise ValueError("sequence must be non-empty")
    mode = 0
    for i in range(1, len(seq)):
        if seq[i] > seq[mode]:
            mode = i
    rises = all(seq[i] <= seq[i + 1] for i in range(mode))
    falls = all(seq[i] >= seq[i + 1] for i in range(mode, len(seq) - 1))
    return rises and falls, mode


def tail_monotone_from(seq: Sequence, start: int) -> bool:
    """True iff seq[k] >= seq[k+1] for every k >= start."""
    if not (0 <= start < len(seq)):
        raise ValueError("start out of range")
    return all(seq[i] >= seq[i + 1] for i in range(start, len(seq) - 1))


def tail_start(seq: Sequence) -> int:
    """Smallest index from which the sequence is weakly decreasing."""
    t = len(seq) - 1
    for i in range(len(seq) - 2, -1, -1):
        if seq[i] >= seq[i + 1]:
            t = i
        else:
            break
    return t


# ---------------------------------------------------------------------------
# Report types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanReport:
    """Outcome of a log-concavity scan of c_{.,k}."""

    k: int
    n_max: int
    n0: int | None
    mode_of_certification: str  # "exact" or "adaptive-float"
    certified: bool
    violations_checked: int
    elapsed: float
    rule: str = "sigma-minus-one"

    def csv_row(self) -> str:
        mode = self.mode_of_certification if self.certified else "uncertified"
        n0 = "" if self.n0 is None else str(self.n0)
        return f"{self.k},{n0},{mode},{int(self.elapsed * 1000)},{self.n_max}"

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "n0": self.n0,
            "mode": self.mode_of_certification if self.certified else "uncertified",
            "certified": self.certified,
            "violations_checked": self.violations_checked,
            "elapsed_ms": int(self.elapsed * 1000),
            "n_max": self.n_max,
            "rule": self.rule,
        }


@dataclass(frozen=True)
class RatioReport:
    """A certified ratio of an exact quantity against a reference value."""

    k: int
    n: int
    lhs: Fraction
    rhs_lo: Fraction
    rhs_hi: Fraction
    ratio_lo: float
    ratio_hi: float
    envelope: float
    certification: str = "exact-over-dyadic-enclosure"

    def csv_row(self) -> str:
        return (
            f"{self.k},{self.n},{self.ratio_lo:.17g},"
            f"{self.ratio_hi:.17g},{self.envelope:.17g}"
        )


@dataclass(frozen=True)
class ShapeReport:
    """Shape diagnostics of one exact Q_n coefficient row."""

    n: int
    first_violation: int | None
    unimodal: bool
    mode: int
    tail_from: int
    low_scale: float  # n^(1/6) / ln n
    high_scale: float  # sqrt(n) * ln n


# ---------------------------------------------------------------------------
# Exact scaled-integer power rows
# ---------------------------------------------------------------------------

def _scaled_sigma_base(n_max: int) -> tuple[list[int], int, int]:
    """f(q) coefficients as integers over the common denominator lcm(1..n_max)."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    denom = math.lcm(*range(1, n_max + 1))
    sig = sigma_sieve(n_max)
    nums = [0] + [sig[n] * (denom // n) for n in range(1, n_max + 1)]
    return nums, denom, 1


def _scaled_rule_base(rule: str, n_max: int) -> tuple[list[int], int, int]:
    """A registered series over the lcm of its coefficient denominators."""
    coeffs = custom_series(rule, n_max).coeffs
    denom = math.lcm(*(c.denominator for c in coeffs))
    nums = []
    min_deg = None
    for n, c in enumerate(coeffs):
        scaled = c * denom
        nums.append(scaled.numerator)
        if min_deg is None and scaled != 0:
            min_deg = n
    return nums, denom, 0 if min_deg is None else min_deg


def _int_power_row(base: list[int], k: int, n_max: int, base_min: int) -> list[int]:
    """Numerators of base^k (common denominator: base's denominator to the k)."""
    row = list(base)
    row_min = base_min
    for _ in range(2, k + 1):
        new = [0] * (n_max + 1)
        for n in range(row_min + base_min, n_max + 1):
            hi = n - base_min
            new[n] = sum(row[i] * base[n - i] for i in range(row_min, hi + 1))
        row = new
        row_min += base_min
    return row


def _first_violation_exact(row: list[int], n_lo: int, n_hi: int) -> int | None:
    for n in range(n_lo, n_hi + 1):
        if row[n] * row[n] < row[n - 1] * row[n + 1]:
            return n
    return None


# ---------------------------------------------------------------------------
# Certified float scan with precision escalation
# ---------------------------------------------------------------------------

@dataclass
class _BallScanOutcome:
    violation: int | None
    undecided: list[int]  # undecided n, all below `violation` when it is set
    last_n: int


def _ball_scan(ball: BallSeries, k: int, n_stop: int) -> _BallScanOutcome:
    """Scan c^2 vs c_- c_+ over n in [2, n_stop] with enclosure certificates."""
    powk = ball.power(k)
    lo, hi = powk.bounds()
    scalar = lo.dtype.type
    shift = max(powk.precision_bits - 3, 1)
    down = scalar(1.0) - scalar(2.0) ** -shift
    up = scalar(1.0) + scalar(2.0) ** -shift
    # index i of the sliced arrays corresponds to n = i + 2
    c_lo, c_hi = lo[2:n_stop + 1], hi[2:n_stop + 1]
    lhs_lo = c_lo * c_lo * down
    lhs_hi = c_hi * c_hi * up
    rhs_lo = lo[1:n_stop] * lo[3:n_stop + 2] * down
    rhs_hi = hi[1:n_stop] * hi[3:n_stop + 2] * up
    holds = lhs_lo >= rhs_hi
    violates = lhs_hi < rhs_lo
    viol_idx = np.nonzero(violates)[0]
    first = int(viol_idx[0]) + 2 if len(viol_idx) else None
    und_idx = np.nonzero(~holds & ~violates)[0] + 2
    if first is not None:
        und_idx = und_idx[und_idx < first]
    return _BallScanOutcome(first, [int(u) for u in und_idx], n_stop)


def _scan_core(
    k: int,
    n_max: int,
    mode: str,
    exact_base: Callable[[int], tuple[list[int], int, int]],
    ball_base: Callable[[int, object], BallSeries],
    exact_fallback: int,
    precision_cap: int,
    rule: str,
) -> ScanReport:
    if n_max < 3:
        raise ValueError("n_max must be >= 3")
    if mode not in ("exact", "adaptive-float"):
        raise ValueError(f"unknown mode {mode!r}")
    if precision_cap < 53:
        raise ValueError("precision cap must be at least 53 bits")
    start = time.perf_counter()

    if mode == "exact":
        order = min(max(64, k + 2), n_max)
        while True:
            nums, _, base_min = exact_base(order)
            row = _int_power_row(nums, k, order, base_min)
            n0 = _first_violation_exact(row, 2, order - 1)
            if n0 is not None or order == n_max:
                checked = (n0 - 1) if n0 is not None else order - 2
                return ScanReport(
                    k, n_max, n0, "exact", True, checked,
                    time.perf_counter() - start, rule,
                )
            order = min(2 * order, n_max)

    dtypes: list = [np.float64]
    if precision_cap >= 64 and _ld_available():
        dtypes.append(np.longdouble)
    outcome = None
    for dtype in dtypes:
        stop = n_max - 1 if outcome is None or outcome.violation is None else outcome.violation
        outcome = _ball_scan(ball_base(n_max, dtype), k, stop)
        if not outcome.undecided:
            break
    viol = outcome.violation
    undecided = outcome.undecided
    if undecided:
        resolvable = [u for u in undecided if u <= exact_fallback]
        exact_row = None
        if resolvable:
            cap = max(resolvable) + 1
            nums, _, base_min = exact_base(cap)
            exact_row = _int_power_row(nums, k, cap, base_min)
        for u in sorted(undecided):
            if u > exact_fallback:
                # cannot certify triple u; the first-violation claim is void
                return ScanReport(
                    k, n_max, None, "adaptive-float", False,
                    outcome.last_n - 1 - len([x for x in undecided if x >= u]),
                    time.perf_counter() - start, rule,
                )
            if exact_row[u] * exact_row[u] < exact_row[u - 1] * exact_row[u + 1]:
                viol = u
                break
    checked = (viol - 1) if viol is not None else outcome.last_n - 1
    return ScanReport(
        k, n_max, viol, "adaptive-float", True, checked,
        time.perf_counter() - start, rule,
    )


def default_scan_bound(k: int) -> int:
    """Default n_max: the conjectured window 2^k with doubling headroom,
    floored so that small k still reach their first violation."""
    return max(2 * 2**k, 256)


def scan_conjecture(
    k: int,
    n_max: int | None = None,
    mode: str = "exact",
    *,
    exact_fallback: int = DEFAULT_EXACT_FALLBACK,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> ScanReport:
    """First log-concavity violation n0(k) of the coefficients of f(q)^k."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if n_max is None:
        n_max = default_scan_bound(k)
    return _scan_core(
        k, n_max, mode,
        lambda order: _scaled_sigma_base(order),
        lambda order, dtype: BallSeries.divisor_sum_series(order, dtype),
        exact_fallback, precision_cap, "sigma-minus-one",
    )


def scan_conjecture_custom(
    rule: str,
    k: int,
    n_max: int | None = None,
    mode: str = "exact",
    *,
    exact_fallback: int = DEFAULT_EXACT_FALLBACK,
    precision_cap: int = DEFAULT_PRECISION_CAP,
) -> ScanReport:
    """Like scan_conjecture, over any registered series rule (k >= 1 allowed)."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return _scan_core(
        k, n_max if n_max is not None else default_scan_bound(k), mode,
        lambda order: _scaled_rule_base(rule, order),
        lambda order, dtype: BallSeries.from_fractions(
            custom_series(rule, order).coeffs, dtype
        ),
        exact_fallback, precision_cap, rule,
    )


# ---------------------------------------------------------------------------
# Exact coefficient rows of f^k, cached for the ratio and surrogate reports
# ---------------------------------------------------------------------------

_row_cache: dict[int, tuple[list[int], int, int]] = {}


def _exact_sigma_row(k: int, n_max: int) -> tuple[list[int], int]:
    """(numerators, denominator) of c_{0..n_max,k}, cached per k."""
    cached = _row_cache.get(k)
    if cached is not None and cached[2] >= n_max:
        return cached[0], cached[1]
    nums, denom, base_min = _scaled_sigma_base(max(n_max, 1))
    row = _int_power_row(nums, k, n_max, base_min)
    full_denom = denom**k
    _row_cache[k] = (row, full_denom, n_max)
    return row, full_denom


def coefficient_c(n: int, k: int) -> Fraction:
    """c_{n,k}: the coefficient of q^n in f(q)^k, exactly."""
    if k < 0 or n < 0:
        raise ValueError("indices must be non-negative")
    if k == 0:
        return Fraction(1 if n == 0 else 0)
    if n == 0:
        return Fraction(0)
    row, denom = _exact_sigma_row(k, n)
    return Fraction(row[n], denom)


# ---------------------------------------------------------------------------
# Ratio reports for the asymptotic reference formulas
# ---------------------------------------------------------------------------

_FLOAT_OUT = 2.0**-50  # outward widening for one nearest-rounded conversion


def partial_sum_ratio(k: int, n: int) -> RatioReport:
    """Ratio of sum_{m<=n} c_{m,k} against (pi^2/6)^k binom(n,k).

    The partial sum is exact; the reference value is enclosed by the dyadic
    pi^2/6 bounds, and the ratio endpoints are rounded outwards.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if n < max(2, k * k):
        raise ValueError(f"requires n >= max(2, k^2) = {max(2, k * k)}")
    row, denom = _exact_sigma_row(k, n)
    lhs = Fraction(sum(row[: n + 1]), denom)
    lo6, hi6 = pi2_over_6_bounds()
    binom = math.comb(n, k)
    rhs_lo = lo6**k * binom
    rhs_hi = hi6**k * binom
    ratio_lo = float(lhs / rhs_hi) * (1.0 - _FLOAT_OUT)
    ratio_hi = float(lhs / rhs_lo) * (1.0 + _FLOAT_OUT)
    envelope = k * k * math.log(n) / n
    return RatioReport(k, n, lhs, rhs_lo, rhs_hi, ratio_lo, ratio_hi, envelope)


# Blanket relative widening for the asymptotic formula below: a dozen
# correctly-rounded float operations plus exp amplification stay under 1e-12
# for every n this library targets; 1e-9 leaves three orders of headroom.
_HR_WIDEN = 1e-9


def hardy_ramanujan_ratio(n: int) -> RatioReport:
    """Ratio of exact p(n) to exp(pi sqrt(2n/3)) / (4 sqrt(3) n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pn = partition_count(n)
    x = math.pi * math.sqrt(2.0 / 3.0) * math.sqrt(n)
    reference = math.exp(x) / (4.0 * math.sqrt(3.0) * n)
    ratio = float(pn) / reference
    ratio_lo = ratio * (1.0 - _HR_WIDEN)
    ratio_hi = ratio * (1.0 + _HR_WIDEN)
    return RatioReport(
        0, n, Fraction(pn),
        Fraction(reference * (1.0 - _HR_WIDEN)), Fraction(reference * (1.0 + _HR_WIDEN)),
        ratio_lo, ratio_hi, 0.0,
        certification="widened-float",
    )


# ---------------------------------------------------------------------------
# Trimmed convolution surrogates (log-concave approximants of A_{n,k})
# ---------------------------------------------------------------------------

def surrogate_binomial(n: int, k: int) -> Fraction:
    """(1/k!) sum_{i=1}^{n-26} p(n-i) binom(i-1, k-1).

    The transcendental prefactor is dropped: it is constant in n and cancels
    in every log-concavity ratio, keeping the value exact.
    """
    if n < 27 or k < 1:
        raise ValueError("requires n >= 27 and k >= 1")
    total = sum(partition_count(n - i) * math.comb(i - 1, k - 1) for i in range(1, n - 25))
    return Fraction(total, math.factorial(k))


def surrogate_truncated(n: int, k: int) -> Fraction:
    """(1/k!) sum_{i=0}^{n-26} p(n-i) c_{i,k}, exactly."""
    if n < 27 or k < 0:
        raise ValueError("requires n >= 27 and k >= 0")
    if k == 0:
        return Fraction(partition_count(n))
    row, denom = _exact_sigma_row(k, n - 26)
    total = sum(partition_count(n - i) * row[i] for i in range(1, n - 25))
    return Fraction(total, denom * math.factorial(k))


def surrogate_binomial_sequence(k: int, n_lo: int, n_hi: int) -> list[Fraction]:
    return [surrogate_binomial(n, k) for n in range(n_lo, n_hi + 1)]


def surrogate_truncated_sequence(k: int, n_lo: int, n_hi: int) -> list[Fraction]:
    """Values of the truncated surrogate over a range, one row fetch."""
    if n_lo < 27:
        raise ValueError("requires n_lo >= 27")
    if k == 0:
        return [Fraction(partition_count(n)) for n in range(n_lo, n_hi + 1)]
    row, denom = _exact_sigma_row(k, max(n_hi - 26, 1))
    kf = math.factorial(k)
    out = []
    for n in range(n_lo, n_hi + 1):
        total = sum(partition_count(n - i) * row[i] for i in range(1, n - 25))
        out.append(Fraction(total, denom * kf))
    return out


def shape_report(n: int) -> ShapeReport:
    """Log-concavity / mode / tail diagnostics of the exact Q_n row."""
    from .darcais import q_via_recursion

    if n < 2:
        raise ValueError("n must be >= 2")
    coeffs = q_via_recursion(n).coeffs
    violation = is_log_concave(coeffs)
    unimodal, mode = is_unimodal(coeffs)
    return ShapeReport(
        n=n,
        first_violation=violation,
        unimodal=unimodal,
        mode=mode,
        tail_from=tail_start(coeffs),
        low_scale=n ** (1.0 / 6.0) / math.log(n),
        high_scale=math.sqrt(n) * math.log(n),
    )
