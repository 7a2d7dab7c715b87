"""Unsigned Stirling numbers of the first kind and related inequalities.

The table rows satisfy sum_m [n m] t^m = t(t+1)...(t+n-1).  On top of the
table: harmonic numbers, Sibuya's ratio inequality, the geometric decay of
high-order ratios, and the coefficient machinery for products of binomials
binom(k_j + z, k_j) built from part multiplicities.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


class PreconditionError(ValueError):
    """A check was called outside its mathematical precondition."""


class StirlingTable:
    """Rows 0..n_max of unsigned first-kind Stirling numbers."""

    def __init__(self, n_max: int):
        self.rows: list[list[int]] = [[1]]
        self.extend(n_max)

    @property
    def n_max(self) -> int:
        return len(self.rows) - 1

    def extend(self, n_max: int) -> None:
        while self.n_max < n_max:
            n = self.n_max
            prev = self.rows[n]
            row = [0] * (n + 2)
            for m in range(1, n + 2):
                row[m] = (prev[m - 1] if m - 1 <= n else 0) + n * (prev[m] if m <= n else 0)
            self.rows.append(row)

    def value(self, n: int, m: int) -> int:
        if n < 0 or m < 0 or m > n or n > self.n_max:
            raise ValueError(f"indices out of range: [{n} {m}] with n_max={self.n_max}")
        return self.rows[n][m]

    def row(self, n: int) -> list[int]:
        if n < 0 or n > self.n_max:
            raise ValueError(f"row {n} out of range")
        return list(self.rows[n])


_table = StirlingTable(0)
_table_lock = threading.Lock()


def stirling_unsigned(n: int, m: int) -> int:
    """[n m], growing a shared table on demand."""
    if n < 0 or m < 0 or m > n:
        raise ValueError(f"invalid Stirling indices [{n} {m}]")
    if n > _table.n_max:
        with _table_lock:
            _table.extend(n)
    return _table.rows[n][m]


_h_memo: list[Fraction] = [Fraction(0)]
_h_lock = threading.Lock()


def harmonic(n: int) -> Fraction:
    """The n-th harmonic number, exactly."""
    if n < 1:
        raise ValueError("n must be positive")
    if n >= len(_h_memo):
        with _h_lock:
            while len(_h_memo) <= n:
                m = len(_h_memo)
                _h_memo.append(_h_memo[m - 1] + Fraction(1, m))
    return _h_memo[n]


@dataclass(frozen=True)
class SibuyaResult:
    holds: bool
    ratio: Fraction
    refined_bound: Fraction
    harmonic_bound: Fraction


def sibuya_check(n: int, m: int) -> SibuyaResult:
    """Sibuya's inequality for consecutive-ratio decay of Stirling rows.

    Checks [n m]/[n m-1] <= (n-m+1) H_{n-1} / ((n-1)(m-1)) <= H_{n-1}/(m-1),
    exactly, and returns the three compared quantities.
    """
    if n < 2 or m < 2 or m > n:
        raise ValueError("requires n >= 2 and 2 <= m <= n")
    ratio = Fraction(stirling_unsigned(n, m), stirling_unsigned(n, m - 1))
    h = harmonic(n - 1)
    refined = Fraction(n - m + 1) * h / ((n - 1) * (m - 1))
    outer = h / (m - 1)
    return SibuyaResult(ratio <= refined <= outer, ratio, refined, outer)


def stirling_ratio_decay_check(n: int, m: int, t: int) -> bool:
    """Verify [n+1 m+t+1] <= 2^-t [n+1 m+1] exactly, for m >= 2 H_n + 1."""
    if t < 0 or m < 1 or m + t > n:
        raise ValueError("requires t >= 0, m >= 1 and m + t <= n")
    if Fraction(m) < 2 * harmonic(n) + 1:
        raise PreconditionError(f"m={m} is below 2*H_{n}+1")
    return (1 << t) * stirling_unsigned(n + 1, m + t + 1) <= stirling_unsigned(n + 1, m + 1)


def _nonzero_counts(k_vec: Iterable[int]) -> list[int]:
    counts = []
    for k in k_vec:
        if k < 0:
            raise ValueError("multiplicities must be non-negative")
        if k > 0:
            counts.append(k)
    return counts


def q_coeffs(k_vec: Iterable[int]) -> list[Fraction]:
    """Coefficients of prod_j binom(k_j + z, k_j) in z.

    Each factor expands through the rising factorial:
    binom(k+z, k) = (1/k!) sum_l [k+1, l+1] z^l.  Entries with k_j = 0
    contribute the factor 1 and are skipped.
    """
    counts = _nonzero_counts(k_vec)
    coeffs = [1]
    denom = 1
    for k in counts:
        row = [stirling_unsigned(k + 1, l + 1) for l in range(k + 1)]
        new = [0] * (len(coeffs) + k)
        for i, a in enumerate(coeffs):
            if a:
                for l, b in enumerate(row):
                    new[i + l] += a * b
        coeffs = new
        denom *= math.factorial(k)
    return [Fraction(c, denom) for c in coeffs]


def constrained_stirling_sum(k_vec: Iterable[int], total: int) -> int:
    """sum over (l_j) with sum l_j = total, 0 <= l_j <= k_j, of prod [k_j+1, l_j+1].

    Dynamic program over (factor index, running total); the DP row is capped
    at `total` so the cost stays O(#parts * total * max k_j).
    """
    if total < 0:
        return 0
    counts = _nonzero_counts(k_vec)
    dp = [0] * (total + 1)
    dp[0] = 1
    for k in counts:
        row = [stirling_unsigned(k + 1, l + 1) for l in range(k + 1)]
        new = [0] * (total + 1)
        for s, acc in enumerate(dp):
            if acc:
                for l, b in enumerate(row):
                    if s + l > total:
                        break
                    new[s + l] += acc * b
        dp = new
    return dp[total]


def descent_threshold(k_vec: Iterable[int], n: int) -> tuple[int, int]:
    """The comparison offsets (s, r) used by the descent and mode checks.

    r = ceil(log2 n); s sums 2*ceil(H_{k_j}) + r + 1 over the nonzero k_j.
    """
    if n < 2:
        raise ValueError("requires n >= 2")
    r = (n - 1).bit_length()
    s = 0
    for k in _nonzero_counts(k_vec):
        s += 2 * math.ceil(harmonic(k)) + r + 1
    return s, r


@dataclass(frozen=True)
class DescentResult:
    s: int
    r: int
    lhs: int
    rhs: int
    holds: bool


def descent_check(k_vec: Iterable[int], n: int) -> DescentResult:
    """Compare the constrained Stirling sums at totals s and s - r.

    Establishes that the coefficient sequence of prod binom(k_j+z, k_j) has
    started descending by index s; the constant prod 1/k_j! cancels.
    """
    counts = _nonzero_counts(k_vec)
    s, r = descent_threshold(counts, n)
    lhs = constrained_stirling_sum(counts, s)
    rhs = constrained_stirling_sum(counts, s - r)
    return DescentResult(s, r, lhs, rhs, lhs <= rhs)


@dataclass(frozen=True)
class ModeResult:
    mode: int
    s: int
    holds: bool


def mode_bound_check(k_vec: Iterable[int], n: int) -> ModeResult:
    """Check that the leftmost mode of q_coeffs(k_vec) is at most s."""
    counts = _nonzero_counts(k_vec)
    s, _ = descent_threshold(counts, n)
    coeffs = q_coeffs(counts)
    mode = max(range(len(coeffs)), key=lambda i: (coeffs[i], -i))
    return ModeResult(mode, s, mode <= s)
