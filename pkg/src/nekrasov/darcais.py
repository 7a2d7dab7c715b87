"""The polynomials Q_n(z) by four independent methods.

Q_n(z) = sum over partitions of n of prod_{cells} (1 + z/hook^2); its
coefficient table A[n][k] can equally be computed from trivial-leg hooks,
from part-multiplicity binomials, or from the power-series recursion
A_{n,k} = (1/k!) sum_i p(n-i) c_{i,k} with c_{i,k} the coefficients of f^k.
The recursion is the designated route for large n; the enumeration methods
are capped by a configurable partition budget.
"""

from __future__ import annotations

import json
import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction

from .partitions import (
    enumerate_partitions,
    hook_lengths,
    multiplicities,
    partition_count,
    trivial_leg_hooks,
)
from .series import RationalSeries, f_series, partition_series, series_multiply
from .stirling import q_coeffs

DEFAULT_ENUM_LIMIT = 32
ENUM_LIMIT_ENV = "NEKRASOV_ENUM_LIMIT"


class EnumerationLimitError(ValueError):
    """A hook-enumeration method was asked to run above its partition budget."""

    def __init__(self, n: int, limit: int):
        self.n = n
        self.limit = limit
        super().__init__(
            f"n={n} exceeds the enumeration limit {limit} "
            f"(p({n}) partitions would be enumerated; raise the limit via the "
            f"{ENUM_LIMIT_ENV} environment variable or an explicit argument)"
        )


def enumeration_limit(limit: int | None = None) -> int:
    """Resolve the partition-enumeration budget: argument, env var, default."""
    if limit is not None:
        return limit
    env = os.environ.get(ENUM_LIMIT_ENV)
    if env is not None:
        return int(env)
    return DEFAULT_ENUM_LIMIT


@dataclass(frozen=True)
class QPolynomial:
    """Exact coefficients A_{n,0..n} of Q_n(z)."""

    n: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.n + 1:
            raise ValueError(f"Q_{self.n} needs exactly {self.n + 1} coefficients")

    def dump_lines(self) -> list[str]:
        """Dump format: one "n k p/q" line per coefficient."""
        return [f"{self.n} {k} {c}" for k, c in enumerate(self.coeffs)]

    def to_json(self) -> str:
        return json.dumps(
            {"n": self.n, "coeffs": [str(c) for c in self.coeffs]},
            separators=(",", ":"),
        )


def _poly_sum_over_partitions(n: int, hooks_of, weight_of, limit: int | None) -> QPolynomial:
    cap = enumeration_limit(limit)
    if n > cap:
        raise EnumerationLimitError(n, cap)
    total = [Fraction(0)] * (n + 1)
    for part in enumerate_partitions(n):
        poly = [Fraction(1)]
        for h in hooks_of(part):
            w = weight_of(h)
            poly = [
                (poly[i] if i < len(poly) else Fraction(0))
                + (poly[i - 1] * w if i >= 1 else Fraction(0))
                for i in range(len(poly) + 1)
            ]
        for i, c in enumerate(poly):
            total[i] += c
    return QPolynomial(n, tuple(total))


def q_via_hooks(n: int, limit: int | None = None) -> QPolynomial:
    """Q_n from the full hook products prod (1 + z/h^2) over all partitions."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _poly_sum_over_partitions(
        n, hook_lengths, lambda h: Fraction(1, h * h), limit
    )


def q_via_trivial_hooks(n: int, limit: int | None = None) -> QPolynomial:
    """Q_n from products prod (1 + z/h) over the trivial-leg hooks only."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _poly_sum_over_partitions(
        n, trivial_leg_hooks, lambda h: Fraction(1, h), limit
    )


def q_via_multiplicities(n: int, limit: int | None = None) -> QPolynomial:
    """Q_n as the sum over partitions of prod_j binom(k_j + z, k_j)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    cap = enumeration_limit(limit)
    if n > cap:
        raise EnumerationLimitError(n, cap)
    total = [Fraction(0)] * (n + 1)
    for part in enumerate_partitions(n):
        for i, c in enumerate(q_coeffs(multiplicities(part).values())):
            total[i] += c
    return QPolynomial(n, tuple(total))


class _RowLadder:
    """Cached series S_k with S_k[n] = A_{n,k}, built as S_k = S_{k-1} * f / k.

    S_0 is the partition series, so S_k = (1/k!) f^k * partition series.
    Rebuilt (with geometric growth) when a larger truncation is needed;
    warm-up happens under a lock, reads after warm-up are plain.
    """

    def __init__(self):
        self.n_max = -1
        self.rows: list[tuple[Fraction, ...]] = []
        self.f: RationalSeries | None = None
        self.f_powers: dict[int, RationalSeries] = {}
        self.lock = threading.Lock()

    def ensure(self, n_max: int) -> None:
        if n_max <= self.n_max:
            return
        with self.lock:
            if n_max <= self.n_max:
                return
            target = max(n_max, min(2 * self.n_max, 1 << 14)) if self.n_max > 0 else n_max
            f = f_series(target)
            fc = f.coeffs
            rows = [partition_series(target).coeffs]
            for k in range(1, target + 1):
                prev = rows[-1]
                row = [Fraction(0)] * (target + 1)
                for n in range(k, target + 1):
                    acc = sum(prev[i] * fc[n - i] for i in range(k - 1, n))
                    row[n] = acc / k
                rows.append(tuple(row))
            self.rows = rows
            self.f = f
            self.f_powers = {1: f}
            self.n_max = target

    def f_power(self, j: int) -> RationalSeries:
        if j < 1:
            raise ValueError("power must be >= 1")
        with self.lock:
            if j not in self.f_powers:
                top = max(self.f_powers)
                acc = self.f_powers[top]
                for i in range(top + 1, j + 1):
                    acc = series_multiply(acc, self.f)
                    self.f_powers[i] = acc
            return self.f_powers[j]


_ladder = _RowLadder()


def q_via_recursion(n: int) -> QPolynomial:
    """Q_n from the recursion A_{n,k} = (1/k!) sum_i p(n-i) c_{i,k}."""
    if n < 0:
        raise ValueError("n must be non-negative")
    _ladder.ensure(n)
    return QPolynomial(n, tuple(_ladder.rows[k][n] for k in range(n + 1)))


def q_table_via_recursion(n_max: int) -> list[QPolynomial]:
    """All of Q_0..Q_{n_max} in one ladder sweep."""
    _ladder.ensure(n_max)
    return [
        QPolynomial(n, tuple(_ladder.rows[k][n] for k in range(n + 1)))
        for n in range(n_max + 1)
    ]


def coefficient_series(k: int, n_max: int) -> RationalSeries:
    """The series sum_n A_{n,k} q^n truncated at n_max."""
    if k < 0:
        raise ValueError("k must be non-negative")
    _ladder.ensure(max(n_max, k))
    return RationalSeries(_ladder.rows[k][: n_max + 1])


def a_cross_recursion(a: int, b: int, n: int) -> Fraction:
    """A_{n,b} = (a!/b!) sum_i A_{n-i,a} c_{i,b-a}, from the cached row a."""
    if not (0 <= a < b <= n):
        raise ValueError("requires 0 <= a < b <= n")
    _ladder.ensure(n)
    row_a = _ladder.rows[a]
    c = _ladder.f_power(b - a).coeffs
    acc = sum(row_a[n - i] * c[i] for i in range(b - a, n - a + 1))
    return acc * Fraction(math.factorial(a), math.factorial(b))


_METHODS = {
    "recursion": q_via_recursion,
    "hooks": q_via_hooks,
    "trivial-hooks": q_via_trivial_hooks,
    "multiplicities": q_via_multiplicities,
}


def method_names() -> list[str]:
    return ["recursion", "hooks", "trivial-hooks", "multiplicities"]


def q_polynomial(n: int, method: str = "recursion") -> QPolynomial:
    """Compute Q_n by the named method."""
    try:
        fn = _METHODS[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r} (known: {method_names()})") from None
    return fn(n)
