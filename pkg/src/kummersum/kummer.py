"""The zeta-sequence test for the hypothesis "R_N < epsilon".

With R_N = a_{N+1} + a_{N+2} + ..., seed zeta_N = epsilon / a_N and iterate

    zeta_{n+1} = zeta_n * a_n / a_{n+1} - 1.

Along the recurrence a_N zeta_N - a_n zeta_n equals a_{N+1} + ... + a_n, so
zeta_n = (epsilon - R_N + R_n) / a_n. When the ratios a_{n+1}/a_n increase
strictly and the hypothesis holds, zeta increases forever; when it fails,
zeta eventually turns down (and later negative). The test therefore rejects
at the first decrease and otherwise accepts once the scan window is used up.
Acceptance is only as good as the window: a longer scan may still reject.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import IndexBeforeStart, NonPositiveTerm, ZetaOverflow
from .series import SeriesDef, term

DEFAULT_HORIZON = 10**9
BOUNDARY_KEEP = 4
FULL_TRACE_LIMIT = 10**7


class Verdict(str, enum.Enum):
    ACCEPTED = "AcceptedAtHorizon"
    REJECTED = "Rejected"


@dataclass(frozen=True)
class TestConfig:
    """Parameters of one test.

    ``horizon`` is the size of the scan window in zeta values, seed included:
    the scan looks at indices N .. N + horizon - 1, i.e. at most horizon - 1
    recurrence steps. ``trace_keep`` is "none", "boundary" (last 4 values) or
    "full". A decrease is a drop by more than ``tolerance`` (default: any
    drop). With ``strict_overflow`` the scan raises when the doubles run out
    (zeta overflows or a term underflows) instead of accepting there.
    """

    __test__ = False

    epsilon: float
    horizon: int = DEFAULT_HORIZON
    trace_keep: str = "boundary"
    tolerance: float = 0.0
    strict_overflow: bool = False

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be positive and finite, got {self.epsilon!r}")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.trace_keep not in ("none", "boundary", "full"):
            raise ValueError(f"unknown trace_keep {self.trace_keep!r}")
        if self.trace_keep == "full" and self.horizon > FULL_TRACE_LIMIT:
            raise ValueError(f"full traces are limited to {FULL_TRACE_LIMIT} values")
        if self.tolerance < 0:
            raise ValueError("tolerance must be non-negative")


@dataclass(frozen=True)
class TestOutcome:
    """Result of :func:`run_test`.

    ``iterations`` counts recurrence steps (zeta values computed after the
    seed). On rejection ``break_index`` is the peak: the last index before
    the first decrease. ``boundary_zetas`` holds (index, zeta) pairs at the
    end of the scan, the decreasing value included. ``numeric_limit`` marks an
    acceptance cut short because zeta or the terms left the double range.
    """

    __test__ = False

    verdict: Verdict
    seed_index: int
    seed_zeta: float
    iterations: int
    break_index: Optional[int]
    boundary_zetas: tuple
    negative_hit: bool = False
    numeric_limit: bool = False

    @property
    def rejected(self) -> bool:
        return self.verdict is Verdict.REJECTED

    @property
    def last_index(self) -> int:
        return self.seed_index + self.iterations

    def zeta_at(self, n: int) -> float:
        for idx, z in self.boundary_zetas:
            if idx == n:
                return z
        raise KeyError(f"zeta_{n} was not retained")


def seed_zeta(series: SeriesDef, N: int, epsilon: float) -> float:
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    return epsilon / term(series, N)


def zeta_step(series: SeriesDef, n: int, zeta_n: float) -> float:
    """One recurrence step: zeta_n * (a_n / a_{n+1}) - 1."""
    a_n = term(series, n)
    return zeta_n * (a_n / term(series, n + 1)) - 1.0


def run_test(series: SeriesDef, N: int, config: TestConfig) -> TestOutcome:
    """Test whether R_N = sum_{k > N} a_k is below ``config.epsilon``."""
    if N < series.n0:
        raise IndexBeforeStart(N, series.n0)
    zeta0 = seed_zeta(series, N, config.epsilon)
    steps = config.horizon - 1
    size = {"none": 1, "boundary": BOUNDARY_KEEP, "full": config.horizon}[config.trace_keep]
    ring = np.empty(size, dtype=np.float64)
    status, i, value = _kernels.zeta_scan(
        series.kernel, N, zeta0, steps, config.tolerance, ring
    )
    i = int(i)
    if status == _kernels.SCAN_BAD_TERM:
        raise NonPositiveTerm(N + i, float(value))
    if config.strict_overflow:
        if status == _kernels.OVERFLOW:
            raise ZetaOverflow(N + i + 1)
        if status == _kernels.UNDERFLOW:
            raise NonPositiveTerm(N + i + 1, 0.0)

    first = max(0, i - size + 1) if config.trace_keep != "none" else i + 1
    trace = tuple((N + k, float(ring[k % size])) for k in range(first, i + 1))

    if status in (_kernels.DECREASE, _kernels.NEGATIVE):
        return TestOutcome(
            verdict=Verdict.REJECTED,
            seed_index=N,
            seed_zeta=zeta0,
            iterations=i,
            break_index=N + i - 1,
            boundary_zetas=trace,
            negative_hit=status == _kernels.NEGATIVE,
        )
    return TestOutcome(
        verdict=Verdict.ACCEPTED,
        seed_index=N,
        seed_zeta=zeta0,
        iterations=i,
        break_index=None,
        boundary_zetas=trace,
        numeric_limit=status != _kernels.HORIZON,
    )


def zeta_closed_form(
    series: SeriesDef, N: int, epsilon: float, j: int, tail_j: float, tail_N: float
) -> float:
    """zeta_j = (c + R_j) / a_j with c = epsilon - R_N, from externally known tails.

    Only meant as an oracle for the recurrence.
    """
    if j < N:
        raise ValueError("j must be at least N")
    c = epsilon - tail_N
    return (c + tail_j) / term(series, j)
