"""Compensated partial sums and threshold crossings.

All sums run in one canonical order (increasing n, one term at a time,
Neumaier compensation), so resuming a state reproduces a from-scratch sum
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .errors import BudgetExhausted, IndexBeforeStart, IterationBudgetExceeded, NonPositiveTerm
from .series import SeriesDef

DEFAULT_BUDGET = 2 * 10**10


@dataclass(frozen=True)
class SumState:
    """Partial sum S_N = a_{n0} + ... + a_N held as ``total + compensation``."""

    series: SeriesDef
    last_index: int
    total: float = 0.0
    compensation: float = 0.0

    @property
    def value(self) -> float:
        return self.total + self.compensation

    @property
    def terms_added(self) -> int:
        return self.last_index - self.series.n0 + 1


def empty_state(series: SeriesDef) -> SumState:
    return SumState(series, series.n0 - 1)


def _run(state, stop, threshold):
    status, n, s, c = _kernels.accumulate(
        state.series.kernel, state.last_index, state.total, state.compensation, stop, threshold
    )
    if status == _kernels.BAD_TERM:
        raise NonPositiveTerm(int(n), float(state.series.kernel(n)))
    return status, SumState(state.series, int(n), s, c)


def advance_to(state: SumState, N: int) -> SumState:
    """Add terms up to and including index ``N``."""
    if N < state.last_index:
        raise ValueError(f"state is already at {state.last_index} > {N}")
    return _run(state, N, math.inf)[1]


def partial_sum(series: SeriesDef, N: int, budget: int = DEFAULT_BUDGET) -> SumState:
    """S_N = sum of a_n for n0 <= n <= N."""
    if N < series.n0:
        raise IndexBeforeStart(N, series.n0)
    if N - series.n0 + 1 > budget:
        raise IterationBudgetExceeded(N - series.n0 + 1, budget)
    return advance_to(empty_state(series), N)


def extend_to_threshold(state: SumState, threshold: float, budget: int) -> SumState:
    """Advance to the smallest m with S_m >= threshold, adding at most ``budget`` terms.

    Raises BudgetExhausted (carrying the advanced state) when the budget runs out.
    """
    if not threshold > state.value:
        raise ValueError(f"threshold {threshold!r} does not exceed S_N = {state.value!r}")
    if budget < 1:
        raise ValueError("budget must be at least 1")
    status, new = _run(state, state.last_index + budget, threshold)
    if status != _kernels.REACHED:
        raise BudgetExhausted(new, threshold)
    return new


def sum_range(series: SeriesDef, lo: int, hi: int) -> float:
    """Compensated sum a_lo + ... + a_hi."""
    if lo < series.n0:
        raise IndexBeforeStart(lo, series.n0)
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    return advance_to(SumState(series, lo - 1), hi).value
