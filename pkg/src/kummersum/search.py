"""Step-forward and modified step-forward search for the sum of a series.

Each step tests "R_N < epsilon" at the current index N. On rejection the
partial sum is pushed forward to the first m with S_m >= S_N + epsilon and a
step is recorded; on acceptance the sum is known to lie in [S_N, S_N + eps].
The modified variant divides epsilon by K (up to ``refine_depth`` times)
whenever a rejection needed at least M recurrence steps, discarding that test
and restarting at the same N.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .errors import BudgetExhausted
from .kummer import TestConfig, run_test
from .series import SeriesDef
from .summation import SumState, advance_to, extend_to_threshold

DEFAULT_CAP = 10**9


class Termination(str, enum.Enum):
    ACCEPTED = "AcceptedHypothesis"
    CAP = "CapReached"
    BUDGET = "BudgetExhausted"


@dataclass(frozen=True)
class SearchConfig:
    epsilon: float
    mode: str = "plain"
    M: int = 2
    K: float = 10.0
    refine_depth: int = 1
    horizon: int = 10**9
    total_budget: int = DEFAULT_CAP  # terms past the start index the search may touch

    def __post_init__(self):
        if not (self.epsilon > 0 and math.isfinite(self.epsilon)):
            raise ValueError(f"epsilon must be positive and finite, got {self.epsilon!r}")
        if self.mode not in ("plain", "modified"):
            raise ValueError(f"mode must be 'plain' or 'modified', got {self.mode!r}")
        if self.M < 2:
            raise ValueError("M must be at least 2")
        if not self.K > 1:
            raise ValueError("K must exceed 1")
        if self.refine_depth < 1:
            raise ValueError("refine_depth must be at least 1")
        if self.horizon < 1 or self.total_budget < 1:
            raise ValueError("horizon and total_budget must be positive")


@dataclass(frozen=True)
class StepRecord:
    step_number: int
    iterations_in_step: int
    reached_index: int
    partial_sum: float
    epsilon_in_force: float


@dataclass
class SearchReport:
    records: list
    termination: Termination
    final_state: SumState
    final_epsilon: float
    refinements: list = field(default_factory=list)  # (index, new epsilon)
    accepting_iterations: Optional[int] = None

    @property
    def sum_interval(self) -> tuple:
        s = self.final_state.value
        return (s, s + self.final_epsilon)

    @property
    def certified(self) -> bool:
        """True only when the interval comes from an accepted hypothesis."""
        return self.termination is Termination.ACCEPTED


def step_forward(series, start, config, on_step=None) -> SearchReport:
    if config.mode != "plain":
        raise ValueError("step_forward needs mode='plain'")
    return _search(series, start, config, on_step)


def modified_step_forward(series, start, config, on_step=None) -> SearchReport:
    if config.mode != "modified":
        raise ValueError("modified_step_forward needs mode='modified'")
    return _search(series, start, config, on_step)


def search(series, start, config, on_step=None) -> SearchReport:
    """Dispatch on ``config.mode``."""
    return _search(series, start, config, on_step)


def _search(
    series: SeriesDef,
    start: SumState,
    config: SearchConfig,
    on_step: Optional[Callable[[StepRecord], None]],
) -> SearchReport:
    if start.series is not series and start.series != series:
        raise ValueError("start state belongs to a different series")
    limit = start.last_index + config.total_budget
    state = start
    eps = config.epsilon
    records = []
    refinements = []

    def emit(iterations):
        rec = StepRecord(len(records) + 1, iterations, state.last_index, state.value, eps)
        records.append(rec)
        if on_step is not None:
            on_step(rec)

    def report(termination, accepting=None):
        return SearchReport(records, termination, state, eps, refinements, accepting)

    while True:
        window = min(config.horizon, limit - state.last_index + 1)
        if window < 1:
            return report(Termination.BUDGET)
        outcome = run_test(series, state.last_index, TestConfig(eps, window, trace_keep="none"))
        if not outcome.rejected:
            if window == config.horizon or outcome.numeric_limit:
                return report(Termination.ACCEPTED, outcome.iterations)
            # the scan ran into the term cap: sum up to it and stop
            if limit > state.last_index:
                state = advance_to(state, limit)
                emit(outcome.iterations)
            return report(Termination.CAP)
        if (
            config.mode == "modified"
            and outcome.iterations >= config.M
            and len(refinements) < config.refine_depth
        ):
            eps = eps / config.K
            refinements.append((state.last_index, eps))
            continue
        budget = limit - state.last_index
        if budget < 1:
            return report(Termination.CAP)
        try:
            state = extend_to_threshold(state, state.value + eps, budget)
        except BudgetExhausted as exc:
            state = exc.state
            emit(outcome.iterations)
            return report(Termination.CAP)
        emit(outcome.iterations)


# -- CSV -------------------------------------------------------------------------

CSV_COLUMNS = ["step", "iterations", "n", "S_n", "epsilon", "S_n_full", "epsilon_full"]


def format_epsilon(eps: float) -> str:
    text = f"{eps:.12f}".rstrip("0")
    return text + "0" if text.endswith(".") else text


def record_row(rec: StepRecord, precision: int = 6) -> list:
    return [
        str(rec.step_number),
        str(rec.iterations_in_step),
        str(rec.reached_index),
        f"{rec.partial_sum:.{precision}f}",
        format_epsilon(rec.epsilon_in_force),
        repr(rec.partial_sum),
        repr(rec.epsilon_in_force),
    ]


def write_csv(records: Iterable[StepRecord], fh, precision: int = 6, header: bool = True):
    writer = csv.writer(fh, lineterminator="\n")
    if header:
        writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(record_row(rec, precision))


def records_to_csv(records: Iterable[StepRecord], precision: int = 6) -> str:
    buf = io.StringIO()
    write_csv(records, buf, precision)
    return buf.getvalue()


def read_csv(text: str) -> list:
    """Parse CSV written by :func:`write_csv` back into StepRecords (full precision).

    Lines starting with '#' (the CLI's summary line) are skipped.
    """
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    rows = csv.DictReader(lines)
    return [
        StepRecord(
            int(row["step"]),
            int(row["iterations"]),
            int(row["n"]),
            float(row["S_n_full"]),
            float(row["epsilon_full"]),
        )
        for row in rows
    ]
