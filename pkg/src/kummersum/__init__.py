"""Summing slowly convergent positive series with the Kummer/Tong zeta test."""

from .bounds import (
    Bracket,
    boas_bracket,
    estimate_sum,
    integral_bracket,
    morley_bracket,
    nelsen_bracket,
)
from .errors import *  # noqa: F401,F403
from .expr import evaluate, parse, to_text, tokenize
from .kummer import TestConfig, TestOutcome, Verdict, run_test, seed_zeta, zeta_closed_form, zeta_step
from .search import (
    SearchConfig,
    SearchReport,
    StepRecord,
    Termination,
    modified_step_forward,
    search,
    step_forward,
)
from .series import (
    RatioMonotone,
    RatioProbe,
    SeriesDef,
    catalog_lookup,
    check_ratio_monotone,
    from_expression,
    ratio,
    resolve,
    term,
)
from .summation import SumState, extend_to_threshold, partial_sum, sum_range

__version__ = "0.1.0"
