"""Integral-test brackets for the remainder R_n = a_{n+1} + a_{n+2} + ...

With I(x) the integral of f over [x, inf), f decreasing and f(k) = a_k:

    integral   I(n+1)                   <= R_n <= I(n)
    morley     I(n) - a_n/2             <= R_n <= I(n) - a_{n+1}/2      (f convex)
    nelsen     a_{n+1}/2 + I(n+1)       <= R_n <= I(n+1/2)              (f convex)
    boas       I(n+1/2) + f'(n+1/2)/8   <  R_n <  I(n+1/2)              (f smooth)

Shape conditions are checked on samples, not proved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MissingDerivative, MissingTailIntegral, ShapeConditionFailed
from .series import SeriesDef, term
from .summation import partial_sum

METHODS = ("integral", "morley", "nelsen", "boas")
SHAPE_SAMPLES = 64
SHAPE_SPAN = 1000.0


@dataclass(frozen=True)
class Bracket:
    lower: float
    upper: float
    method: str
    at_index: int
    target: str = "remainder"  # or "sum"

    def __post_init__(self):
        if not (math.isfinite(self.lower) and math.isfinite(self.upper)):
            raise ValueError(f"non-finite bracket [{self.lower}, {self.upper}]")
        if self.lower > self.upper:
            raise ValueError(f"inverted bracket [{self.lower}, {self.upper}]")
        if self.target == "remainder" and self.lower < 0:
            raise ValueError(f"negative remainder bound {self.lower}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def __contains__(self, x: float) -> bool:
        return self.lower <= x <= self.upper


def _samples(n):
    return np.geomspace(n, n * SHAPE_SPAN, SHAPE_SAMPLES + 1)


def check_decreasing(series: SeriesDef, n: int) -> None:
    """Require f(x_{i+1}) < f(x_i) on 64 sample pairs spread over [n, 1000 n]."""
    xs = _samples(n)
    fs = [series.f(x) for x in xs]
    for x0, x1, f0, f1 in zip(xs, xs[1:], fs, fs[1:]):
        if not f1 < f0:
            raise ShapeConditionFailed(
                f"{series.name}: f not decreasing between x={x0:g} and x={x1:g}"
            )


def check_convex(series: SeriesDef, n: int) -> None:
    """Require non-negative second differences of f at 64 points of [n, 1000 n]."""
    for x in _samples(n)[1:]:
        h = min(x - n, x / 16.0)
        d2 = series.f(x - h) - 2.0 * series.f(x) + series.f(x + h)
        if d2 < 0:
            raise ShapeConditionFailed(f"{series.name}: f not convex near x={x:g}")


def _tail(series):
    if series.tail_integral is None:
        raise MissingTailIntegral(series.name)
    return series.tail_integral


def integral_bracket(series: SeriesDef, n: int) -> Bracket:
    I = _tail(series)
    check_decreasing(series, n)
    return Bracket(I(n + 1.0), I(float(n)), "integral", n)


def morley_bracket(series: SeriesDef, n: int) -> Bracket:
    I = _tail(series)
    check_decreasing(series, n)
    check_convex(series, n)
    base = I(float(n))
    return Bracket(base - term(series, n) / 2, base - term(series, n + 1) / 2, "morley", n)


def nelsen_bracket(series: SeriesDef, n: int) -> Bracket:
    I = _tail(series)
    check_decreasing(series, n)
    check_convex(series, n)
    return Bracket(term(series, n + 1) / 2 + I(n + 1.0), I(n + 0.5), "nelsen", n)


def boas_bracket(series: SeriesDef, n: int) -> Bracket:
    I = _tail(series)
    if series.term_derivative is None:
        raise MissingDerivative(series.name)
    check_decreasing(series, n)
    mid = I(n + 0.5)
    return Bracket(mid + series.term_derivative(n + 0.5) / 8, mid, "boas", n)


_BRACKETS = {
    "integral": integral_bracket,
    "morley": morley_bracket,
    "nelsen": nelsen_bracket,
    "boas": boas_bracket,
}


def remainder_bracket(series: SeriesDef, n: int, method: str) -> Bracket:
    try:
        fn = _BRACKETS[method]
    except KeyError:
        raise ValueError(f"unknown bracket method {method!r}") from None
    return fn(series, n)


def estimate_sum(series: SeriesDef, N: int, method: str = "boas") -> Bracket:
    """Bracket for the full sum: S_N plus a remainder bracket at N."""
    rem = remainder_bracket(series, N, method)
    s = partial_sum(series, N).value
    return Bracket(s + rem.lower, s + rem.upper, method, N, target="sum")
