"""Positive series: definitions, the built-in catalog and term ratios."""

from __future__ import annotations

import dataclasses
import enum
import functools
import math
import re
from dataclasses import dataclass
from typing import Callable, Optional

from numba import njit

from . import _kernels
from .errors import IndexBeforeStart, NonPositiveTerm, UnknownSeries
from .expr import compile_term, parse

RATIO_SCAN_LIMIT = 10**6


class RatioMonotone(str, enum.Enum):
    VERIFIED_INCREASING = "verified-increasing"
    VERIFIED_NOT = "verified-not"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SeriesDef:
    """A positive series sum_{n >= n0} a_n.

    ``kernel`` is a numba function computing a_n; it also accepts real
    arguments and then evaluates the continuous extension f(x) with
    f(n) = a_n. ``tail_integral(x)`` is the closed form of the integral of f
    over [x, inf) and ``term_derivative(x)`` is f'(x); both are optional.
    """

    name: str
    kernel: Callable = dataclasses.field(repr=False, compare=False)
    n0: int
    tail_integral: Optional[Callable[[float], float]] = dataclasses.field(
        default=None, repr=False, compare=False
    )
    term_derivative: Optional[Callable[[float], float]] = dataclasses.field(
        default=None, repr=False, compare=False
    )
    ratio_monotone: RatioMonotone = RatioMonotone.UNKNOWN
    text: Optional[str] = None

    def f(self, x: float) -> float:
        """Continuous extension of the terms, evaluated at real ``x``."""
        return float(self.kernel(float(x)))


@dataclass(frozen=True)
class RatioProbe:
    n_lo: int
    n_hi: int
    violation: Optional[int] = None

    @property
    def increasing(self) -> bool:
        return self.violation is None

    @property
    def verdict(self) -> str:
        return "increasing" if self.violation is None else f"violation-at({self.violation})"


def term(series: SeriesDef, n: int) -> float:
    """Return a_n; raises IndexBeforeStart or NonPositiveTerm."""
    if n < series.n0:
        raise IndexBeforeStart(n, series.n0)
    a = float(series.kernel(n))
    if not (a > 0.0 and math.isfinite(a)):
        raise NonPositiveTerm(n, a)
    return a


def ratio(series: SeriesDef, n: int) -> float:
    """b_n = a_{n+1} / a_n."""
    a = term(series, n)
    return term(series, n + 1) / a


def check_ratio_monotone(series: SeriesDef, n_lo: int, n_hi: int) -> RatioProbe:
    """Scan b_j for j in [n_lo, n_hi] and report the first j with b_{j+1} <= b_j."""
    if n_lo < series.n0:
        raise IndexBeforeStart(n_lo, series.n0)
    if n_hi <= n_lo:
        raise ValueError(f"empty scan: n_hi={n_hi} must exceed n_lo={n_lo}")
    status, j, value = _kernels.ratio_scan(series.kernel, n_lo, n_hi)
    if status == _kernels.BAD_TERM:
        raise NonPositiveTerm(int(j), float(value))
    return RatioProbe(n_lo, n_hi, None if status == 0 else int(j))


def verify_ratio_monotone(series: SeriesDef, n_hi: int = RATIO_SCAN_LIMIT) -> SeriesDef:
    """Return a copy of ``series`` whose flag reflects a scan over [n0, n_hi]."""
    probe = check_ratio_monotone(series, series.n0, n_hi)
    flag = RatioMonotone.VERIFIED_INCREASING if probe.increasing else RatioMonotone.VERIFIED_NOT
    return dataclasses.replace(series, ratio_monotone=flag)


# -- catalog kernels -------------------------------------------------------------
# Each mirrors, operation for operation, the expression in its ``text`` so that
# the parsed expression evaluates to the same bits.

@njit(cache=True)
def _log_a(n):
    x = float(n)
    return math.log(x + 1.0) / math.exp(1.5 * math.log(x))


@njit(cache=True)
def _log_b(n):
    x = float(n)
    return math.log(x + 1.0) / math.exp(1.75 * math.log(x))


@njit(cache=True)
def _boas_c(n):
    x = float(n)
    return 1.0 / (x * math.exp(2.0 * math.log(math.log(x))))


@njit(cache=True)
def _loglog_d(n):
    x = float(n)
    lx = math.log(x)
    return 1.0 / ((x * lx) * math.exp(2.0 * math.log(math.log(lx))))


@njit(cache=True)
def _invsq(n):
    x = float(n)
    return 1.0 / (x * x)


@njit(cache=True)
def _telescope(n):
    x = float(n)
    return 1.0 / (x * (x + 1.0))


@functools.lru_cache(maxsize=None)
def _geom_kernel(r):
    @njit
    def _geom(n):
        return math.pow(r, float(n))

    return _geom


# -- tail integrals and derivatives ------------------------------------------------

def _rpow(x, p):
    return math.exp(p * math.log(x))


def _log_a_tail(x):
    # d/dx of the right side is -log(x+1) x^{-3/2}
    return 2.0 * math.log(x + 1.0) / math.sqrt(x) + 4.0 * math.atan(1.0 / math.sqrt(x))


def _log_a_deriv(x):
    return _rpow(x, -1.5) / (x + 1.0) - 1.5 * math.log(x + 1.0) * _rpow(x, -2.5)


def _boas_c_tail(x):
    return 1.0 / math.log(x)


def _boas_c_deriv(x):
    lx = math.log(x)
    return -(lx + 2.0) / (x * x * lx**3)


def _loglog_d_tail(x):
    return 1.0 / math.log(math.log(x))


def _loglog_d_deriv(x):
    lx = math.log(x)
    llx = math.log(lx)
    g = x * lx * llx * llx
    dg = lx * llx * llx + llx * llx + 2.0 * llx
    return -dg / (g * g)


def _invsq_tail(x):
    return 1.0 / x


def _invsq_deriv(x):
    return -2.0 / (x * x * x)


_CATALOG = {
    "logA": dict(kernel=_log_a, n0=1, text="log(n+1)/n^1.5",
                 tail_integral=_log_a_tail, term_derivative=_log_a_deriv),
    "logB": dict(kernel=_log_b, n0=1, text="log(n+1)/n^1.75"),
    "boasC": dict(kernel=_boas_c, n0=2, text="1/(n*log(n)^2)",
                  tail_integral=_boas_c_tail, term_derivative=_boas_c_deriv),
    "loglogD": dict(kernel=_loglog_d, n0=3, text="1/(n*log(n)*loglog(n)^2)",
                    tail_integral=_loglog_d_tail, term_derivative=_loglog_d_deriv),
    "invsq": dict(kernel=_invsq, n0=1, text="1/(n*n)",
                  tail_integral=_invsq_tail, term_derivative=_invsq_deriv),
    "telescope": dict(kernel=_telescope, n0=1, text="1/(n*(n+1))"),
}

_GEOM_RE = re.compile(r"geom\(\s*([^()]*?)\s*\)")


def catalog_names() -> list[str]:
    return list(_CATALOG) + ["geom(r)"]


@functools.lru_cache(maxsize=None)
def catalog_lookup(name: str) -> SeriesDef:
    """Return the built-in series ``name``; the ratio flag comes from a scan to 10^6."""
    m = _GEOM_RE.fullmatch(name.strip())
    if m is not None:
        try:
            r = float(m.group(1))
        except ValueError:
            raise UnknownSeries(name) from None
        if not 0.0 < r < 1.0:
            raise UnknownSeries(name)
        series = SeriesDef(name=f"geom({r!r})", kernel=_geom_kernel(r), n0=0)
    elif name in _CATALOG:
        series = SeriesDef(name=name, **_CATALOG[name])
    else:
        raise UnknownSeries(name)
    return verify_ratio_monotone(series)


def from_expression(text: str, n0: int = 1, name: Optional[str] = None) -> SeriesDef:
    """Build a series from a term expression in ``n`` (see :mod:`kummersum.expr`)."""
    kernel = compile_term(parse(text))
    return SeriesDef(name=name or text, kernel=kernel, n0=n0, text=text)


_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def resolve(spec: str, n0: Optional[int] = None) -> SeriesDef:
    """Interpret a user-supplied series spec: catalog name or expression.

    A bare identifier other than ``n`` must be a catalog name. ``n0`` applies
    to expressions only (default 1); catalog entries carry their own.
    """
    spec = spec.strip()
    if spec in _CATALOG or _GEOM_RE.fullmatch(spec):
        return catalog_lookup(spec)
    if _IDENT_RE.fullmatch(spec) and spec != "n":
        raise UnknownSeries(spec)
    return from_expression(spec, 1 if n0 is None else n0)
