"""Compiled inner loops.

Every loop takes the term kernel as its first argument (a numba dispatcher
``n -> a_n``) and reports problems through a status code instead of raising,
so the Python wrappers can build proper exceptions.
"""

import math

from numba import njit

# accumulate
REACHED = 0
STOPPED = 1
BAD_TERM = 2

# zeta_scan
HORIZON = 0
DECREASE = 1
NEGATIVE = 2
UNDERFLOW = 3
OVERFLOW = 4
SCAN_BAD_TERM = 5

# a zero term after one this small is underflow rather than a genuine zero
TINY = 1e-280


@njit(cache=True)
def accumulate(term, n, s, c, stop, threshold):
    """Neumaier-add a_{n+1}, a_{n+2}, ... until s + c >= threshold or n == stop.

    ``n`` is the last index already included. Returns (status, n, s, c).
    """
    while n < stop:
        if s + c >= threshold:
            return REACHED, n, s, c
        m = n + 1
        a = term(m)
        if not (a > 0.0 and a < math.inf):
            return BAD_TERM, m, s, c
        t = s + a
        if abs(s) >= abs(a):
            c += (s - t) + a
        else:
            c += (a - t) + s
        s = t
        n = m
    if s + c >= threshold:
        return REACHED, n, s, c
    return STOPPED, n, s, c


@njit(cache=True)
def zeta_scan(term, N, zeta0, steps, tol, ring):
    """Run zeta_{k+1} = zeta_k * (a_k / a_{k+1}) - 1 from zeta_N = zeta0.

    Value number i (zeta at index N + i) is stored in ring[i % len(ring)].
    Returns (status, i, value): i is the number of recurrence steps whose
    result is valid; for SCAN_BAD_TERM ``value`` is the offending term.
    """
    size = ring.shape[0]
    ring[0] = zeta0
    a = term(N)
    z = zeta0
    for i in range(1, steps + 1):
        b = term(N + i)
        if not (b > 0.0 and b < math.inf):
            if b == 0.0 and a < TINY:
                return UNDERFLOW, i - 1, z
            return SCAN_BAD_TERM, i, b
        zn = z * (a / b) - 1.0
        if zn <= 0.0:
            ring[i % size] = zn
            return NEGATIVE, i, zn
        if zn < z - tol:
            ring[i % size] = zn
            return DECREASE, i, zn
        if not (zn < math.inf):
            return OVERFLOW, i - 1, z
        ring[i % size] = zn
        z = zn
        a = b
    return HORIZON, steps, z


@njit(cache=True)
def ratio_scan(term, lo, hi):
    """First j in [lo, hi-1] with b_{j+1} <= b_j, where b_j = a_{j+1}/a_j.

    Returns (status, j, value): status 0 and j=-1 when strictly increasing,
    1 with the violating j, or BAD_TERM with the offending index and value.
    """
    a0 = term(lo)
    if not (a0 > 0.0 and a0 < math.inf):
        return BAD_TERM, lo, a0
    a1 = term(lo + 1)
    if not (a1 > 0.0 and a1 < math.inf):
        return BAD_TERM, lo + 1, a1
    b_prev = a1 / a0
    for j in range(lo, hi):
        a2 = term(j + 2)
        if not (a2 > 0.0 and a2 < math.inf):
            return BAD_TERM, j + 2, a2
        b = a2 / a1
        if not (b > b_prev):
            return 1, j, b
        b_prev = b
        a1 = a2
    return 0, -1, b_prev
