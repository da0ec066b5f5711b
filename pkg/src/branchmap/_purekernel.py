"""Pure-Python iteration kernels.

Reference semantics for the compiled extension: every function here has a
counterpart in ``_fastkernel`` with identical observable behavior, except
that the compiled kernels may report overflow bailouts (third-party callers
go through :mod:`branchmap.kernel`, which redoes bailed starts here).

Arithmetic is plain Python int, so results are exact at any magnitude and
the bailout lists are always empty.

Array arguments are numpy buffers shared with the fast kernel; scalars read
from them are converted to Python ints immediately so that no arithmetic
happens in fixed-width numpy types.
"""

from __future__ import annotations

UNKNOWN32 = 0xFFFFFFFF
PEAK_UNKNOWN_HI = 0xFFFFFFFFFFFFFFFF
PEAK_LIMB = 1 << 64
PEAK_MAX = (1 << 127) - 1


def _coeffs(a, b, d) -> tuple[list[int], list[int], list[int]]:
    return [int(x) for x in a], [int(x) for x in b], [int(x) for x in d]


def verify_block(M, a, b, d, lo, hi, frontier, max_steps):
    """Scan starts in [lo, hi); returns (step-limit exceptions, bailouts=[])."""
    a, b, d = _coeffs(a, b, d)
    M = int(M)
    exceptions = []
    for n in range(lo, hi):
        v = n
        k = 0
        while True:
            if v == 1:
                break
            if frontier and v < n:
                break
            if k >= max_steps:
                exceptions.append(n)
                break
            r = v % M
            v = (a[r] * v + b[r]) // d[r]
            k += 1
    return exceptions, []


def fill_steps_memo(M, a, b, d, memo, lo, hi, max_steps):
    """Fill memo[n] with steps-to-1 for n in [lo, hi), ascending.

    Entries below n are consulted as a cache once the orbit drops under its
    start; UNKNOWN32 entries are treated as misses, so the filled values do
    not depend on which entries happen to be present.
    """
    a, b, d = _coeffs(a, b, d)
    M = int(M)
    for n in range(lo, hi):
        if n == 1:
            memo[1] = 0
            continue
        v = n
        k = 0
        while True:
            if v == 1:
                res = k
                break
            if 1 <= v < n:
                cached = int(memo[v])
                if cached != UNKNOWN32:
                    res = k + cached
                    break
            if k >= max_steps:
                res = UNKNOWN32
                break
            r = v % M
            v = (a[r] * v + b[r]) // d[r]
            k += 1
        memo[n] = res
    return []


def fill_peak_memo(M, a, b, d, peak_hi, peak_lo, lo, hi, max_steps):
    """Fill two-limb peak memos for n in [lo, hi), ascending.

    Returns starts whose exact peak does not fit in 127 bits; their entries
    are left as the unknown sentinel for the caller to override.
    """
    a, b, d = _coeffs(a, b, d)
    M = int(M)
    oversize = []
    for n in range(lo, hi):
        if n == 1:
            peak_hi[1] = 0
            peak_lo[1] = 1
            continue
        v = n
        best = n
        k = 0
        while True:
            if v == 1:
                peak = best
                break
            if 1 <= v < n:
                chi = int(peak_hi[v])
                if chi != PEAK_UNKNOWN_HI:
                    cached = (chi << 64) | int(peak_lo[v])
                    peak = best if best > cached else cached
                    break
            if k >= max_steps:
                peak = None
                break
            r = v % M
            v = (a[r] * v + b[r]) // d[r]
            k += 1
            if v > best:
                best = v
        if peak is None:
            peak_hi[n] = PEAK_UNKNOWN_HI
            peak_lo[n] = 0
        elif peak > PEAK_MAX:
            peak_hi[n] = PEAK_UNKNOWN_HI
            peak_lo[n] = 0
            oversize.append(n)
        else:
            peak_hi[n] = peak >> 64
            peak_lo[n] = peak & (PEAK_LIMB - 1)
    return oversize


def steps_direct(M, a, b, d, start, max_steps):
    """Iterate to 1.  Returns (status, steps); status 0 reached, 1 limit."""
    a, b, d = _coeffs(a, b, d)
    M = int(M)
    v = start
    k = 0
    while True:
        if v == 1:
            return 0, k
        if k >= max_steps:
            return 1, k
        r = v % M
        v = (a[r] * v + b[r]) // d[r]
        k += 1


def peak_direct(M, a, b, d, start, max_steps):
    """Iterate to 1 tracking the maximum term and where it first occurs.

    Returns (status, steps, peak, peak_index); status as in steps_direct.
    """
    a, b, d = _coeffs(a, b, d)
    M = int(M)
    v = start
    best = start
    best_idx = 0
    k = 0
    while True:
        if v == 1:
            return 0, k, best, best_idx
        if k >= max_steps:
            return 1, k, best, best_idx
        r = v % M
        v = (a[r] * v + b[r]) // d[r]
        k += 1
        if v > best:
            best = v
            best_idx = k


def orbit_terms(M, a, b, d, start, max_steps):
    """Record the orbit until 1 or the budget: (status, [start, ...])."""
    a, b, d = _coeffs(a, b, d)
    M = int(M)
    v = start
    terms = [start]
    k = 0
    while True:
        if v == 1:
            return 0, terms
        if k >= max_steps:
            return 1, terms
        r = v % M
        v = (a[r] * v + b[r]) // d[r]
        k += 1
        terms.append(v)


def brent_cycle(M, a, b, d, start, max_steps):
    """Constant-memory cycle search on the orbit of start.

    Returns (status, mu, lam, cycle_value): status 0 when a cycle whose first
    repeat happens within max_steps applications was found (cycle_value is
    the orbit's first in-cycle element), 1 otherwise.
    """
    a, b, d = _coeffs(a, b, d)
    M = int(M)
    cap = 4 * max_steps + 8

    def f(v):
        r = v % M
        return (a[r] * v + b[r]) // d[r]

    power = 1
    lam = 1
    apps = 1
    tortoise = start
    hare = f(start)
    while tortoise != hare:
        if power == lam:
            tortoise = hare
            power <<= 1
            lam = 0
        hare = f(hare)
        apps += 1
        lam += 1
        if apps > cap:
            return 1, 0, 0, 0

    hare = start
    for _ in range(lam):
        hare = f(hare)
    tortoise = start
    mu = 0
    while tortoise != hare:
        tortoise = f(tortoise)
        hare = f(hare)
        mu += 1
    if mu + lam > max_steps:
        return 1, 0, 0, 0
    return 0, mu, lam, tortoise
