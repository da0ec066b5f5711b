# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled iteration kernels: 128-bit checked arithmetic, GIL-free hot loops.

Mirrors ``_purekernel`` function for function.  Values are carried in signed
128-bit registers; any overflow aborts only the affected start, which is
reported in the bailout list so the caller can redo it in exact arithmetic.
"""

from libc.stdint cimport int64_t, uint32_t, uint64_t

cdef extern from *:
    """
    #include <stdint.h>
    typedef __int128 bm_i128;
    static inline int bm_mul_ovf(bm_i128 x, bm_i128 y, bm_i128 *r)
        { return __builtin_mul_overflow(x, y, r); }
    static inline int bm_add_ovf(bm_i128 x, bm_i128 y, bm_i128 *r)
        { return __builtin_add_overflow(x, y, r); }
    static inline uint64_t bm_lo64(bm_i128 v)
        { return (uint64_t)((unsigned __int128)v & 0xFFFFFFFFFFFFFFFFull); }
    static inline uint64_t bm_hi64(bm_i128 v)
        { return (uint64_t)((unsigned __int128)v >> 64); }
    static inline bm_i128 bm_join(uint64_t hi, uint64_t lo)
        { return (bm_i128)(((unsigned __int128)hi << 64) | lo); }
    """
    ctypedef long long i128 "bm_i128"
    int bm_mul_ovf(i128 x, i128 y, i128 *r) nogil
    int bm_add_ovf(i128 x, i128 y, i128 *r) nogil
    uint64_t bm_lo64(i128 v) nogil
    uint64_t bm_hi64(i128 v) nogil
    i128 bm_join(uint64_t hi, uint64_t lo) nogil

UNKNOWN32 = 0xFFFFFFFF
PEAK_UNKNOWN_HI = 0xFFFFFFFFFFFFFFFF

cdef uint32_t _UNKNOWN32 = 0xFFFFFFFFu
cdef uint64_t _PEAK_UNKNOWN_HI = 0xFFFFFFFFFFFFFFFFull


cdef inline int _step(int M, const int64_t* a, const int64_t* b, const int64_t* d,
                      i128 v, i128* out) nogil:
    # floored residue; C '%' truncates toward zero for negatives
    cdef int r = <int>(v % M)
    cdef i128 t
    if r < 0:
        r += M
    if bm_mul_ovf(<i128>a[r], v, &t):
        return 1
    if bm_add_ovf(t, <i128>b[r], &t):
        return 1
    out[0] = t // d[r]  # exact by map invariant, so truncation is harmless
    return 0


cdef inline object _to_pyint(i128 v):
    # positive values only (peaks); split through unsigned limbs
    return (<object>bm_hi64(v)) << 64 | <object>bm_lo64(v)


cdef inline object _to_pyint_signed(i128 v):
    # reinterpret the two's-complement bits; valid for the whole i128 range
    cdef uint64_t hi = bm_hi64(v)
    u = (<object>hi) << 64 | <object>bm_lo64(v)
    if hi >> 63:
        return u - (<object>1 << 128)
    return u


def verify_block(int M, int64_t[::1] a, int64_t[::1] b, int64_t[::1] d,
                 long long lo, long long hi, bint frontier, long long max_steps):
    exceptions = []
    bailouts = []
    cdef long long n, k
    cdef i128 v, nxt
    cdef int status
    with nogil:
        for n in range(lo, hi):
            v = n
            k = 0
            status = 0
            while True:
                if v == 1:
                    break
                if frontier and v < n:
                    break
                if k >= max_steps:
                    status = 1
                    break
                if _step(M, &a[0], &b[0], &d[0], v, &nxt):
                    status = 2
                    break
                v = nxt
                k += 1
            if status == 1:
                with gil:
                    exceptions.append(n)
            elif status == 2:
                with gil:
                    bailouts.append(n)
    return exceptions, bailouts


def fill_steps_memo(int M, int64_t[::1] a, int64_t[::1] b, int64_t[::1] d,
                    uint32_t[::1] memo, long long lo, long long hi,
                    long long max_steps):
    bailouts = []
    cdef long long n, k
    cdef i128 v, nxt
    cdef uint32_t res, cached
    cdef int bail
    with nogil:
        for n in range(lo, hi):
            if n == 1:
                memo[1] = 0
                continue
            v = n
            k = 0
            bail = 0
            while True:
                if v == 1:
                    res = <uint32_t>k
                    break
                if 1 <= v and v < n:
                    cached = memo[<Py_ssize_t>v]
                    if cached != _UNKNOWN32:
                        res = <uint32_t>k + cached
                        break
                if k >= max_steps:
                    res = _UNKNOWN32
                    break
                if _step(M, &a[0], &b[0], &d[0], v, &nxt):
                    res = _UNKNOWN32
                    bail = 1
                    break
                v = nxt
                k += 1
            memo[n] = res
            if bail:
                with gil:
                    bailouts.append(n)
    return bailouts


def fill_peak_memo(int M, int64_t[::1] a, int64_t[::1] b, int64_t[::1] d,
                   uint64_t[::1] peak_hi, uint64_t[::1] peak_lo,
                   long long lo, long long hi, long long max_steps):
    bailouts = []
    cdef long long n, k
    cdef i128 v, nxt, best, peak, cached
    cdef uint64_t chi
    cdef int outcome  # 0 known, 1 unknown, 2 bail
    with nogil:
        for n in range(lo, hi):
            if n == 1:
                peak_hi[1] = 0
                peak_lo[1] = 1
                continue
            v = n
            best = n
            k = 0
            outcome = 0
            while True:
                if v == 1:
                    peak = best
                    break
                if 1 <= v and v < n:
                    chi = peak_hi[<Py_ssize_t>v]
                    if chi != _PEAK_UNKNOWN_HI:
                        cached = bm_join(chi, peak_lo[<Py_ssize_t>v])
                        peak = best if best > cached else cached
                        break
                if k >= max_steps:
                    outcome = 1
                    break
                if _step(M, &a[0], &b[0], &d[0], v, &nxt):
                    outcome = 2
                    break
                v = nxt
                k += 1
                if v > best:
                    best = v
            if outcome == 0:
                peak_hi[n] = bm_hi64(peak)
                peak_lo[n] = bm_lo64(peak)
            else:
                peak_hi[n] = _PEAK_UNKNOWN_HI
                peak_lo[n] = 0
                if outcome == 2:
                    with gil:
                        bailouts.append(n)
    return bailouts


def steps_direct(int M, int64_t[::1] a, int64_t[::1] b, int64_t[::1] d,
                 long long start, long long max_steps):
    cdef i128 v = start
    cdef i128 nxt
    cdef long long k = 0
    cdef int status = 1
    with nogil:
        while True:
            if v == 1:
                status = 0
                break
            if k >= max_steps:
                status = 1
                break
            if _step(M, &a[0], &b[0], &d[0], v, &nxt):
                status = 2
                break
            v = nxt
            k += 1
    return status, k


def peak_direct(int M, int64_t[::1] a, int64_t[::1] b, int64_t[::1] d,
                long long start, long long max_steps):
    cdef i128 v = start
    cdef i128 nxt
    cdef i128 best = start
    cdef long long best_idx = 0
    cdef long long k = 0
    cdef int status = 1
    with nogil:
        while True:
            if v == 1:
                status = 0
                break
            if k >= max_steps:
                status = 1
                break
            if _step(M, &a[0], &b[0], &d[0], v, &nxt):
                status = 2
                break
            v = nxt
            k += 1
            if v > best:
                best = v
                best_idx = k
    return status, k, _to_pyint(best), best_idx


def orbit_terms(int M, int64_t[::1] a, int64_t[::1] b, int64_t[::1] d,
                long long start, long long max_steps):
    terms = [start]
    cdef i128 v = start
    cdef i128 nxt
    cdef long long k = 0
    while True:
        if v == 1:
            return 0, terms
        if k >= max_steps:
            return 1, terms
        if _step(M, &a[0], &b[0], &d[0], v, &nxt):
            return 2, terms
        v = nxt
        k += 1
        terms.append(_to_pyint_signed(v))


def brent_cycle(int M, int64_t[::1] a, int64_t[::1] b, int64_t[::1] d,
                long long start, long long max_steps):
    cdef long long cap = 4 * max_steps + 8
    cdef long long power = 1, lam = 1, apps = 1, mu = 0, i
    cdef i128 tortoise = start
    cdef i128 hare, nxt
    cdef int status = 0
    with nogil:
        if _step(M, &a[0], &b[0], &d[0], tortoise, &hare):
            status = 2
        while status == 0 and tortoise != hare:
            if power == lam:
                tortoise = hare
                power <<= 1
                lam = 0
            if _step(M, &a[0], &b[0], &d[0], hare, &nxt):
                status = 2
                break
            hare = nxt
            apps += 1
            lam += 1
            if apps > cap:
                status = 1
                break
        if status == 0:
            hare = start
            for i in range(lam):
                if _step(M, &a[0], &b[0], &d[0], hare, &nxt):
                    status = 2
                    break
                hare = nxt
            tortoise = start
            while status == 0 and tortoise != hare:
                if _step(M, &a[0], &b[0], &d[0], tortoise, &nxt):
                    status = 2
                    break
                tortoise = nxt
                if _step(M, &a[0], &b[0], &d[0], hare, &nxt):
                    status = 2
                    break
                hare = nxt
                mu += 1
            if status == 0 and mu + lam > max_steps:
                status = 1
    if status != 0:
        return status, 0, 0, 0
    if tortoise > <i128>9223372036854775807LL or tortoise < <i128>(-9223372036854775807LL - 1):
        return 2, 0, 0, 0
    return 0, mu, lam, <long long>tortoise
