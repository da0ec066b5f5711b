"""Kernel backend selection and exact-result wrappers.

The compiled extension (``_fastkernel``) is used when it imported cleanly
and the environment variable ``BRANCHMAP_PURE`` is unset; otherwise the
pure-Python kernels serve.  Either way the functions here return exact
results: starts the fast kernel bails out on (128-bit overflow, or values
outside the fast path's scalar range) are transparently redone in pure
arithmetic.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from branchmap import _purekernel
from branchmap.core import ResidueBranchMap

try:  # pragma: no cover - exercised indirectly via backend tests
    from branchmap import _fastkernel
except ImportError:  # pragma: no cover
    _fastkernel = None

_FORCE_PURE = bool(os.environ.get("BRANCHMAP_PURE"))
_impl = _fastkernel if (_fastkernel is not None and not _FORCE_PURE) else _purekernel

UNKNOWN32 = _purekernel.UNKNOWN32
PEAK_UNKNOWN_HI = _purekernel.PEAK_UNKNOWN_HI

_I64_MAX = 2**63 - 1
_I64_MIN = -(2**63)


def backend_name() -> str:
    return "compiled" if _impl is _fastkernel else "pure"


def have_compiled() -> bool:
    return _fastkernel is not None


@dataclass
class KernelMap:
    """A map lowered to flat coefficient arrays for the kernels."""

    modulus: int
    a: list[int]
    b: list[int]
    d: list[int]
    a64: np.ndarray | None
    b64: np.ndarray | None
    d64: np.ndarray | None

    @property
    def fast_ok(self) -> bool:
        return self.a64 is not None and _impl is _fastkernel


def compile_map(bmap: ResidueBranchMap) -> KernelMap:
    a = [r.multiplier for r in bmap.rules]
    b = [r.offset for r in bmap.rules]
    d = [r.divisor for r in bmap.rules]
    fits = all(_I64_MIN <= x <= _I64_MAX for x in a + b + d)
    if fits:
        a64 = np.array(a, dtype=np.int64)
        b64 = np.array(b, dtype=np.int64)
        d64 = np.array(d, dtype=np.int64)
    else:
        a64 = b64 = d64 = None
    return KernelMap(bmap.modulus, a, b, d, a64, b64, d64)


def _scalar_ok(*values: int) -> bool:
    return all(_I64_MIN <= v <= _I64_MAX for v in values)


def verify_span(km: KernelMap, lo: int, hi: int, frontier: bool, max_steps: int) -> list[int]:
    """Exact verification of starts in [lo, hi); returns step-limit failures."""
    if km.fast_ok and _scalar_ok(lo, hi, max_steps):
        exceptions, bailouts = _impl.verify_block(
            km.modulus, km.a64, km.b64, km.d64, lo, hi, frontier, max_steps
        )
        for n in bailouts:
            exc, _ = _purekernel.verify_block(
                km.modulus, km.a, km.b, km.d, n, n + 1, frontier, max_steps
            )
            exceptions.extend(exc)
        exceptions.sort()
        return exceptions
    exceptions, _ = _purekernel.verify_block(
        km.modulus, km.a, km.b, km.d, lo, hi, frontier, max_steps
    )
    return exceptions


def fill_steps(km: KernelMap, memo: np.ndarray, lo: int, hi: int, max_steps: int) -> None:
    """Fill the stopping-time memo over [lo, hi) with exact values."""
    if km.fast_ok:
        bailouts = _impl.fill_steps_memo(km.modulus, km.a64, km.b64, km.d64, memo, lo, hi, max_steps)
        for n in bailouts:
            status, steps = _purekernel.steps_direct(km.modulus, km.a, km.b, km.d, n, max_steps)
            if status == 0:
                memo[n] = steps
    else:
        _purekernel.fill_steps_memo(km.modulus, km.a, km.b, km.d, memo, lo, hi, max_steps)


def fill_peaks(
    km: KernelMap, peak_hi: np.ndarray, peak_lo: np.ndarray, lo: int, hi: int, max_steps: int
) -> dict[int, int]:
    """Fill the two-limb peak memo over [lo, hi); oversize peaks come back
    as an override dict {start: exact_peak}."""
    if km.fast_ok:
        bailouts = _impl.fill_peak_memo(
            km.modulus, km.a64, km.b64, km.d64, peak_hi, peak_lo, lo, hi, max_steps
        )
    else:
        bailouts = _purekernel.fill_peak_memo(
            km.modulus, km.a, km.b, km.d, peak_hi, peak_lo, lo, hi, max_steps
        )
    overrides: dict[int, int] = {}
    for n in bailouts:
        status, _, peak, _ = _purekernel.peak_direct(km.modulus, km.a, km.b, km.d, n, max_steps)
        if status != 0:
            continue  # leave the unknown sentinel in place
        if peak <= _purekernel.PEAK_MAX:
            peak_hi[n] = peak >> 64
            peak_lo[n] = peak & (2**64 - 1)
        else:
            overrides[n] = peak
    return overrides


def run_steps(km: KernelMap, start: int, max_steps: int) -> tuple[int, int]:
    """(status, steps): status 0 reached 1, status 1 hit the step limit."""
    if km.fast_ok and _scalar_ok(start, max_steps):
        status, steps = _impl.steps_direct(km.modulus, km.a64, km.b64, km.d64, start, max_steps)
        if status != 2:
            return status, steps
    return _purekernel.steps_direct(km.modulus, km.a, km.b, km.d, start, max_steps)


def run_peak(km: KernelMap, start: int, max_steps: int) -> tuple[int, int, int, int]:
    """(status, steps, peak, peak_index) over the trajectory to 1."""
    if km.fast_ok and _scalar_ok(start, max_steps):
        res = _impl.peak_direct(km.modulus, km.a64, km.b64, km.d64, start, max_steps)
        if res[0] != 2:
            return res
    return _purekernel.peak_direct(km.modulus, km.a, km.b, km.d, start, max_steps)


def run_orbit(km: KernelMap, start: int, max_steps: int) -> tuple[int, list[int]]:
    """(status, terms) for the orbit until 1 or the budget; terms are exact."""
    if km.fast_ok and _scalar_ok(start, max_steps):
        status, terms = _impl.orbit_terms(km.modulus, km.a64, km.b64, km.d64, start, max_steps)
        if status != 2:
            return status, terms
    return _purekernel.orbit_terms(km.modulus, km.a, km.b, km.d, start, max_steps)


def run_brent(km: KernelMap, start: int, max_steps: int) -> tuple[bool, int, int, int]:
    """(found, mu, lam, first_in_cycle_value) for the orbit of start."""
    if km.fast_ok and _scalar_ok(start, max_steps):
        status, mu, lam, value = _impl.brent_cycle(
            km.modulus, km.a64, km.b64, km.d64, start, max_steps
        )
        if status != 2:
            return status == 0, mu, lam, value
    status, mu, lam, value = _purekernel.brent_cycle(
        km.modulus, km.a, km.b, km.d, start, max_steps
    )
    return status == 0, mu, lam, value
