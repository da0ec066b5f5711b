#!/usr/bin/env python3
"""Compare the compiled kernel against the pure-Python fallback.

Times the three hot paths (frontier verification, stopping-time memo fill,
cycle search) on the built-in maps and prints a rate table with speedups.

Usage::

    python benchmarks/bench_backends.py [--scale N]

The default scale keeps the pure lane under a minute; raise it to stress
the compiled lane.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import numpy as np

from branchmap import _purekernel
from branchmap.core import preset_3x1, preset_7xpm1
from branchmap.kernel import UNKNOWN32, compile_map

try:
    from branchmap import _fastkernel
except ImportError:
    _fastkernel = None


def bench_verify(impl, km, hi):
    t0 = time.perf_counter()
    impl.verify_block(km.modulus, *_coeffs(impl, km), 1, hi + 1, True, 10**6)
    return hi / (time.perf_counter() - t0)


def bench_memo(impl, km, hi):
    memo = np.full(hi + 1, UNKNOWN32, dtype=np.uint32)
    t0 = time.perf_counter()
    impl.fill_steps_memo(km.modulus, *_coeffs(impl, km), memo, 1, hi + 1, 10**6)
    return hi / (time.perf_counter() - t0)


def bench_brent(impl, km, hi):
    t0 = time.perf_counter()
    for n in range(-hi, hi + 1):
        impl.brent_cycle(km.modulus, *_coeffs(impl, km), n, 10**6)
    return (2 * hi + 1) / (time.perf_counter() - t0)


def _coeffs(impl, km):
    if impl is _purekernel:
        return km.a, km.b, km.d
    return km.a64, km.b64, km.d64


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--scale", type=int, default=100_000,
                        help="starts per benchmark (default 1e5)")
    args = parser.parse_args()

    if _fastkernel is None:
        print("compiled kernel not built; showing pure rates only")

    cases = [
        ("verify 7xpm1", bench_verify, compile_map(preset_7xpm1()), args.scale),
        ("verify 3x1", bench_verify, compile_map(preset_3x1()), args.scale),
        ("steps memo 7xpm1", bench_memo, compile_map(preset_7xpm1()), args.scale),
        ("steps memo 3x1", bench_memo, compile_map(preset_3x1()), args.scale),
        ("brent cycles 3x1", bench_brent, compile_map(preset_3x1()), args.scale // 50),
    ]

    print(f"{'benchmark':<20} {'pure (starts/s)':>16} {'compiled':>16} {'speedup':>9}")
    for name, fn, km, scale in cases:
        pure_rate = fn(_purekernel, km, scale)
        if _fastkernel is not None:
            fast_rate = fn(_fastkernel, km, scale)
            print(f"{name:<20} {pure_rate:>16,.0f} {fast_rate:>16,.0f} {fast_rate / pure_rate:>8.1f}x")
        else:
            print(f"{name:<20} {pure_rate:>16,.0f} {'-':>16} {'-':>9}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
