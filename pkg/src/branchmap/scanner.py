"""Range verification, per-decade record scans, and stopping-time profiles.

Scans are data-parallel over contiguous blocks of starts and their results
are deterministic regardless of block size, worker count, or backend: block
results are merged by (value desc, start asc), so the record holder is
always the smallest start achieving the running maximum.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from branchmap import kernel
from branchmap.checkpoint import write_checkpoint
from branchmap.core import ResidueBranchMap
from branchmap.errors import ConfigError, StepLimitError
from branchmap.trajectory import DEFAULT_MAX_STEPS

DEFAULT_MEMO_CAPACITY = 1 << 26
DEFAULT_BLOCK_SIZE = 1 << 20

KIND_STEPS = "steps"
KIND_PEAK = "peak"


@dataclass(frozen=True)
class ScanRecord:
    """Best metric among starts strictly below a power-of-ten threshold."""

    threshold: int
    kind: str
    value: int
    start: int


@dataclass
class VerificationReport:
    map_name: str
    lo: int
    hi: int
    all_converged: bool
    exceptions: list[int]
    starts_scanned: int
    elapsed_seconds: float
    starts_per_second: float
    jobs: int
    frontier: bool


@dataclass
class StoppingProfile:
    """Total stopping time for every start in a contiguous range, ascending."""

    map_name: str
    rows: list[tuple[int, int]] = field(default_factory=list)


def _thresholds(limit: int) -> list[int]:
    out = []
    t = 10
    while t <= limit:
        out.append(t)
        t *= 10
    return out


def verify_range(
    bmap: ResidueBranchMap,
    lo: int,
    hi: int,
    *,
    use_frontier: bool = True,
    attested_frontier: int = 0,
    max_steps: int = DEFAULT_MAX_STEPS,
    jobs: int | None = None,
    checkpoint_path: str | None = None,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> VerificationReport:
    """Check that every start in [lo, hi] converges.

    In frontier mode a trajectory stops as soon as it drops below its start,
    which is sound for ascending scans; starting above 1 therefore requires
    ``attested_frontier >= lo - 1`` (all smaller starts already verified).
    Starts that exhaust max_steps are collected, not raised.
    """
    if lo < 1 or lo > hi:
        raise ValueError(f"invalid range [{lo}, {hi}]: need 1 <= lo <= hi")
    if use_frontier and lo > 1 and attested_frontier < lo - 1:
        raise ConfigError(
            f"frontier scan from {lo} needs an attested frontier >= {lo - 1}, "
            f"got {attested_frontier}"
        )
    km = kernel.compile_map(bmap)
    jobs = jobs or os.cpu_count() or 1
    blocks = [(b, min(b + block_size, hi + 1)) for b in range(lo, hi + 1, block_size)]

    t0 = time.perf_counter()
    exceptions: list[int] = []
    done_until = lo  # blocks are completed in submission order per worker
    if jobs == 1 or len(blocks) == 1:
        for b_lo, b_hi in blocks:
            exceptions.extend(kernel.verify_span(km, b_lo, b_hi, use_frontier, max_steps))
            done_until = b_hi
            if checkpoint_path:
                _write_verify_checkpoint(checkpoint_path, lo, done_until - 1, exceptions, attested_frontier)
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            futures = [
                pool.submit(kernel.verify_span, km, b_lo, b_hi, use_frontier, max_steps)
                for b_lo, b_hi in blocks
            ]
            for (b_lo, b_hi), fut in zip(blocks, futures):
                exceptions.extend(fut.result())
                done_until = b_hi
                if checkpoint_path:
                    _write_verify_checkpoint(
                        checkpoint_path, lo, done_until - 1, exceptions, attested_frontier
                    )
    exceptions.sort()
    elapsed = time.perf_counter() - t0
    count = hi - lo + 1
    return VerificationReport(
        map_name=bmap.name,
        lo=lo,
        hi=hi,
        all_converged=not exceptions,
        exceptions=exceptions,
        starts_scanned=count,
        elapsed_seconds=elapsed,
        starts_per_second=count / elapsed if elapsed > 0 else float(count),
        jobs=jobs,
        frontier=use_frontier,
    )


def _write_verify_checkpoint(
    path: str, lo: int, done_hi: int, exceptions: list[int], attested_frontier: int
) -> None:
    if lo > 1 and attested_frontier < lo - 1:
        # a gap below lo was never verified; the old attestation stands
        frontier = attested_frontier
    else:
        # the frontier stops just below the first non-converged start
        frontier = done_hi
        for n in sorted(exceptions):
            if n <= frontier:
                frontier = n - 1
        frontier = max(frontier, attested_frontier)
    write_checkpoint(path, frontier=frontier)


def _require_known_steps(memo: np.ndarray, lo: int, hi: int) -> None:
    bad = np.flatnonzero(memo[lo:hi] == kernel.UNKNOWN32)
    if bad.size:
        starts = [int(b) + lo for b in bad[:10]]
        raise StepLimitError(
            f"{bad.size} start(s) did not reach 1 within the step limit "
            f"(first: {starts})",
            starts=starts,
        )


def scan_records(
    bmap: ResidueBranchMap,
    limit: int,
    kind: str,
    *,
    shards: int = 1,
    max_steps: int = DEFAULT_MAX_STEPS,
    memo_capacity: int = DEFAULT_MEMO_CAPACITY,
) -> list[ScanRecord]:
    """Records at thresholds 10, 100, ... <= limit over starts 1..threshold-1.

    kind "steps" ranks by total stopping time, kind "peak" by the maximum
    term of the full trajectory (start included).  The record holder is the
    smallest start achieving the value.  Results are independent of the
    shard count.
    """
    if kind not in (KIND_STEPS, KIND_PEAK):
        raise ValueError(f"kind must be 'steps' or 'peak', got {kind!r}")
    if limit < 10:
        raise ValueError("limit must be >= 10 so at least one threshold exists")
    if shards < 1:
        raise ValueError("shards must be >= 1")
    thresholds = _thresholds(limit)
    scan_hi = thresholds[-1]  # starts 1 .. scan_hi-1
    if scan_hi > memo_capacity:
        raise ConfigError(
            f"record scan to {scan_hi} exceeds the memo capacity {memo_capacity}"
        )
    km = kernel.compile_map(bmap)
    if kind == KIND_STEPS:
        memo = np.full(scan_hi, kernel.UNKNOWN32, dtype=np.uint32)
        kernel.fill_steps(km, memo, 1, scan_hi, max_steps)
        _require_known_steps(memo, 1, scan_hi)
        overrides: dict[int, int] = {}
        candidates = _steps_candidates
        tables = (memo,)
    else:
        peak_hi = np.full(scan_hi, kernel.PEAK_UNKNOWN_HI, dtype=np.uint64)
        peak_lo = np.zeros(scan_hi, dtype=np.uint64)
        overrides = kernel.fill_peaks(km, peak_hi, peak_lo, 1, scan_hi, max_steps)
        unknown = np.flatnonzero(peak_hi[1:scan_hi] == kernel.PEAK_UNKNOWN_HI)
        bad = [int(i) + 1 for i in unknown if int(i) + 1 not in overrides]
        if bad:
            raise StepLimitError(
                f"{len(bad)} start(s) did not reach 1 within the step limit "
                f"(first: {bad[:10]})",
                starts=bad[:10],
            )
        candidates = _peak_candidates
        tables = (peak_hi, peak_lo)

    bounds = _shard_bounds(1, scan_hi, shards)
    records: list[ScanRecord] = []
    for threshold in thresholds:
        best: tuple[int, int] | None = None  # (value, start)
        for s_lo, s_hi in bounds:
            cand = candidates(tables, s_lo, min(s_hi, threshold), overrides)
            if cand is None:
                continue
            if best is None or cand[0] > best[0] or (cand[0] == best[0] and cand[1] < best[1]):
                best = cand
        assert best is not None
        records.append(ScanRecord(threshold, kind, best[0], best[1]))
    return records


def _shard_bounds(lo: int, hi: int, shards: int) -> list[tuple[int, int]]:
    """Split [lo, hi) into up to `shards` contiguous non-empty blocks."""
    total = hi - lo
    shards = min(shards, total) or 1
    size, extra = divmod(total, shards)
    bounds = []
    at = lo
    for i in range(shards):
        width = size + (1 if i < extra else 0)
        bounds.append((at, at + width))
        at += width
    return bounds


def _steps_candidates(tables, lo: int, hi: int, overrides) -> tuple[int, int] | None:
    (memo,) = tables
    if hi <= lo:
        return None
    sub = memo[lo:hi]
    idx = int(np.argmax(sub))
    return int(sub[idx]), lo + idx


def _peak_candidates(tables, lo: int, hi: int, overrides) -> tuple[int, int] | None:
    peak_hi, peak_lo = tables
    if hi <= lo:
        return None
    sub_hi = peak_hi[lo:hi]
    sub_lo = peak_lo[lo:hi]
    known = sub_hi != np.uint64(kernel.PEAK_UNKNOWN_HI)
    best: tuple[int, int] | None = None
    if known.any():
        masked_hi = np.where(known, sub_hi, np.uint64(0))
        top_hi = masked_hi.max()
        at_top = known & (masked_hi == top_hi)
        masked_lo = np.where(at_top, sub_lo, np.uint64(0))
        top_lo = masked_lo.max()
        idx = int(np.argmax(at_top & (masked_lo == top_lo)))
        best = ((int(top_hi) << 64) | int(top_lo), lo + idx)
    over = [(v, n) for n, v in overrides.items() if lo <= n < hi]
    if over:
        ov_value, ov_start = max(over, key=lambda t: (t[0], -t[1]))
        if best is None or ov_value > best[0] or (ov_value == best[0] and ov_start < best[1]):
            best = (ov_value, ov_start)
    return best


def stopping_time_profile(
    bmap: ResidueBranchMap,
    lo: int,
    hi: int,
    *,
    memoize: bool = True,
    max_steps: int = DEFAULT_MAX_STEPS,
    memo_capacity: int = DEFAULT_MEMO_CAPACITY,
) -> StoppingProfile:
    """Exact total stopping time for every start in [lo, hi].

    With memoization the whole prefix [1, hi] is tabulated (T(n) folds into
    T(m) once the orbit drops to m < n), which must and does agree with the
    direct per-start computation.
    """
    if lo < 1 or lo > hi:
        raise ValueError(f"invalid range [{lo}, {hi}]: need 1 <= lo <= hi")
    km = kernel.compile_map(bmap)
    profile = StoppingProfile(map_name=bmap.name)
    if memoize:
        if hi + 1 > memo_capacity:
            raise ConfigError(
                f"profile to {hi} exceeds the memo capacity {memo_capacity}; "
                f"pass memoize=False for direct computation"
            )
        memo = np.full(hi + 1, kernel.UNKNOWN32, dtype=np.uint32)
        kernel.fill_steps(km, memo, 1, hi + 1, max_steps)
        _require_known_steps(memo, lo, hi + 1)
        profile.rows = [(n, int(memo[n])) for n in range(lo, hi + 1)]
    else:
        rows = []
        for n in range(lo, hi + 1):
            status, steps = kernel.run_steps(km, n, max_steps)
            if status != 0:
                raise StepLimitError(
                    f"start {n} did not reach 1 within {max_steps} steps", starts=[n]
                )
            rows.append((n, steps))
        profile.rows = rows
    return profile
