"""Trajectory iteration, summaries, and cycle detection.

Iteration stops at the first term equal to 1, at the first term that repeats
an earlier one, or when the application budget runs out.  Every application
of the map counts as one step, so the total stopping time of 1 is 0.
"""

from __future__ import annotations

from dataclasses import dataclass

from branchmap import kernel
from branchmap.core import ResidueBranchMap

REACHED_ONE = "reached-one"
ENTERED_CYCLE = "entered-cycle"
STEP_LIMIT = "step-limit"
FRONTIER_DROP = "frontier-drop"

DEFAULT_MAX_STEPS = 1_000_000


@dataclass
class Trajectory:
    """A fully recorded orbit: terms[i+1] == map(terms[i])."""

    start: int
    terms: list[int]
    termination: str
    cycle_entry_index: int | None = None

    @property
    def steps(self) -> int:
        return len(self.terms) - 1

    @property
    def peak(self) -> int:
        return max(self.terms)

    def summary(self) -> TrajectorySummary:
        peak = max(self.terms)
        return TrajectorySummary(
            start=self.start,
            termination=self.termination,
            total_stopping_time=self.steps if self.termination == REACHED_ONE else None,
            steps_to_cycle=self.cycle_entry_index,
            peak=peak,
            peak_index=self.terms.index(peak),
            term_count=len(self.terms),
        )


@dataclass
class TrajectorySummary:
    """Streaming trajectory statistics, identical to Trajectory.summary().

    ``total_stopping_time`` is defined only for orbits that reach 1; orbits
    that enter a cycle report the entry step under ``steps_to_cycle``
    instead.
    """

    start: int
    termination: str
    total_stopping_time: int | None
    steps_to_cycle: int | None
    peak: int
    peak_index: int
    term_count: int


@dataclass(frozen=True)
class CycleRecord:
    """A cycle in orbit order, rotated to start at its canonical element.

    The canonical element is the member of smallest absolute value, positive
    preferred on a tie; length counts every term, even ones included.
    """

    members: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.members)

    @property
    def canonical(self) -> int:
        return self.members[0]


def _canonical_rotation(members: list[int]) -> tuple[int, ...]:
    best = min(range(len(members)), key=lambda i: (abs(members[i]), members[i] < 0))
    return tuple(members[best:] + members[:best])


def step_sequence(bmap: ResidueBranchMap, start: int, max_steps: int = DEFAULT_MAX_STEPS) -> Trajectory:
    """Record the orbit of start until 1, a repeat, or the step budget."""
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    terms = [start]
    if start == 1:
        return Trajectory(start, terms, REACHED_ONE)
    positions = {start: 0}
    v = start
    for _ in range(max_steps):
        v = bmap.apply(v)
        if v == 1:
            terms.append(v)
            return Trajectory(start, terms, REACHED_ONE)
        if v in positions:
            return Trajectory(start, terms, ENTERED_CYCLE, cycle_entry_index=positions[v])
        terms.append(v)
        positions[v] = len(terms) - 1
    return Trajectory(start, terms, STEP_LIMIT)


def summarize(bmap: ResidueBranchMap, start: int, max_steps: int = DEFAULT_MAX_STEPS) -> TrajectorySummary:
    """Trajectory statistics in O(1) memory (no term list is kept)."""
    if max_steps < 0:
        raise ValueError("max_steps must be >= 0")
    km = kernel.compile_map(bmap)
    status, steps, peak, peak_index = kernel.run_peak(km, start, max_steps)
    if status == 0:
        return TrajectorySummary(
            start=start,
            termination=REACHED_ONE,
            total_stopping_time=steps,
            steps_to_cycle=None,
            peak=peak,
            peak_index=peak_index,
            term_count=steps + 1,
        )
    # 1 is out of reach within the budget; decide cycle-entry vs genuine limit.
    found, mu, lam, _ = kernel.run_brent(km, start, max_steps)
    if found:
        term_count = mu + lam  # terms recorded before the first repeat
        termination = ENTERED_CYCLE
        steps_to_cycle = mu
    else:
        term_count = max_steps + 1
        termination = STEP_LIMIT
        steps_to_cycle = None
    peak, peak_index = _replay_peak(bmap, start, term_count - 1)
    return TrajectorySummary(
        start=start,
        termination=termination,
        total_stopping_time=None,
        steps_to_cycle=steps_to_cycle,
        peak=peak,
        peak_index=peak_index,
        term_count=term_count,
    )


def _replay_peak(bmap: ResidueBranchMap, start: int, applications: int) -> tuple[int, int]:
    v = start
    best = start
    best_idx = 0
    for k in range(1, applications + 1):
        v = bmap.apply(v)
        if v > best:
            best = v
            best_idx = k
    return best, best_idx


def detect_cycle(
    bmap: ResidueBranchMap, start: int, max_steps: int = DEFAULT_MAX_STEPS
) -> CycleRecord | None:
    """Find the cycle the orbit of start enters, if it does so within budget.

    Constant memory (Brent search); the record is rotation-invariant, so any
    member of a cycle yields the identical CycleRecord.
    """
    km = kernel.compile_map(bmap)
    found, _, lam, value = kernel.run_brent(km, start, max_steps)
    if not found:
        return None
    members = [value]
    for _ in range(lam - 1):
        members.append(bmap.apply(members[-1]))
    return CycleRecord(_canonical_rotation(members))


def find_cycles(
    bmap: ResidueBranchMap, lo: int, hi: int, max_steps: int = DEFAULT_MAX_STEPS
) -> list[CycleRecord]:
    """Cycles reachable from every start in [lo, hi], deduplicated and sorted
    by canonical element."""
    if lo > hi:
        raise ValueError(f"empty start range [{lo}, {hi}]")
    km = kernel.compile_map(bmap)
    by_canonical: dict[int, CycleRecord] = {}
    in_cycle: set[int] = set()
    for start in range(lo, hi + 1):
        if start in in_cycle:
            continue
        found, _, lam, value = kernel.run_brent(km, start, max_steps)
        if not found:
            continue
        members = [value]
        for _ in range(lam - 1):
            members.append(bmap.apply(members[-1]))
        record = CycleRecord(_canonical_rotation(members))
        if record.canonical not in by_canonical:
            by_canonical[record.canonical] = record
            in_cycle.update(record.members)
    return [by_canonical[c] for c in sorted(by_canonical)]
