"""CSV schemas for every report type.

All integers are serialized in full decimal (no exponent, no digit
grouping); files use LF line endings so output is byte-stable across
platforms.

Schemas::

    profile     n,steps
    records     threshold,value,start
    trajectory  step,value
    cycles      canonical,length,members   (members space-separated)
"""

from __future__ import annotations

from typing import Iterable, TextIO

from branchmap.scanner import ScanRecord, StoppingProfile
from branchmap.trajectory import CycleRecord, Trajectory

PROFILE_HEADER = "n,steps"
RECORDS_HEADER = "threshold,value,start"
TRAJECTORY_HEADER = "step,value"
CYCLES_HEADER = "canonical,length,members"


def write_profile(rows: StoppingProfile | Iterable[tuple[int, int]], fp: TextIO) -> None:
    if isinstance(rows, StoppingProfile):
        rows = rows.rows
    fp.write(PROFILE_HEADER + "\n")
    for n, steps in rows:
        fp.write(f"{n},{steps}\n")


def write_records(records: Iterable[ScanRecord], fp: TextIO) -> None:
    fp.write(RECORDS_HEADER + "\n")
    for rec in records:
        fp.write(f"{rec.threshold},{rec.value},{rec.start}\n")


def write_trajectory(traj: Trajectory | Iterable[int], fp: TextIO) -> None:
    terms = traj.terms if isinstance(traj, Trajectory) else list(traj)
    fp.write(TRAJECTORY_HEADER + "\n")
    for step, value in enumerate(terms):
        fp.write(f"{step},{value}\n")


def write_cycles(cycles: Iterable[CycleRecord], fp: TextIO) -> None:
    fp.write(CYCLES_HEADER + "\n")
    for cyc in cycles:
        members = " ".join(str(m) for m in cyc.members)
        fp.write(f"{cyc.canonical},{cyc.length},{members}\n")


def read_rows(fp: TextIO) -> tuple[list[str], list[tuple[int, ...]]]:
    """Read a two-column CSV written by this module back into int rows."""
    header_line = fp.readline().strip()
    if not header_line:
        raise ValueError("empty CSV input")
    header = header_line.split(",")
    rows = []
    for lineno, raw in enumerate(fp, start=2):
        line = raw.strip()
        if not line:
            continue
        cells = line.split(",")
        if len(cells) != len(header):
            raise ValueError(f"line {lineno}: expected {len(header)} cells, got {len(cells)}")
        rows.append(tuple(int(c) for c in cells))
    return header, rows
