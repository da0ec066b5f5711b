"""Plain-text checkpoint files for resumable scans.

Format, one entry per line::

    frontier <n>
    record <kind> <threshold> <value> <start>

``frontier n`` attests that every start in [1, n] converged.  Files are
written atomically (temp file + rename) so a crashed scan never leaves a
truncated checkpoint behind.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field


@dataclass
class Checkpoint:
    frontier: int | None = None
    records: list[tuple[str, int, int, int]] = field(default_factory=list)


def write_checkpoint(
    path: str,
    frontier: int | None = None,
    records: list[tuple[str, int, int, int]] | None = None,
) -> None:
    lines = []
    if frontier is not None:
        lines.append(f"frontier {frontier}")
    for kind, threshold, value, start in records or []:
        lines.append(f"record {kind} {threshold} {value} {start}")
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))
    os.replace(tmp, path)


def read_checkpoint(path: str) -> Checkpoint:
    cp = Checkpoint()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            fields = line.split()
            if fields[0] == "frontier" and len(fields) == 2:
                cp.frontier = int(fields[1])
            elif fields[0] == "record" and len(fields) == 5:
                cp.records.append((fields[1], int(fields[2]), int(fields[3]), int(fields[4])))
            else:
                raise ValueError(f"{path}:{lineno}: unrecognized checkpoint line {line!r}")
    return cp
