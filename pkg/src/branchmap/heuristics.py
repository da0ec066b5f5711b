"""The probabilistic convergence argument: drift, uniformity, empirical growth.

Each accelerated branch (one rule application plus the halvings it forces)
multiplies its input by an exact rational; weighting the log-multipliers by
class probability gives the expected log-growth per accelerated step.  A
negative drift predicts that orbits shrink over long horizons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from branchmap.core import (
    AcceleratedBranch,
    ResidueBranchMap,
    accelerated_decomposition,
)
from branchmap.errors import ConfigError, EmptySampleError

UNIFORMITY_MAX_DEPTH = 16


@dataclass(frozen=True)
class DriftRow:
    residue: int
    modulus: int
    weight: Fraction
    multiplier: Fraction
    log_multiplier: float


@dataclass(frozen=True)
class DriftReport:
    """Weighted expected log-growth per accelerated step (natural log)."""

    map_name: str
    rows: tuple[DriftRow, ...]
    drift: float
    verdict: str  # negative | zero | positive, decided in exact arithmetic
    log_base: float = math.e


def drift(bmap: ResidueBranchMap) -> DriftReport:
    """Sum of weight * ln(net multiplier) over the accelerated decomposition.

    The float value is assembled from exact rationals; the sign verdict is
    decided exactly by comparing the product of multiplier^weight with 1.
    """
    branches = accelerated_decomposition(bmap)
    rows = []
    for br in branches:
        if br.net_multiplier <= 0:
            raise ConfigError(
                f"drift needs positive net multipliers; branch {br.residue} mod "
                f"{br.modulus} has {br.net_multiplier}"
            )
        rows.append(
            DriftRow(
                residue=br.residue,
                modulus=br.modulus,
                weight=br.weight,
                multiplier=br.net_multiplier,
                log_multiplier=math.log(br.net_multiplier),
            )
        )
    value = sum(float(r.weight) * r.log_multiplier for r in rows)
    scale = lcm(*(r.weight.denominator for r in rows))
    product = Fraction(1)
    for r in rows:
        product *= r.multiplier ** int(r.weight * scale)
    if product < 1:
        verdict = "negative"
    elif product == 1:
        verdict = "zero"
    else:
        verdict = "positive"
    return DriftReport(map_name=bmap.name, rows=tuple(rows), drift=value, verdict=verdict)


@dataclass(frozen=True)
class UniformityReport:
    """Exact output distribution of one accelerated branch modulo 2**depth.

    Inputs run over one full period of the branch's class modulo
    modulus * 2**(depth + forced_halvings); uniform means every output
    residue occurs exactly 2**forced_halvings times.
    """

    branch: AcceleratedBranch
    depth: int
    input_modulus: int
    histogram: tuple[int, ...]
    uniform: bool


def residue_uniformity_check(bmap: ResidueBranchMap, depth: int) -> list[UniformityReport]:
    """Enumerate every accelerated branch's outputs modulo 2**depth."""
    if not 0 <= depth <= UNIFORMITY_MAX_DEPTH:
        raise ValueError(f"depth must be in [0, {UNIFORMITY_MAX_DEPTH}], got {depth}")
    reports = []
    for br in accelerated_decomposition(bmap):
        a, b, d = br.rule.multiplier, br.rule.offset, br.rule.divisor
        k = br.forced_halvings
        period = 1 << (depth + k)
        mask = (1 << depth) - 1
        hist = [0] * (1 << depth)
        for t in range(period):
            n = br.residue + br.modulus * t
            y = ((a * n + b) // d) >> k
            hist[y & mask] += 1
        reports.append(
            UniformityReport(
                branch=br,
                depth=depth,
                input_modulus=br.modulus * period,
                histogram=tuple(hist),
                uniform=len(set(hist)) == 1,
            )
        )
    return reports


@dataclass(frozen=True)
class GrowthEstimate:
    mean: float
    std_error: float
    samples: int


def empirical_log_growth(
    bmap: ResidueBranchMap,
    start_lo: int,
    start_hi: int,
    horizon: int,
) -> GrowthEstimate:
    """Measured mean log-growth per accelerated step over sampled orbits.

    Walks each start for up to ``horizon`` accelerated steps (one rule
    application followed by that branch's forced halvings), recording
    ln(next/current) at every step; orbits stop early at 1.
    """
    if start_lo < 1 or start_lo > start_hi:
        raise ValueError(f"invalid start range [{start_lo}, {start_hi}]")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    halvings = _halvings_by_residue(bmap)
    samples: list[float] = []
    for start in range(start_lo, start_hi + 1):
        v = start
        for _ in range(horizon):
            if v == 1 or v <= 0:
                break
            prev = v
            v = bmap.apply(v)
            for _ in range(halvings[prev % bmap.modulus]):
                v = bmap.apply(v)
            if v <= 0:
                break
            samples.append(math.log(v) - math.log(prev))
    if not samples:
        raise EmptySampleError("no accelerated steps were taken over the sample range")
    n = len(samples)
    mean = math.fsum(samples) / n
    if n > 1:
        var = math.fsum((x - mean) ** 2 for x in samples) / (n - 1)
        std_error = math.sqrt(var / n)
    else:
        std_error = 0.0
    return GrowthEstimate(mean=mean, std_error=std_error, samples=n)


def _halvings_by_residue(bmap: ResidueBranchMap) -> list[int]:
    table = [0] * bmap.modulus
    for br in accelerated_decomposition(bmap):
        for r in range(br.residue, bmap.modulus, br.modulus):
            table[r] = br.forced_halvings
    return table
