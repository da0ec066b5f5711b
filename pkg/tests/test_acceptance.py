"""Acceptance gate: every criterion at its stated tolerance, desk scale.

Run with ``pytest -m acceptance -s`` to see one PASS/FAIL line per
criterion; the heavy range scans put the whole module in the minutes
range on a small machine.
"""

import functools
import io
import math
import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings

from branchmap.cli import main
from branchmap.csvio import write_records
from branchmap.dsl import parse_map, render_map
from branchmap.heuristics import drift, residue_uniformity_check
from branchmap.kernel import have_compiled
from branchmap.scanner import scan_records, stopping_time_profile, verify_range
from branchmap.trajectory import find_cycles

from test_dsl import map_documents

pytestmark = pytest.mark.acceptance

DATA = Path(__file__).parent / "data"


def criterion(num, label):
    def wrap(fn):
        @functools.wraps(fn)
        def inner(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"ACCEPTANCE {num} [{label}]: FAIL")
                raise
            print(f"ACCEPTANCE {num} [{label}]: PASS")

        return inner

    return wrap


@criterion(1, "trajectory of 235 exact")
def test_c1_trajectory_235(capsys):
    assert main(["traj", "--map", "7xpm1", "--start", "235", "--format", "text"]) == 0
    lines = capsys.readouterr().out.splitlines()
    reference = [int(x) for x in (DATA / "sevenpm_235_terms.txt").read_text().split()]
    terms = [int(x) for x in lines[:-1]]
    assert len(terms) == 245
    assert terms == reference
    assert lines[-1] == "steps=244 peak=428688"


@criterion(2, "cycle inventory over [-10^4, 10^4]")
def test_c2_cycle_inventory(m3, m7):
    threen = find_cycles(m3, -10_000, 10_000)
    assert [(c.canonical, c.length) for c in threen] == [
        (-17, 18),
        (-5, 5),
        (-1, 2),
        (0, 1),
        (1, 3),
    ]
    sevenpm = find_cycles(m7, -10_000, 10_000)
    assert [(c.canonical, c.length) for c in sevenpm] == [(-1, 4), (0, 1), (1, 4)]


_STEPS_EXPECTED = {
    "3x1": [
        (10, 19, 9),
        (100, 118, 97),
        (1000, 178, 871),
        (10_000, 261, 6171),
        (100_000, 350, 77_031),
        (1_000_000, 524, 837_799),
        (10_000_000, 685, 8_400_511),
    ],
    "7xpm1": [
        (10, 18, 7),
        (100, 326, 70),
        (1000, 1011, 801),
        (10_000, 1144, 9087),
        (100_000, 1551, 98_003),
        (1_000_000, 2799, 775_533),
        (10_000_000, 3480, 7_632_037),
    ],
}

_PEAK_EXPECTED = {
    "3x1": [
        (10, 52, 7),
        (100, 9232, 27),
        (1000, 250_504, 703),
        (10_000, 27_114_424, 9663),
        (100_000, 1_570_824_736, 77_671),
        (1_000_000, 56_991_483_520, 704_511),
        (10_000_000, 60_342_610_919_632, 6_631_675),
    ],
    "7xpm1": [
        (10, 64, 3),
        (100, 428_688, 35),
        (1000, 20_492_891_264, 701),
        (10_000, 34_462_899_848, 8317),
        (100_000, 965_557_666_410_854_560, 56_925),
        (1_000_000, 16_785_854_261_378_324_480, 199_093),
        (10_000_000, 387_911_901_837_284_812_874_137_728, 4_351_011),
    ],
}


@criterion(3, "stopping-time records to 10^7 exact")
def test_c3_steps_records(m3, m7):
    for bmap in (m3, m7):
        records = scan_records(bmap, 10**7, "steps")
        got = [(r.threshold, r.value, r.start) for r in records]
        assert got == _STEPS_EXPECTED[bmap.name], bmap.name


@criterion(4, "peak records to 10^7 exact (128-bit path)")
def test_c4_peak_records(m3, m7):
    for bmap in (m3, m7):
        records = scan_records(bmap, 10**7, "peak")
        got = [(r.threshold, r.value, r.start) for r in records]
        assert got == _PEAK_EXPECTED[bmap.name], bmap.name
    assert _PEAK_EXPECTED["7xpm1"][-1][1].bit_length() > 64  # needs wide arithmetic


@criterion(5, "convergence verified on [1, 10^8]")
def test_c5_verification_subset(m3, m7):
    jobs = os.cpu_count() or 1
    for bmap in (m7, m3):
        report = verify_range(bmap, 1, 10**8, jobs=jobs)
        assert report.all_converged, f"{bmap.name}: exceptions {report.exceptions[:5]}"
        assert report.exceptions == []


@criterion(6, "drift values and signs")
def test_c6_drift(m3, m7, m5):
    report7 = drift(m7)
    closed7 = 0.5 * math.log(7 / 4) + 0.5 * math.log(1 / 2)
    assert abs(report7.drift - closed7) <= 1e-12 * abs(closed7)
    assert report7.verdict == "negative"
    assert drift(m3).verdict == "negative"
    assert drift(m5).verdict == "positive"


@criterion(7, "branch-output uniformity for l in [0, 10]")
def test_c7_uniformity(m7):
    for depth in range(0, 11):
        reports = residue_uniformity_check(m7, depth)
        assert reports and all(r.uniform for r in reports), f"depth {depth}"


@criterion(8, "property suites")
def test_c8_property_suites(m3, m7):
    _negation_equivariance_to_1e5()
    _memo_vs_direct_profiles(m3, m7)
    _shard_determinism_at_1e5(m3, m7)
    _fast_vs_pure_trajectories(m3, m7)
    _dsl_round_trip_property()


def _negation_equivariance_to_1e5():
    pos = np.arange(1, 10**5 + 1, dtype=np.int64)
    neg = -pos
    guard = (2**63 - 1) // 7
    while pos.size:
        assert (neg == -pos).all()
        alive = pos != 1
        pos, neg = pos[alive], neg[alive]
        if not pos.size:
            break
        assert (pos <= guard).all()
        pos = _vec_step7(pos)
        neg = _vec_step7(neg)


def _vec_step7(v):
    r = v % 4
    out = np.where(r == 1, 7 * v + 1, v)
    out = np.where(r == 3, 7 * v - 1, out)
    return np.where(r % 2 == 0, v // 2, out)


def _memo_vs_direct_profiles(m3, m7):
    for bmap in (m3, m7):
        memoized = stopping_time_profile(bmap, 1, 10**4, memoize=True)
        direct = stopping_time_profile(bmap, 1, 10**4, memoize=False)
        assert memoized.rows == direct.rows


def _shard_determinism_at_1e5(m3, m7):
    for bmap in (m3, m7):
        for kind in ("steps", "peak"):
            baseline = _records_bytes(scan_records(bmap, 10**5, kind, shards=1))
            for shards in (2, 5, 16):
                assert _records_bytes(scan_records(bmap, 10**5, kind, shards=shards)) == baseline


def _records_bytes(records):
    buf = io.StringIO()
    write_records(records, buf)
    return buf.getvalue().encode()


def _fast_vs_pure_trajectories(m3, m7):
    if not have_compiled():
        pytest.skip("compiled kernel unavailable: cannot compare backends")
    from branchmap import _fastkernel, _purekernel, kernel

    for bmap in (m3, m7):
        km = kernel.compile_map(bmap)
        for n in range(1, 10**3 + 1):
            fast = _fastkernel.orbit_terms(km.modulus, km.a64, km.b64, km.d64, n, 10**6)
            pure = _purekernel.orbit_terms(km.modulus, km.a, km.b, km.d, n, 10**6)
            assert fast == pure, f"{bmap.name} start {n}"


@given(map_documents())
@settings(max_examples=60, deadline=None)
def _dsl_round_trip_inner(doc):
    assert parse_map(render_map(doc)) == doc


def _dsl_round_trip_property():
    _dsl_round_trip_inner()
