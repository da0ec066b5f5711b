import io

import pytest

from branchmap.checkpoint import read_checkpoint, write_checkpoint
from branchmap.csvio import write_records
from branchmap.errors import ConfigError, StepLimitError
from branchmap.scanner import (
    ScanRecord,
    scan_records,
    stopping_time_profile,
    verify_range,
)

# independent single-purpose iterators, deliberately not the library's apply
def _f3(n):
    return 3 * n + 1 if n % 2 else n // 2


def _f7(n):
    r = n % 4
    if r == 1:
        return 7 * n + 1
    if r == 3:
        return 7 * n - 1
    return n // 2


def _oracle_steps(f, n):
    s = 0
    while n != 1:
        n = f(n)
        s += 1
    return s


def _oracle_peak(f, n):
    best = n
    while n != 1:
        n = f(n)
        best = max(best, n)
    return best


def _oracle_records(f, limit, metric):
    thresholds = []
    t = 10
    while t <= limit:
        thresholds.append(t)
        t *= 10
    out = []
    best_value, best_start = None, None
    n = 0
    for threshold in thresholds:
        while n < threshold - 1:
            n += 1
            value = metric(f, n)
            if best_value is None or value > best_value:
                best_value, best_start = value, n
        out.append((threshold, best_value, best_start))
    return out


class TestVerifyRange:
    def test_both_presets_converge_to_1e5(self, m3, m7):
        for bmap in (m3, m7):
            report = verify_range(bmap, 1, 10**5)
            assert report.all_converged
            assert report.exceptions == []
            assert report.starts_scanned == 10**5

    def test_frontier_agrees_with_full_verification(self, m7):
        frontier = verify_range(m7, 1, 10**5, use_frontier=True)
        full = verify_range(m7, 1, 10**5, use_frontier=False)
        assert frontier.all_converged == full.all_converged

    def test_precondition_rejects_bad_ranges(self, m3):
        with pytest.raises(ValueError):
            verify_range(m3, 10, 9)
        with pytest.raises(ValueError):
            verify_range(m3, 0, 10)

    def test_frontier_above_one_needs_attestation(self, m3):
        with pytest.raises(ConfigError):
            verify_range(m3, 100, 200)
        report = verify_range(m3, 100, 200, attested_frontier=99)
        assert report.all_converged

    def test_full_mode_needs_no_attestation(self, m3):
        report = verify_range(m3, 100, 200, use_frontier=False)
        assert report.all_converged

    def test_divergent_map_reports_exceptions(self, m99):
        report = verify_range(m99, 1, 40, use_frontier=False, max_steps=400)
        assert not report.all_converged
        assert report.exceptions  # odd starts blow up under 99n+1
        assert all(1 <= n <= 40 for n in report.exceptions)
        assert report.exceptions == sorted(report.exceptions)

    def test_jobs_do_not_change_the_report(self, m7):
        a = verify_range(m7, 1, 20000, jobs=1, block_size=1 << 10)
        b = verify_range(m7, 1, 20000, jobs=4, block_size=1 << 10)
        assert (a.all_converged, a.exceptions) == (b.all_converged, b.exceptions)

    def test_checkpoint_frontier_written(self, m7, tmp_path):
        path = tmp_path / "scan.ckpt"
        verify_range(m7, 1, 5000, checkpoint_path=str(path), block_size=1 << 10)
        cp = read_checkpoint(str(path))
        assert cp.frontier == 5000

    def test_checkpoint_never_attests_an_unverified_gap(self, m7, tmp_path):
        # full-mode scan starting above 1 with no attestation: the frontier
        # must not leapfrog the [1, lo) gap
        path = tmp_path / "scan.ckpt"
        verify_range(m7, 100, 5000, use_frontier=False, checkpoint_path=str(path))
        assert read_checkpoint(str(path)).frontier == 0

    def test_checkpoint_frontier_stops_below_first_exception(self, m99, tmp_path):
        path = tmp_path / "scan.ckpt"
        report = verify_range(
            m99, 1, 64, use_frontier=False, max_steps=400, checkpoint_path=str(path)
        )
        assert not report.all_converged
        assert read_checkpoint(str(path)).frontier == min(report.exceptions) - 1


class TestScanRecords:
    def test_sevenpm_steps_to_1e5(self, m7):
        records = scan_records(m7, 10**5, "steps")
        assert [(r.threshold, r.value, r.start) for r in records] == [
            (10, 18, 7),
            (100, 326, 70),
            (1000, 1011, 801),
            (10000, 1144, 9087),
            (100000, 1551, 98003),
        ]

    def test_threen_steps_to_ten(self, m3):
        records = scan_records(m3, 10, "steps")
        assert [(records[0].threshold, records[0].value, records[0].start)] == [(10, 19, 9)]

    def test_threen_peaks_to_1e3(self, m3):
        records = scan_records(m3, 1000, "peak")
        assert [(r.threshold, r.value, r.start) for r in records] == [
            (10, 52, 7),
            (100, 9232, 27),
            (1000, 250504, 703),
        ]

    def test_sevenpm_peaks_to_1e2(self, m7):
        records = scan_records(m7, 100, "peak")
        assert [(r.threshold, r.value, r.start) for r in records] == [
            (10, 64, 3),
            (100, 428688, 35),
        ]

    @pytest.mark.parametrize("kind", ["steps", "peak"])
    def test_matches_brute_force_oracle(self, m3, m7, kind):
        metric = _oracle_steps if kind == "steps" else _oracle_peak
        for bmap, f in ((m3, _f3), (m7, _f7)):
            got = [(r.threshold, r.value, r.start) for r in scan_records(bmap, 1000, kind)]
            assert got == _oracle_records(f, 1000, metric)

    def test_limit_between_decades_truncates(self, m7):
        assert [r.threshold for r in scan_records(m7, 5000, "steps")] == [10, 100, 1000]

    def test_shard_count_never_changes_output(self, m7, m3):
        for bmap in (m7, m3):
            for kind in ("steps", "peak"):
                baseline = _records_bytes(scan_records(bmap, 10**4, kind, shards=1))
                for shards in (2, 3, 7, 64):
                    assert (
                        _records_bytes(scan_records(bmap, 10**4, kind, shards=shards))
                        == baseline
                    )

    def test_peak_values_monotone_and_first_achiever(self, m7):
        records = scan_records(m7, 10**4, "peak")
        values = [r.value for r in records]
        assert values == sorted(values)
        for rec in records:
            for n in range(1, rec.start):
                assert _oracle_peak(_f7, n) < rec.value

    def test_bad_arguments(self, m3):
        with pytest.raises(ValueError):
            scan_records(m3, 9, "steps")
        with pytest.raises(ValueError):
            scan_records(m3, 100, "stepz")
        with pytest.raises(ValueError):
            scan_records(m3, 100, "steps", shards=0)

    def test_capacity_guard(self, m3):
        with pytest.raises(ConfigError):
            scan_records(m3, 10**6, "steps", memo_capacity=10**4)

    def test_divergent_map_raises_step_limit(self, m99):
        with pytest.raises(StepLimitError):
            scan_records(m99, 10, "steps", max_steps=200)


def _records_bytes(records: list[ScanRecord]) -> bytes:
    buf = io.StringIO()
    write_records(records, buf)
    return buf.getvalue().encode()


class TestStoppingProfile:
    def test_known_single_rows(self, m7, m3):
        assert stopping_time_profile(m7, 7, 7).rows == [(7, 18)]
        assert stopping_time_profile(m7, 1, 1).rows == [(1, 0)]
        assert stopping_time_profile(m3, 27, 27).rows == [(27, 111)]

    def test_memo_equals_direct_to_1e4(self, m3, m7):
        for bmap in (m3, m7):
            memoized = stopping_time_profile(bmap, 1, 10**4, memoize=True)
            direct = stopping_time_profile(bmap, 1, 10**4, memoize=False)
            assert memoized.rows == direct.rows

    def test_rows_cover_range_exactly_once_ascending(self, m3):
        rows = stopping_time_profile(m3, 50, 150).rows
        assert [n for n, _ in rows] == list(range(50, 151))

    def test_against_oracle(self, m7):
        rows = dict(stopping_time_profile(m7, 1, 500).rows)
        for n in range(1, 501):
            assert rows[n] == _oracle_steps(_f7, n)

    def test_neighbor_clustering_regression_floor(self, m3):
        # fraction of adjacent starts in [1, 1e4] with equal stopping time;
        # oracle run measured 0.41614, frozen floor just below
        rows = stopping_time_profile(m3, 1, 10**4).rows
        steps = [s for _, s in rows]
        equal = sum(1 for x, y in zip(steps, steps[1:]) if x == y)
        assert equal / (len(steps) - 1) > 0.41

    def test_capacity_guard_suggests_direct(self, m3):
        with pytest.raises(ConfigError):
            stopping_time_profile(m3, 1, 10**5, memo_capacity=10**4)
        # direct mode has no capacity constraint
        rows = stopping_time_profile(m3, 99990, 100000, memoize=False, memo_capacity=10**4).rows
        assert len(rows) == 11

    def test_divergent_map_raises(self, m99):
        with pytest.raises(StepLimitError):
            stopping_time_profile(m99, 1, 20, max_steps=300)


class TestCheckpointFormat:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "state.ckpt"
        records = [("steps", 100, 118, 97), ("peak", 100, 9232, 27)]
        write_checkpoint(str(path), frontier=12345, records=records)
        cp = read_checkpoint(str(path))
        assert cp.frontier == 12345
        assert cp.records == records

    def test_file_is_line_oriented_plain_text(self, tmp_path):
        path = tmp_path / "state.ckpt"
        write_checkpoint(str(path), frontier=7, records=[("peak", 10, 64, 3)])
        assert path.read_text() == "frontier 7\nrecord peak 10 64 3\n"

    def test_unknown_line_rejected(self, tmp_path):
        path = tmp_path / "state.ckpt"
        path.write_text("frontier 7\nwat 1 2\n")
        with pytest.raises(ValueError):
            read_checkpoint(str(path))

    def test_empty_checkpoint(self, tmp_path):
        path = tmp_path / "state.ckpt"
        write_checkpoint(str(path))
        cp = read_checkpoint(str(path))
        assert cp.frontier is None
        assert cp.records == []
