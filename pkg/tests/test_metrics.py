import math
import random
from fractions import Fraction

import pytest

from casim.errors import DegenerateWindow, InvariantError
from casim.metrics import (
    OrderingReport,
    compare,
    format_comparison,
    misplacement,
    ordering_report,
    throughput_bps,
)
from casim.model import Burst
from casim.receiver import MergedEntry, MergedStream, merge
from casim.emulator import run
from casim.scheduler import SchedulingPlan, build_plan
from helpers import alpha_scenario
import oracle


def stream_from_seqs(seqs, arrival_step=100):
    entries = tuple(
        MergedEntry(
            merge_index=i, seq=s, carrier=1,
            t_arrival_ns=(i + 1) * arrival_step, t_tx_start_ns=i * arrival_step)
        for i, s in enumerate(seqs)
    )
    return MergedStream(entries=entries)


class TestMisplacement:
    def test_identity(self):
        assert misplacement(stream_from_seqs(range(10))) == (0, 0.0, 0)

    def test_adjacent_swap(self):
        got = misplacement(stream_from_seqs([0, 2, 1, 3]))
        assert got == (2, 1.0, 1)

    def test_window_reversal_max(self):
        for k in (3, 5, 9):
            seqs = list(range(20))
            seqs[4:4 + k] = reversed(seqs[4:4 + k])
            assert misplacement(stream_from_seqs(seqs)).max == k - 1

    def test_mean_le_max_on_random_permutations(self):
        rng = random.Random(31)
        for _ in range(30):
            n = rng.randint(2, 500)
            seqs = list(range(n))
            rng.shuffle(seqs)
            got = misplacement(stream_from_seqs(seqs))
            assert got.mean <= got.max <= n - 1

    def test_matches_brute_force(self):
        rng = random.Random(77)
        for _ in range(30):
            n = rng.randint(1, 2000)
            seqs = list(range(n))
            rng.shuffle(seqs)
            got = misplacement(stream_from_seqs(seqs))
            want = oracle.brute_displacement(seqs)
            assert got.misplaced_count == want[0]
            assert math.isclose(got.mean, want[1], rel_tol=1e-12, abs_tol=1e-12)
            assert got.max == want[2]

    def test_per_burst_seq_restart(self):
        # burst 2 in perfect order internally: no misplacement even though
        # its global positions trail burst 1
        seqs = [1, 0, 2, 3, 4, 5]
        whole = misplacement(stream_from_seqs(seqs))
        per_burst = misplacement(stream_from_seqs(seqs), burst_sizes=(3, 3))
        assert whole == per_burst == (2, 1.0, 1)

    def test_burst_sizes_must_cover_stream(self):
        with pytest.raises(InvariantError):
            misplacement(stream_from_seqs(range(6)), burst_sizes=(3, 2))


class TestThroughput:
    def test_single_carrier_approaches_fluid_limit(self):
        # the model's fluid rate: one PDU's bits per service time; the frame
        # share not filled by whole PDUs and the superframe overhead keep it
        # below the raw capacity x fill-rate bound
        from casim.emulator import pdu_service_time_s
        from casim.model import OrbitModel
        sc = alpha_scenario(
            Fraction(1),
            orbit1=OrbitModel.meo(amplitude_km=0.0),
            orbit2=OrbitModel.meo(amplitude_km=0.0),
            bursts=(Burst(2000),),
        )
        plan = SchedulingPlan(prefix=(), cycle=(1,), alpha_used=0)
        merged = merge(run(sc, plan))
        got = throughput_bps(merged, sc.pdu_size_bytes)
        fluid = sc.pdu_size_bytes * 8 / pdu_service_time_s(sc.carrier1, sc.pdu_size_bytes)
        assert got <= float(sc.carrier1.usable_capacity_bps())
        assert math.isclose(got, fluid, rel_tol=0.02)

    def test_balanced_pair_doubles_throughput(self):
        from casim.emulator import pdu_service_time_s
        from casim.model import OrbitModel
        sc = alpha_scenario(
            Fraction(1),
            orbit1=OrbitModel.meo(amplitude_km=0.0),
            orbit2=OrbitModel.meo(amplitude_km=0.0),
            bursts=(Burst(4000),),
        )
        merged = merge(run(sc, build_plan(sc)))
        got = throughput_bps(merged, sc.pdu_size_bytes)
        fluid = sc.pdu_size_bytes * 8 / pdu_service_time_s(sc.carrier1, sc.pdu_size_bytes)
        assert math.isclose(got, 2 * fluid, rel_tol=0.02)

    def test_empty_stream_rejected(self):
        with pytest.raises(DegenerateWindow):
            throughput_bps(MergedStream(entries=()), 1500)

    def test_single_pdu_rejected(self):
        with pytest.raises(DegenerateWindow):
            throughput_bps(stream_from_seqs([0]), 1500)

    def test_gaps_excluded_from_active_time(self):
        # two identical bursts far apart: aggregated throughput equals the
        # single-burst value because idle time between bursts is not counted
        # (490 = 70 cycles of 7, so both bursts share the same cycle phase)
        sc_one = alpha_scenario(Fraction(2, 5), bursts=(Burst(490),))
        sc_two = alpha_scenario(
            Fraction(2, 5), bursts=(Burst(490, 100.0), Burst(490, 0.0)))
        tp_one = throughput_bps(
            merge(run(sc_one, build_plan(sc_one))), 1500, sc_one.burst_sizes)
        tp_two = throughput_bps(
            merge(run(sc_two, build_plan(sc_two))), 1500, sc_two.burst_sizes)
        assert math.isclose(tp_one, tp_two, rel_tol=1e-6)


class TestOrderingReport:
    def test_report_fields_and_per_burst(self):
        sc = alpha_scenario(Fraction(2, 5), bursts=(Burst(500, 60.0), Burst(500, 0.0)))
        merged = merge(run(sc, build_plan(sc)))
        report = ordering_report(merged, sc)
        assert report.n_pdus == 1000
        assert len(report.per_burst) == 2
        assert sum(b.n_pdus for b in report.per_burst) == 1000
        assert report.mean_misplace <= report.max_misplace
        assert report.misplaced_count <= report.n_pdus

    def test_invariant_validation(self):
        with pytest.raises(InvariantError):
            OrderingReport(
                n_pdus=10, misplaced_count=1, mean_misplace=5.0, max_misplace=3,
                throughput_bps=1.0, per_burst=())

    def test_json_round_trip_is_stable(self):
        sc = alpha_scenario(Fraction(2, 5), bursts=(Burst(300),))
        merged = merge(run(sc, build_plan(sc)))
        report = ordering_report(merged, sc)
        assert report.to_json() == ordering_report(merged, sc).to_json()


class TestCompare:
    def _report(self, seed=0):
        sc = alpha_scenario(Fraction(2, 5), bursts=(Burst(300),))
        merged = merge(run(sc, build_plan(sc)))
        return ordering_report(merged, sc)

    def test_single_row(self):
        rows = compare([("solo", self._report())])
        assert len(rows) == 1
        assert rows[0]["label"] == "solo"

    def test_identical_reports_identical_rows(self):
        r = self._report()
        rows = compare([("a", r), ("b", r)])
        assert {k: v for k, v in rows[0].items() if k != "label"} \
            == {k: v for k, v in rows[1].items() if k != "label"}

    def test_format_contains_labels_and_header(self):
        text = format_comparison([("alpha04", self._report())])
        assert "alpha04" in text and "mean" in text and "Mbps" in text

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            compare([])
