import random
from fractions import Fraction

import pytest

from casim.errors import DuplicateSeq, MissingSeq
from casim.model import Burst, PduTrace
from casim.receiver import merge
from casim.scheduler import build_plan
from casim.emulator import run
from helpers import alpha_scenario


def trace(seq, carrier, arrival, tx_start=0):
    return PduTrace(
        seq=seq, carrier=carrier, t_scheduled_ns=0, t_tx_start_ns=tx_start,
        t_tx_end_ns=max(tx_start, arrival - 1), t_arrival_ns=arrival)


class TestMerge:
    def test_in_order_arrivals_give_identity(self):
        traces = [trace(i, 1, 100 * (i + 1)) for i in range(10)]
        merged = merge(traces)
        assert all(e.merge_index == e.seq for e in merged.entries)

    def test_swapped_arrivals_follow_arrival_not_seq(self):
        traces = [trace(0, 1, 200), trace(1, 2, 100)]
        merged = merge(traces)
        assert merged.seqs == (1, 0)

    def test_tie_break_carrier_then_seq(self):
        traces = [trace(2, 2, 100), trace(0, 1, 100), trace(1, 1, 100)]
        merged = merge(traces)
        assert merged.seqs == (0, 1, 2)

    def test_no_resequencing_by_seq(self):
        # a naive receiver must not repair ordering the scheduler got wrong
        traces = [trace(3, 2, 10), trace(0, 1, 20), trace(1, 1, 30), trace(2, 1, 40)]
        assert merge(traces).seqs == (3, 0, 1, 2)

    def test_duplicate_seq_rejected(self):
        with pytest.raises(DuplicateSeq):
            merge([trace(0, 1, 10), trace(0, 2, 20)])

    def test_missing_seq_rejected(self):
        with pytest.raises(MissingSeq):
            merge([trace(0, 1, 10), trace(2, 1, 20)])

    def test_idempotent(self):
        rng = random.Random(5)
        arrivals = rng.sample(range(1000, 9000), 50)
        traces = [trace(i, rng.choice((1, 2)), arrivals[i]) for i in range(50)]
        once = merge(traces)
        again = merge(traces[::-1])
        assert once == again

    def test_two_sorted_streams_interleave_in_order(self):
        # each carrier delivers in seq order and the streams are globally
        # interleavable: the merged stream must be in seq order
        rng = random.Random(9)
        for _ in range(20):
            n = rng.randint(2, 60)
            arrivals = sorted(rng.sample(range(1, 100_000), n))
            traces = [
                trace(i, rng.choice((1, 2)), arrivals[i]) for i in range(n)
            ]
            merged = merge(traces)
            assert merged.seqs == tuple(range(n))

    def test_end_to_end_alpha_one_is_identity(self):
        sc = alpha_scenario(Fraction(1), bursts=(Burst(200),))
        merged = merge(run(sc, build_plan(sc)))
        assert all(e.merge_index == e.seq for e in merged.entries)
