"""Deterministic discrete-event transport of scheduled PDUs over two carriers.

Each carrier serializes its queue work-conservingly at an effective per-PDU
rate (frame-level encapsulation collapsed into one service time), then the
PDU propagates for the orbit's delay.  All engine time is integer
nanoseconds: seconds are converted once with round(x * 1e9) so identical
scenarios replay to byte-identical traces.
"""

from __future__ import annotations

import csv
import heapq
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from pathlib import Path

from .model import CarrierConfig, PduTrace, ScenarioConfig
from .scheduler import (
    FRAMES_PER_SUPERFRAME_BUNDLE,
    SUPERFRAME_SYMBOLS,
    SchedulingPlan,
    assign,
    pdus_per_fecframe,
)

__all__ = [
    "NS_PER_S",
    "LinkEventKind",
    "LinkEvent",
    "CarrierQueue",
    "s_to_ns",
    "pdu_service_time_ns",
    "pdu_service_time_s",
    "propagation_delay_ns",
    "run",
    "run_detailed",
    "write_trace_csv",
    "TRACE_CSV_COLUMNS",
]

NS_PER_S = 10**9


def s_to_ns(seconds: float) -> int:
    """Convert seconds to integer nanoseconds (round half to even)."""
    return round(seconds * NS_PER_S)


class LinkEventKind(str, Enum):
    TX_START = "TxStart"
    TX_END = "TxEnd"
    ARRIVAL = "Arrival"


@dataclass(frozen=True)
class LinkEvent:
    """One link-level event for a (seq, carrier) pair."""

    kind: LinkEventKind
    seq: int
    carrier: int
    time_ns: int


@dataclass
class CarrierQueue:
    """FIFO of scheduled PDUs awaiting serialization on one carrier."""

    carrier: int
    fifo: deque = field(default_factory=deque)
    next_free_ns: int = 0
    busy: bool = False


def pdu_service_time_ns(carrier: CarrierConfig, pdu_size_bytes: int) -> int:
    """Nanoseconds to emit one PDU on ``carrier``.

    One FEC frame occupies superframe_symbols / (9 x M) symbols, i.e.
    612540 / (9 M R_s) seconds, and carries ``pdus_per_fecframe`` PDUs of
    this user; the quotient is rounded once to integer nanoseconds.
    """
    n_pdu = pdus_per_fecframe(pdu_size_bytes, carrier.modcod, carrier.fill_rate)
    frame_time_ns = Fraction(SUPERFRAME_SYMBOLS * NS_PER_S) / (
        FRAMES_PER_SUPERFRAME_BUNDLE
        * carrier.modcod.bits_per_symbol
        * carrier.symbol_rate_sym_s
    )
    return round(frame_time_ns / n_pdu)


def pdu_service_time_s(carrier: CarrierConfig, pdu_size_bytes: int) -> float:
    """Per-PDU serialization time in seconds (ns-quantized)."""
    return pdu_service_time_ns(carrier, pdu_size_bytes) / NS_PER_S


def propagation_delay_ns(carrier: CarrierConfig, t_ns: int) -> int:
    """Propagation delay of ``carrier``'s orbit at engine time ``t_ns``."""
    return s_to_ns(carrier.orbit.propagation_delay_s(t_ns / NS_PER_S))


# Internal event tags; RELEASE feeds the queues, the LinkEvent kinds record
# the transmission lifecycle.
_RELEASE = "release"


def run_detailed(
    scenario: ScenarioConfig, plan: SchedulingPlan
) -> tuple[list[PduTrace], list[LinkEvent]]:
    """Run the event engine; return per-PDU traces and the full event log.

    Traces are sorted by arrival time with the deterministic tie-break
    (carrier 1 first, then lower seq).  Events are in processing order.
    """
    carriers = {1: scenario.carrier1, 2: scenario.carrier2}
    service_ns = {
        idx: pdu_service_time_ns(cfg, scenario.pdu_size_bytes)
        for idx, cfg in carriers.items()
    }
    queues = {1: CarrierQueue(1), 2: CarrierQueue(2)}

    heap: list[tuple[int, int, str, int]] = []  # (time_ns, order, tag, seq)
    order = 0

    release_ns = 0
    seq = 0
    release_of: dict[int, int] = {}
    for burst in scenario.bursts:
        for _ in range(burst.pdu_count):
            release_of[seq] = release_ns
            heapq.heappush(heap, (release_ns, order, _RELEASE, seq))
            order += 1
            seq += 1
        release_ns += s_to_ns(burst.inter_burst_gap_s)

    events: list[LinkEvent] = []
    tx_start_ns: dict[int, int] = {}
    traces: list[PduTrace] = []

    def start_tx(queue: CarrierQueue, now_ns: int) -> None:
        nonlocal order
        head = queue.fifo.popleft()
        queue.busy = True
        begin = max(now_ns, queue.next_free_ns)
        end = begin + service_ns[queue.carrier]
        queue.next_free_ns = end
        tx_start_ns[head] = begin
        events.append(LinkEvent(LinkEventKind.TX_START, head, queue.carrier, begin))
        heapq.heappush(heap, (end, order, LinkEventKind.TX_END.value, head))
        order += 1

    while heap:
        now_ns, _, tag, ev_seq = heapq.heappop(heap)
        if tag == _RELEASE:
            queue = queues[assign(plan, ev_seq)]
            queue.fifo.append(ev_seq)
            if not queue.busy:
                start_tx(queue, now_ns)
        elif tag == LinkEventKind.TX_END.value:
            carrier_idx = assign(plan, ev_seq)
            queue = queues[carrier_idx]
            events.append(LinkEvent(LinkEventKind.TX_END, ev_seq, carrier_idx, now_ns))
            arrival = now_ns + propagation_delay_ns(carriers[carrier_idx], now_ns)
            heapq.heappush(heap, (arrival, order, LinkEventKind.ARRIVAL.value, ev_seq))
            order += 1
            queue.busy = False
            if queue.fifo:
                start_tx(queue, now_ns)
        else:  # arrival
            carrier_idx = assign(plan, ev_seq)
            events.append(LinkEvent(LinkEventKind.ARRIVAL, ev_seq, carrier_idx, now_ns))
            begin = tx_start_ns[ev_seq]
            traces.append(
                PduTrace(
                    seq=ev_seq,
                    carrier=carrier_idx,
                    t_scheduled_ns=release_of[ev_seq],
                    t_tx_start_ns=begin,
                    t_tx_end_ns=begin + service_ns[carrier_idx],
                    t_arrival_ns=now_ns,
                )
            )

    traces.sort(key=lambda t: (t.t_arrival_ns, t.carrier, t.seq))
    return traces, events


def run(scenario: ScenarioConfig, plan: SchedulingPlan) -> list[PduTrace]:
    """Run the event engine and return traces sorted by arrival."""
    traces, _ = run_detailed(scenario, plan)
    return traces


TRACE_CSV_COLUMNS = (
    "seq",
    "carrier",
    "t_scheduled",
    "t_tx_start",
    "t_tx_end",
    "t_arrival",
)


def write_trace_csv(traces: list[PduTrace], path: str | Path) -> None:
    """Dump traces as CSV (times in integer nanoseconds), one row per PDU."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRACE_CSV_COLUMNS)
        for t in traces:
            writer.writerow(
                (t.seq, t.carrier, t.t_scheduled_ns, t.t_tx_start_ns,
                 t.t_tx_end_ns, t.t_arrival_ns)
            )
