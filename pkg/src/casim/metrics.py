"""Packet-ordering and throughput metrics over a merged stream.

Misplacement distance is the absolute difference between a PDU's position
in the merged receive order and its original sequence position, with
sequence numbering restarted per burst (each burst is an independent ramp).
The mean is taken over misplaced PDUs only; the max over all PDUs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateWindow, InvariantError
from .model import ScenarioConfig
from .receiver import MergedStream

__all__ = [
    "Misplacement",
    "BurstStats",
    "OrderingReport",
    "misplacement",
    "throughput_bps",
    "ordering_report",
    "compare",
    "format_comparison",
    "write_comparison_csv",
    "COMPARISON_CSV_COLUMNS",
]

NS_PER_S = 10**9


class Misplacement(NamedTuple):
    misplaced_count: int
    mean: float
    max: int


def _burst_bounds(n_total: int, burst_sizes: Sequence[int] | None) -> list[tuple[int, int]]:
    if burst_sizes is None:
        return [(0, n_total)]
    if sum(burst_sizes) != n_total:
        raise InvariantError(
            f"burst sizes sum to {sum(burst_sizes)} but the stream has {n_total} PDUs")
    bounds = []
    start = 0
    for size in burst_sizes:
        bounds.append((start, start + size))
        start += size
    return bounds


def misplacement(
    merged: MergedStream, burst_sizes: Sequence[int] | None = None
) -> Misplacement:
    """Misplaced-PDU count, mean displacement over misplaced PDUs, and the
    maximum displacement over all PDUs (0 everywhere for a perfect stream)."""
    seqs = np.fromiter((e.seq for e in merged.entries), dtype=np.int64)
    total_misplaced = 0
    total_distance = 0
    worst = 0
    for start, stop in _burst_bounds(seqs.size, burst_sizes):
        in_burst = (seqs >= start) & (seqs < stop)
        local_seq = seqs[in_burst] - start
        distance = np.abs(np.arange(local_seq.size, dtype=np.int64) - local_seq)
        misplaced = distance > 0
        total_misplaced += int(misplaced.sum())
        total_distance += int(distance[misplaced].sum())
        if distance.size:
            worst = max(worst, int(distance.max()))
    mean = total_distance / total_misplaced if total_misplaced else 0.0
    return Misplacement(total_misplaced, mean, worst)


def _burst_windows_ns(
    merged: MergedStream, burst_sizes: Sequence[int] | None
) -> list[tuple[int, int]]:
    """Per burst: (pdu_count, active window from first tx start to last arrival)."""
    windows = []
    for start, stop in _burst_bounds(len(merged), burst_sizes):
        entries = [e for e in merged.entries if start <= e.seq < stop]
        first_tx = min(e.t_tx_start_ns for e in entries)
        last_arrival = max(e.t_arrival_ns for e in entries)
        windows.append((len(entries), last_arrival - first_tx))
    return windows


def throughput_bps(
    merged: MergedStream,
    pdu_size_bytes: int,
    burst_sizes: Sequence[int] | None = None,
) -> float:
    """Aggregated delivered rate: total bits over total per-burst active time
    (first tx start to last arrival per burst; inter-burst gaps excluded)."""
    if len(merged) < 2:
        raise DegenerateWindow(
            f"throughput needs at least 2 PDUs, got {len(merged)}")
    windows = _burst_windows_ns(merged, burst_sizes)
    total_ns = sum(w for _, w in windows)
    if total_ns <= 0:
        raise DegenerateWindow("total active time is zero")
    total_bits = len(merged) * pdu_size_bytes * 8
    return total_bits * NS_PER_S / total_ns


@dataclass(frozen=True)
class BurstStats:
    """Ordering and throughput figures for one burst."""

    n_pdus: int
    misplaced_count: int
    mean_misplace: float
    max_misplace: int
    throughput_bps: float


@dataclass(frozen=True)
class OrderingReport:
    """Scenario-level evaluation: misplacement statistics and throughput."""

    n_pdus: int
    misplaced_count: int
    mean_misplace: float
    max_misplace: int
    throughput_bps: float
    per_burst: tuple[BurstStats, ...]

    def __post_init__(self):
        if not (0 <= self.mean_misplace <= self.max_misplace <= max(self.n_pdus - 1, 0)):
            raise InvariantError(
                "report must satisfy 0 <= mean <= max <= n-1, got "
                f"mean={self.mean_misplace}, max={self.max_misplace}, n={self.n_pdus}")
        if self.misplaced_count > self.n_pdus:
            raise InvariantError("misplaced_count cannot exceed n_pdus")

    def as_dict(self) -> dict:
        return {
            "n_pdus": self.n_pdus,
            "misplaced_count": self.misplaced_count,
            "mean_misplace": self.mean_misplace,
            "max_misplace": self.max_misplace,
            "throughput_bps": self.throughput_bps,
            "per_burst": [
                {
                    "n_pdus": b.n_pdus,
                    "misplaced_count": b.misplaced_count,
                    "mean_misplace": b.mean_misplace,
                    "max_misplace": b.max_misplace,
                    "throughput_bps": b.throughput_bps,
                }
                for b in self.per_burst
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True)


def ordering_report(merged: MergedStream, scenario: ScenarioConfig) -> OrderingReport:
    """Full report for one scenario run, including the per-burst breakdown."""
    sizes = scenario.burst_sizes
    overall = misplacement(merged, sizes)
    overall_tp = throughput_bps(merged, scenario.pdu_size_bytes, sizes)

    per_burst = []
    windows = _burst_windows_ns(merged, sizes)
    offset = 0
    for size, (n, window_ns) in zip(sizes, windows):
        seqs = [e.seq for e in merged.entries if offset <= e.seq < offset + size]
        local = np.asarray(seqs, dtype=np.int64) - offset
        distance = np.abs(np.arange(local.size, dtype=np.int64) - local)
        misplaced = distance > 0
        count = int(misplaced.sum())
        bits = n * scenario.pdu_size_bytes * 8
        per_burst.append(
            BurstStats(
                n_pdus=n,
                misplaced_count=count,
                mean_misplace=float(distance[misplaced].mean()) if count else 0.0,
                max_misplace=int(distance.max(initial=0)),
                throughput_bps=bits * NS_PER_S / window_ns if window_ns > 0 else 0.0,
            )
        )
        offset += size

    return OrderingReport(
        n_pdus=len(merged),
        misplaced_count=overall.misplaced_count,
        mean_misplace=overall.mean,
        max_misplace=overall.max,
        throughput_bps=overall_tp,
        per_burst=tuple(per_burst),
    )


COMPARISON_CSV_COLUMNS = (
    "label",
    "n_pdus",
    "misplaced_count",
    "mean_misplace",
    "max_misplace",
    "throughput_bps",
)


def compare(labeled_reports: Sequence[tuple[str, OrderingReport]]) -> list[dict]:
    """Flatten (label, report) pairs into comparison rows, one per scenario."""
    if not labeled_reports:
        raise ValueError("compare needs at least one report")
    rows = []
    for label, report in labeled_reports:
        rows.append(
            {
                "label": label,
                "n_pdus": report.n_pdus,
                "misplaced_count": report.misplaced_count,
                "mean_misplace": report.mean_misplace,
                "max_misplace": report.max_misplace,
                "throughput_bps": report.throughput_bps,
            }
        )
    return rows


def format_comparison(labeled_reports: Sequence[tuple[str, OrderingReport]]) -> str:
    """Aligned text table of max/mean misplacement and throughput per scenario."""
    rows = compare(labeled_reports)
    header = f"{'scenario':<12} {'n_pdus':>7} {'misplaced':>9} {'mean':>9} {'max':>6} {'Mbps':>8}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r['label']:<12} {r['n_pdus']:>7} {r['misplaced_count']:>9} "
            f"{r['mean_misplace']:>9.2f} {r['max_misplace']:>6} "
            f"{r['throughput_bps'] / 1e6:>8.3f}"
        )
    return "\n".join(lines)


def write_comparison_csv(
    labeled_reports: Sequence[tuple[str, OrderingReport]], path: str | Path
) -> None:
    """Write the flat comparison table, one scenario per row."""
    rows = compare(labeled_reports)
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=COMPARISON_CSV_COLUMNS)
        writer.writeheader()
        writer.writerows(rows)
