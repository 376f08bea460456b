"""Command-line front end.

Subcommands:

    run     --config PATH --out DIR [--trace]   run one scenario, write reports
    suite   [--dir DIR] --out DIR               run every *.cfg in a directory
    plan    --alpha F | --config PATH           print the scheduling plan
    prefix  --config PATH                       print the multi-orbit prefix math

Exit codes: 0 success, 2 config parse error, 3 scenario invariant violation.
Output files are written atomically (temp file + rename), so failures leave
no partial outputs.  The CASIM_SEED environment variable, when set, draws a
random phase offset for orbits with nonzero sinusoidal variation; runs stay
deterministic for a fixed seed.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import random
import sys
import time
from dataclasses import dataclass, replace
from fractions import Fraction
from importlib.resources import files
from pathlib import Path

from .config import parse_scenario_file
from .emulator import run, write_trace_csv
from .errors import CasimError, ConfigError
from .metrics import (
    OrderingReport,
    format_comparison,
    ordering_report,
    write_comparison_csv,
)
from .model import ScenarioConfig
from .receiver import merge
from .scheduler import (
    SchedulingPlan,
    build_plan,
    initial_fast_sequence_raw,
    load_balance_factor,
    lookup_sequence,
    nearest_table_alpha,
    pdus_per_fecframe,
    planning_differential_delay_s,
    superframes_in_interval,
)

__all__ = ["main", "bundled_scenario_dir", "RunManifest"]

SEED_ENV_VAR = "CASIM_SEED"


def bundled_scenario_dir() -> Path:
    """Directory holding the packaged example scenario configs."""
    return Path(str(files("casim") / "configs"))


@dataclass(frozen=True)
class RunManifest:
    """Provenance of one scenario run (not part of the deterministic outputs)."""

    label: str
    config_sha256: str
    outputs: tuple[str, ...]
    duration_s: float

    def as_dict(self) -> dict:
        return {
            "label": self.label,
            "config_sha256": self.config_sha256,
            "outputs": list(self.outputs),
            "duration_s": self.duration_s,
        }


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)


def _atomic_write_with(path: Path, writer) -> None:
    """Run a path-taking writer against a temp file, then rename into place."""
    tmp = path.with_name(path.name + ".tmp")
    writer(tmp)
    tmp.replace(path)


def _apply_seed(scenario: ScenarioConfig, seed: str | None) -> ScenarioConfig:
    """Draw phase offsets for varying orbits when a seed is provided."""
    if not seed:
        return scenario
    rng = random.Random(seed)
    carriers = {}
    for name in ("carrier1", "carrier2"):
        carrier = getattr(scenario, name)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        if carrier.orbit.variation_amplitude_km > 0 and carrier.orbit.variation_phase_rad == 0.0:
            carrier = replace(carrier, orbit=replace(carrier.orbit, variation_phase_rad=phase))
        carriers[name] = carrier
    return replace(scenario, **carriers)


def _load(config_path: str) -> tuple[ScenarioConfig, str]:
    path = Path(config_path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    scenario = parse_scenario_file(path)
    scenario = _apply_seed(scenario, os.environ.get(SEED_ENV_VAR))
    return scenario, hashlib.sha256(raw).hexdigest()


def _execute(scenario: ScenarioConfig) -> tuple[SchedulingPlan, OrderingReport, list]:
    plan = build_plan(scenario)
    traces = run(scenario, plan)
    merged = merge(traces)
    return plan, ordering_report(merged, scenario), traces


def _report_json(scenario: ScenarioConfig, plan: SchedulingPlan, report: OrderingReport) -> str:
    payload = {
        "label": scenario.label,
        "scheduler": scenario.scheduler.value,
        "alpha_used": str(plan.alpha_used),
        "prefix_length": len(plan.prefix),
        "prefix_carrier": plan.prefix[0] if plan.prefix else None,
        "cycle": list(plan.cycle),
        "metrics": report.as_dict(),
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def cmd_run(args) -> int:
    started = time.perf_counter()
    scenario, config_hash = _load(args.config)
    plan, report, traces = _execute(scenario)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []

    _atomic_write_text(out_dir / "report.json", _report_json(scenario, plan, report))
    outputs.append("report.json")
    _atomic_write_with(
        out_dir / "comparison.csv",
        lambda p: write_comparison_csv([(scenario.label, report)], p),
    )
    outputs.append("comparison.csv")
    if args.trace:
        _atomic_write_with(out_dir / "trace.csv", lambda p: write_trace_csv(traces, p))
        outputs.append("trace.csv")

    manifest = RunManifest(
        label=scenario.label,
        config_sha256=config_hash,
        outputs=tuple(outputs),
        duration_s=time.perf_counter() - started,
    )
    _atomic_write_text(
        out_dir / "manifest.json", json.dumps(manifest.as_dict(), indent=2) + "\n"
    )

    print(format_comparison([(scenario.label, report)]))
    print(f"outputs written to {out_dir}")
    return 0


def cmd_suite(args) -> int:
    config_dir = Path(args.dir) if args.dir else bundled_scenario_dir()
    config_paths = sorted(config_dir.glob("*.cfg"))
    if not config_paths:
        raise ConfigError(f"no *.cfg files in {config_dir}")

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    labeled: list[tuple[str, OrderingReport]] = []
    for path in config_paths:
        scenario, _ = _load(str(path))
        plan, report, _traces = _execute(scenario)
        labeled.append((scenario.label, report))
        _atomic_write_text(
            out_dir / f"{scenario.label}.report.json",
            _report_json(scenario, plan, report),
        )

    _atomic_write_with(
        out_dir / "comparison.csv", lambda p: write_comparison_csv(labeled, p))
    print(format_comparison(labeled))
    print(f"outputs written to {out_dir}")
    return 0


def _describe_plan(plan: SchedulingPlan, scenario: ScenarioConfig | None) -> list[str]:
    lines = [
        f"alpha_used: {plan.alpha_used} = {float(plan.alpha_used):.6f}",
        f"cycle: [{','.join(str(c) for c in plan.cycle)}]",
    ]
    if plan.prefix:
        carrier = plan.prefix[0]
        kind = ""
        if scenario is not None:
            orbit = (scenario.carrier1 if carrier == 1 else scenario.carrier2).orbit
            kind = f" ({orbit.kind.value})"
        lines.append(f"prefix: {len(plan.prefix)} x carrier {carrier}{kind}")
    else:
        lines.append("prefix: (empty)")
    return lines


def cmd_plan(args) -> int:
    if args.alpha is not None:
        try:
            alpha = Fraction(args.alpha)
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"--alpha: not a number: {args.alpha!r}") from exc
        key = nearest_table_alpha(alpha)
        cycle = lookup_sequence(alpha)
        print(f"alpha: {alpha} = {float(alpha):.6f}")
        if key != alpha:
            print(f"nearest_table_alpha: {key} = {float(key):.6f}")
        print(f"cycle: [{','.join(str(c) for c in cycle)}]")
        print("prefix: (carrier geometry required; pass --config)")
        return 0

    scenario, _ = _load(args.config)
    plan = build_plan(scenario)
    print(f"label: {scenario.label}")
    print(f"scheduler: {scenario.scheduler.value}")
    print(f"alpha: {load_balance_factor(scenario.carrier1, scenario.carrier2)}")
    for line in _describe_plan(plan, scenario):
        print(line)
    return 0


def cmd_prefix(args) -> int:
    scenario, _ = _load(args.config)
    c1, c2 = scenario.carrier1, scenario.carrier2
    if c1.orbit.mean_leg_distance_km <= c2.orbit.mean_leg_distance_km:
        fast_index, fast, slow = 1, c1, c2
    else:
        fast_index, fast, slow = 2, c2, c1
    slow_index = 3 - fast_index

    delta_t = planning_differential_delay_s(fast.orbit, slow.orbit)
    n_pdu = pdus_per_fecframe(scenario.pdu_size_bytes, fast.modcod, fast.fill_rate)
    raw = initial_fast_sequence_raw(fast, delta_t, scenario.pdu_size_bytes)

    print(f"fast_carrier: {fast_index} ({fast.orbit.kind.value}, "
          f"leg {fast.orbit.mean_leg_distance_km} km)")
    print(f"slow_carrier: {slow_index} ({slow.orbit.kind.value}, "
          f"leg {slow.orbit.mean_leg_distance_km} km)")
    print(f"differential_delay_s: {delta_t:.6f}")
    print(f"superframes_in_delta: "
          f"{superframes_in_interval(delta_t, fast.symbol_rate_sym_s):.6f}")
    print(f"pdus_per_fecframe: {n_pdu}")
    print(f"raw_initial_sequence: {raw:.4f}")
    print(f"prefix_length: {math.floor(raw)}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casim",
        description="Deterministic two-carrier satellite carrier-aggregation simulator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario config")
    p_run.add_argument("--config", required=True, help="scenario .cfg file")
    p_run.add_argument("--out", required=True, help="output directory")
    p_run.add_argument("--trace", action="store_true", help="also write trace.csv")
    p_run.set_defaults(func=cmd_run)

    p_suite = sub.add_parser("suite", help="run every *.cfg in a directory")
    p_suite.add_argument("--dir", help="config directory (default: bundled scenarios)")
    p_suite.add_argument("--out", required=True, help="output directory")
    p_suite.set_defaults(func=cmd_suite)

    p_plan = sub.add_parser("plan", help="print the scheduling plan")
    group = p_plan.add_mutually_exclusive_group(required=True)
    group.add_argument("--alpha", help="load balancing factor (e.g. 0.4 or 2/5)")
    group.add_argument("--config", help="scenario .cfg file")
    p_plan.set_defaults(func=cmd_plan, alpha=None, config=None)

    p_prefix = sub.add_parser("prefix", help="print the multi-orbit prefix computation")
    p_prefix.add_argument("--config", required=True, help="scenario .cfg file")
    p_prefix.set_defaults(func=cmd_prefix)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CasimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
