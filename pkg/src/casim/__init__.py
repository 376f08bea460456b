"""casim: deterministic two-carrier satellite carrier-aggregation simulator.

Pipeline: a gateway-side scheduler splits a fixed-length PDU stream across
two heterogeneous carriers (load balancing with an optional multi-orbit
prefix, or plain round robin), a discrete-event link emulator serializes and
propagates each PDU, a naive FIFO receiver merges the two arrival streams,
and the metrics layer reports misplacement distances and aggregated
throughput.
"""

from .config import (
    parse_scenario_file,
    parse_scenario_text,
    serialize_scenario,
    write_scenario,
)
from .emulator import (
    LinkEvent,
    LinkEventKind,
    pdu_service_time_s,
    run,
    run_detailed,
    write_trace_csv,
)
from .errors import (
    CasimError,
    ConfigError,
    DegenerateWindow,
    DenominatorTooLarge,
    DominanceViolated,
    DuplicateSeq,
    InvariantError,
    MissingSeq,
    ZeroFillRate,
    ZeroPayload,
)
from .metrics import (
    BurstStats,
    Misplacement,
    OrderingReport,
    compare,
    format_comparison,
    misplacement,
    ordering_report,
    throughput_bps,
    write_comparison_csv,
)
from .model import (
    MODCODS,
    Burst,
    CarrierConfig,
    ModCod,
    OrbitKind,
    OrbitModel,
    Pdu,
    PduTrace,
    ScenarioConfig,
    SchedulerKind,
    modcod_for_snr,
)
from .receiver import MergedEntry, MergedStream, merge
from .scheduler import (
    LOOKUP_TABLE,
    SchedulingPlan,
    assign,
    build_plan,
    generate_sequence,
    load_balance_factor,
    lookup_sequence,
    multi_orbit_prefix,
    pdus_per_fecframe,
    superframes_in_interval,
)

__version__ = "0.1.0"
