"""Shared scenario builders for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from casim.model import (
    MODCODS,
    Burst,
    CarrierConfig,
    OrbitModel,
    ScenarioConfig,
    SchedulerKind,
)

EIGHT_PSK_56 = MODCODS["8PSK 5/6"]


def carrier(
    symbol_rate=4_640_000,
    modcod=EIGHT_PSK_56,
    fill_rate=Fraction(1, 4),
    snr_db=10.0,
    orbit=None,
) -> CarrierConfig:
    return CarrierConfig(
        symbol_rate_sym_s=symbol_rate,
        modcod=modcod,
        fill_rate=fill_rate,
        snr_db=snr_db,
        orbit=orbit if orbit is not None else OrbitModel.geo(),
    )


def alpha_scenario(
    alpha: Fraction,
    scheduler=SchedulerKind.LOAD_BALANCING,
    orbit1=None,
    orbit2=None,
    bursts=(Burst(2500, 30.0), Burst(2500, 0.0)),
    label="test",
) -> ScenarioConfig:
    """Two carriers differing only in symbol rate, giving the requested alpha."""
    rate1 = Fraction(4_640_000)
    return ScenarioConfig(
        carrier1=carrier(rate1, orbit=orbit1),
        carrier2=carrier(rate1 * Fraction(alpha), orbit=orbit2),
        scheduler=scheduler,
        pdu_size_bytes=1500,
        bursts=bursts,
        label=label,
    )


def random_constant_delay_scenario(rng: random.Random) -> ScenarioConfig:
    """Random valid scenario with constant delays and well-separated bursts."""
    modcods = list(MODCODS.values())
    pdu_size = rng.choice((400, 800, 1200, 1500))

    def one_carrier():
        while True:
            modcod = rng.choice(modcods)
            fill = Fraction(rng.randint(1, 4), 4)
            share_bytes = 64800 * modcod.code_rate * fill / 8
            if share_bytes >= pdu_size:
                break
        leg = float(rng.randint(8000, 45000))
        kind = "MEO" if leg < 20000 else "GEO"
        return CarrierConfig(
            symbol_rate_sym_s=rng.randint(500, 8000) * 1000,
            modcod=modcod,
            fill_rate=fill,
            snr_db=10.0,
            orbit=OrbitModel(kind, leg),
        )

    a, b = one_carrier(), one_carrier()
    if a.usable_capacity_bps() < b.usable_capacity_bps():
        a, b = b, a

    n_bursts = rng.randint(1, 3)
    remaining = rng.randint(n_bursts, 200)
    sizes = []
    for i in range(n_bursts - 1):
        take = rng.randint(1, remaining - (n_bursts - 1 - i))
        sizes.append(take)
        remaining -= take
    sizes.append(remaining)
    bursts = tuple(Burst(size, 120.0) for size in sizes)

    return ScenarioConfig(
        carrier1=a,
        carrier2=b,
        scheduler=rng.choice((SchedulerKind.LOAD_BALANCING, SchedulerKind.ROUND_ROBIN)),
        pdu_size_bytes=pdu_size,
        bursts=bursts,
        label="random",
    )
