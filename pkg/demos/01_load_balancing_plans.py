"""
Load balancing factors and scheduling sequences
================================================
How the gateway decides which carrier gets each PDU: the load balancing
factor alpha compares the two carriers' usable capacities, and a repeating
scheduling cycle realizes that ratio PDU by PDU.
"""

from fractions import Fraction

from casim import (
    MODCODS,
    CarrierConfig,
    OrbitModel,
    generate_sequence,
    load_balance_factor,
    lookup_sequence,
)

# Two carriers that differ only in symbol rate: 4.64 Msym/s vs 1.856 Msym/s
# (the effective rates of 5 MHz and 2 MHz allocations), both 8PSK 5/6 with a
# quarter of their capacity available to our user.
modcod = MODCODS["8PSK 5/6"]
carrier1 = CarrierConfig(4_640_000, modcod, Fraction(1, 4), 10.0, OrbitModel.geo())
carrier2 = CarrierConfig(1_856_000, modcod, Fraction(1, 4), 10.0, OrbitModel.geo())

alpha = load_balance_factor(carrier1, carrier2)
print(f"usable capacity, carrier 1: {float(carrier1.usable_capacity_bps()) / 1e6:.3f} Mbps")
print(f"usable capacity, carrier 2: {float(carrier2.usable_capacity_bps()) / 1e6:.3f} Mbps")
print(f"load balancing factor alpha = {alpha} = {float(alpha):.2f}")
print()

# The scheduler keeps a lookup table of cycles for common ratios.  Each "1"
# sends a PDU to carrier 1, each "2" to carrier 2; every cycle contains twos
# and ones in exactly the ratio alpha.
print("table cycles for a few ratios:")
for a in (Fraction(1, 4), Fraction(2, 5), Fraction(3, 4), Fraction(1)):
    print(f"  alpha={str(a):>4}: {lookup_sequence(a)}")
print()

# Off-table ratios go through a generator that interleaves q ones and p twos
# with an error accumulator: carrier 2 is chosen only when staying on
# carrier 1 would leave the twos more than one PDU behind alpha times the
# ones.  Every prefix of the result keeps |count2 - alpha*count1| <= 1.
for a in (Fraction(13, 32), Fraction(5, 11)):
    seq = generate_sequence(a)
    print(f"generated cycle for alpha={a}: {seq}")
    print(f"  ones={seq.count(1)}, twos={seq.count(2)}")

# The generator reproduces the lookup table on its own keys, so both paths
# agree wherever they overlap.
assert generate_sequence(Fraction(2, 5)) == lookup_sequence(Fraction(2, 5))
print("\ngenerator and lookup table agree on table ratios")
