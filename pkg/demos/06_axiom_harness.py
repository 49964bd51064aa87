"""
Checking the mechanism conditions
=================================

The harness samples multi-trader offers and checks conservation,
anonymity, aggregation, unit invariance, non-dissipation, value
conservation and flexibility.  Passing means no violation was found at
the samples, not a proof.
"""

# %%
from gmech.axioms import run_all
from gmech.mechanisms import builtin_mechanisms, planted_faults

for mech in builtin_mechanisms()[:3]:
    print(mech.name, "failed:", run_all(mech, samples=50, seed=0).failed)

# %%
# Each planted fault breaks one condition and keeps the rest.
for mech in planted_faults():
    res = run_all(mech, samples=100, seed=1)
    print(f"{mech.name:18s} target={mech.target:15s} failed={res.failed}")
    print("   ", res.reports[mech.target][0].detail)
