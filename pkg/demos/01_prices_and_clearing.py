"""
Prices and clearing on a small market
=====================================

Three goods trade around a cycle: good 1 is offered for good 2, good 2 for
good 3, and good 3 for good 1.  The market state says how much is on
offer at each market, and prices follow from it.
"""

# %%
# Two independent price oracles.  One sums spanning in-trees, the other
# solves the balance equations.  Both are exact.
from fractions import Fraction

from gmech import MarketState, OfferVector, clear, cycle, net_trade, price_by_solve, price_by_trees

g = cycle(3)
b = MarketState(g, {(1, 2): 1, (2, 3): 2, (3, 1): 4})
print("prices by trees :", [str(p) for p in price_by_trees(g, b).prices])
print("prices by solve :", [str(p) for p in price_by_solve(g, b).prices])

# %%
# Clearing.  Two traders meet on the two-good cycle.  The first offers 2
# units of good 1, the second 6 units of good 2.  Each one gets back the
# whole of what the other offered.
g2 = cycle(2)
traders = [OfferVector(g2, {(1, 2): 2}), OfferVector(g2, {(2, 1): 6})]
for k, r in enumerate(clear(g2, traders), start=1):
    print(f"trader {k} receives", [str(x) for x in r])

# %%
# Net trades are worth exactly zero at the market prices.
b2 = MarketState(g2, {(1, 2): 2, (2, 1): 6})
a = OfferVector(g2, {(1, 2): Fraction(1)})
nu = net_trade(g2, a, b2)
p = price_by_solve(g2, b2)
print("net trade", [str(x) for x in nu], "worth", p.value(nu))
