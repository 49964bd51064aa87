"""
Converting one good into another
================================

With a star, every good trades only against the center.  Turning good 1
into good 2 takes two hops, and the amount received equals the price
ratio no matter which route is used.
"""

# %%
from gmech import MarketState, convert, star
from gmech.pricing import convert_along, price_by_solve

g = star(3)
b = MarketState(g, {(1, 3): 1, (3, 1): 2, (2, 3): 3, (3, 2): 6})
plan = convert(g, 1, 2, b, 1)
for (i, j), amount in plan.steps:
    print(f"offer {amount} of good {i} at market {i}->{j}")
print("received", plan.final_amount, "of good 2")

# %%
# On the complete graph the direct route and a detour give the same amount.
from gmech import complete

k = complete(4)
bk = MarketState(k, {e: n + 1 for n, e in enumerate(k.edges)})
direct = convert(k, 1, 4, bk, 10)
detour = convert_along(k, [1, 2, 4], bk, 10)
print("direct", direct.final_amount, "detour", detour.final_amount, "ratio", 10 * price_by_solve(k, bk).ratio(1, 4))
