"""
Time, price and index complexity
================================

Time complexity counts the conversions needed between two goods.  Price
complexity counts the markets an exchange rate depends on.  Index
complexity counts how many ways a good can be offered.
"""

# %%
from gmech import chorded_triangle, complete, cycle, pi_numeric, profile, star

for name, g in [("star", star(5)), ("cycle", cycle(5)), ("complete", complete(5)), ("chorded triangle", chorded_triangle())]:
    p = profile(g)
    print(f"{name:17s} tau_max={p.tau_max}  pi_max={p.pi_max:2d}  k={p.k}")

# %%
# The symbolic count is backed by a randomized check that only uses the
# linear-solve price oracle.
g = star(4)
print("pi(1,2) star, numeric:", pi_numeric(g, 1, 2, trials=8, seed=7))
print("pi(1,4) star, numeric:", pi_numeric(g, 1, 4, trials=8, seed=7))
