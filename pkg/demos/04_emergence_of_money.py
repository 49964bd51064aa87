"""
Which mechanisms are simplest?
==============================

Every strongly connected graph on m goods is enumerated and profiled.
Under the worst-case order (max time, max price complexity) only three
shapes survive for m = 4: the star, where one good acts as money, the
cycle and the complete graph.
"""

# %%
from gmech.minimality import build_universe, minimal_set, strongly_minimal_set

uni = build_universe(4)
print("labeled graphs:", len(uni))
for universe in ("Mg", "Mstar"):
    rep = strongly_minimal_set(4, universe, uni)
    print(universe, [(e.name, e.profile.tau_max, e.profile.pi_max, e.orbit_size) for e in rep.minimal_graphs])

# %%
# Componentwise minimality is much weaker: every graph is minimal.
print("componentwise minimal classes:", len(minimal_set(4, uni).minimal_graphs))

# %%
# With three goods the cycle's (2, 2) beats the star and the chorded
# triangle, both at (2, 4), so only the cycle and the complete graph remain.
uni3 = build_universe(3)
print("m=3:", [(e.name, e.profile.tau_max, e.profile.pi_max) for e in strongly_minimal_set(3, "Mg", uni3).minimal_graphs])
