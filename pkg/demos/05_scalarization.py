"""
Trading off price and time complexity
=====================================

Score each mechanism by lambda * pi_max + mu * tau_max and keep the
smallest.  With equal weights the star wins from six goods on and ties
the cycle at five.
"""

# %%
from gmech import classify
from gmech.minimality import scalarized_best

for m in (4, 5, 6, 10):
    winners = scalarized_best(m, 1, 1)
    print(m, [(classify(g), str(s)) for g, s in winners])

# %%
# Heavy weight on time favours the complete graph.
print([(classify(g), str(s)) for g, s in scalarized_best(6, "1/10", 10)])
