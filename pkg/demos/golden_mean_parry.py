"""
Golden mean shift and its Parry measure
=======================================

Count admissible words, get the growth rate from the Perron root, and build
the Markov chain that attains it.
"""

# %%
import math

import numpy as np

from sdentropy import (
    Distribution,
    Partition,
    Sft,
    entropy_series,
    ht_estimate,
    iid,
    markov,
    markov_closed_form,
    parry_measure,
    support_check,
)
from sdentropy.properties import random_markov

# No two consecutive 1s.
golden = Sft([[1, 1], [1, 0]])
est = ht_estimate(golden, 16)
print("word counts:", est.counts)
print("(1/n) ln N(n) at n=16:", round(est.values[-1], 6), " ln rho:", round(est.exact, 9))
print("ln golden ratio:       ", round(math.log((1 + math.sqrt(5)) / 2), 9))

# %%
# The Parry chain.
parry = parry_measure(golden)
print(np.round(parry.transition.astype(float), 6))
print("entropy of Parry chain:", round(markov_closed_form(parry), 9))

# %%
# Other chains living on the same subshift have less entropy.
rng = np.random.default_rng(1)
for _ in range(5):
    spec = random_markov(rng, 2, support=golden.allowed)
    assert support_check(markov(spec), golden, 8)
    print(f"  random supported chain: {markov_closed_form(spec):.6f} <= {est.exact:.6f}")

# %%
# A fair coin is not supported: the shortest bad word is reported.
print(support_check(iid(Distribution.uniform(2)), golden, 6))

# %%
# Finite-n view: a measure on the subshift spreads over at most N(n) words.
a = entropy_series(markov(parry), Partition.singletons(parry.space), 12).values
print("a_n(Parry) <= (1/n) ln N(n):", all(x <= y + 1e-12 for x, y in zip(a, est.values)))
