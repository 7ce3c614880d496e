"""
Pushing measures through path maps
==================================

Dilation, restriction, factor maps and block recoding act on path measures;
their effect on block entropy is checked exactly with rational weights.
"""

# %%
from fractions import Fraction as F

from sdentropy import (
    MarkovSpec,
    Partition,
    StateSpace,
    block_mass_profile,
    block_recode,
    dilation_pushforward,
    entropy_series,
    factor_pushforward,
    markov,
    power_partition,
    preimage_partition,
    restriction_pushforward,
)

spec = MarkovSpec([[F(1, 2), F(1, 2), 0], [0, F(1, 3), F(2, 3)], [F(3, 4), 0, F(1, 4)]])
mu = markov(spec)
X = spec.space
S = Partition.singletons(X)
print("exact invariant vector:", spec.initial.weights)

# %%
# Dilation repeats every symbol k times, so block n only sees ceil(n/k)
# fresh symbols.  The multiset of cylinder masses matches exactly.
d3 = dilation_pushforward(mu, 3)
for n in (1, 4, 7):
    same = block_mass_profile(d3, S, n) == block_mass_profile(mu, S, -(-n // 3))
    print(f"dilation k=3, n={n}: identical mass profile: {same}")

# %%
# Looking at every other coordinate can only lose information.
even = restriction_pushforward(mu, range(0, 10 ** 9, 2))
print("E(even coords, 4) =", round(entropy_series(even, S, 4).block_values[-1], 6),
      "<= E(mu, 8) =", round(entropy_series(mu, S, 8).block_values[-1], 6))

# %%
# Factor map 0,2 -> a and 1 -> b: same entropy as the pulled-back partition.
Y = StateSpace(("a", "b"))
f = [0, 1, 0]
fm = factor_pushforward(f, mu, Y)
q = Partition.singletons(Y)
print("factor identity:", block_mass_profile(fm, q, 5) == block_mass_profile(mu, preimage_partition(f, q, X), 5))

# %%
# Reading the path two symbols at a time.
pair = block_recode(mu, 2)
print("pair alphabet:", pair.space.labels[:4], "...")
print("E over X^2 at n=3 equals E over X at n=6:",
      block_mass_profile(pair, power_partition(S, 2), 3) == block_mass_profile(mu, S, 6))
