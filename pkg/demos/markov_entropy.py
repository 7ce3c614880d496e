"""
Entropy of a two-state Markov chain
===================================

Enumerate cylinder masses, watch the per-symbol block entropy settle, and
compare against the row-entropy formula.
"""

# %%
# A sticky chain: state 0 stays put 90% of the time.
import math

import numpy as np

from sdentropy import (
    MarkovSpec,
    Partition,
    entropy_series,
    hsd_estimate,
    markov,
    markov_closed_form,
)

spec = MarkovSpec([[0.9, 0.1], [0.5, 0.5]])  # initial vector defaults to the invariant one
print("invariant vector:", np.round(spec.initial.as_array().astype(float), 6))
mu = markov(spec)

# %%
# Block entropies E_n over the singleton partition.  a_n = E_n / n falls
# slowly, while the increment E_n - E_{n-1} hits the limit from n = 2 on.
S = Partition.singletons(spec.space)
series = entropy_series(mu, S, 12)
h = markov_closed_form(spec)
print(f"{'n':>3} {'a_n':>10} {'dE_n':>10}")
for n, (a, d) in enumerate(zip(series.values, series.increments), start=1):
    print(f"{n:>3} {a:10.6f} {d:10.6f}")
print(f"row-entropy formula: {h:.6f}")

# %%
# Reducing the series to one number.  For a stationary source ``last`` is
# an upper bound; ``increment`` is far tighter here.
for policy in ("last", "tail-max", "increment"):
    est = hsd_estimate(series, policy)
    print(f"{est.policy:18s} {est.value:.6f}  gap {est.value - h:+.2e}")

# %%
# A coarser partition sees less: lumping both states together gives zero.
print("trivial partition:", entropy_series(mu, Partition.trivial(spec.space), 4).values)
print("in bits:", h / math.log(2))
