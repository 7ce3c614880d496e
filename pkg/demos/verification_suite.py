"""
Running the property checks
===========================

Each registered check draws seeded random instances and reports the worst
violation of an identity or inequality against its tolerance.
"""

# %%
from sdentropy import CheckConfig, REGISTRY, run_all
from sdentropy.properties import reports_to_csv, reports_to_text

print("registered checks:", ", ".join(sorted(REGISTRY)))

# %%
# A quick pass with few instances per check.
quick = CheckConfig(instances=5, horizon=8)
reports = run_all(quick, seed=0, names=["dilation", "shift_invariance", "variational", "convexity"])
print(reports_to_text(reports))

# %%
# The CSV form is byte-stable for a given seed.
again = run_all(quick, seed=0, names=["dilation", "shift_invariance", "variational", "convexity"])
assert reports_to_csv(reports) == reports_to_csv(again)
print(reports_to_csv(reports))

# %%
# Too small a budget is reported, not skipped.
tight = run_all(CheckConfig(instances=2, budget=10), names=["dilation"])
print(tight[0].verdict, "-", tight[0].error)
