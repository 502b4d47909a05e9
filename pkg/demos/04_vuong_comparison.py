"""
Which law fits best?
====================

Pairwise Vuong tests between fitted candidates. A positive R favours the
first law; the verdict only counts when p < 0.05.
"""
import numpy as np

from sessiongraph import modelselect, statfit

x = statfit.dpln_sample(statfit.DplnParams(6.0, 3.0, 2.0, 0.5), 10**5, seed=11)
degrees = np.ceil(x).astype(int)
sample = statfit.TailSample(degrees, 1)
fits = {kind: fit(sample) for kind, fit in statfit.FITTERS.items()}

print(f"{'pair':24s} {'R':>12s} {'p':>10s}  better")
for r in modelselect.compare_all(sample, fits):
    print(f"{r.label:24s} {r.R:12.2f} {r.p_value:10.3g}  {r.better}")

# swapping the operands flips R and leaves p alone
a, b = fits["lognormal"], fits["zeta"]
print(modelselect.vuong_test(sample, a, b).R, modelselect.vuong_test(sample, b, a).R)
