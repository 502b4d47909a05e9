"""
Fitting heavy-tailed degree distributions
=========================================

Draw degrees from a discrete power law with a noisy head, pick xmin by the
KS scan, then fit the four candidate laws above it.
"""
import numpy as np

from sessiongraph import statfit
from sessiongraph.errors import SessionGraphError

rng = np.random.default_rng(7)
head = rng.integers(1, 6, 3000)
tail = statfit.zeta_sample(2.4, 4000, seed=7, xmin=6)
degrees = np.concatenate([head, tail])

est = statfit.estimate_xmin(degrees)
print(f"xmin={est.xmin} alpha={est.alpha:.3f} KS={est.ks_distance:.4f}")

sample = statfit.TailSample(degrees, est.xmin)
for kind, fitter in statfit.FITTERS.items():
    try:
        fit = fitter(sample)
    except SessionGraphError as exc:  # the DPLN moment fit gives up on tails this heavy
        print(f"{kind:12s} no fit: {exc}")
        continue
    print(f"{kind:12s} LL={fit.log_likelihood:12.2f} {fit.params} {fit.extra}")

# On a pure power-law tail the truncated lognormal runs off towards mu -> -inf;
# the fit stops at the box edge and says so in extra["at_bound"]. Its higher
# log-likelihood is partly an artifact: continuous densities evaluated at
# integer degrees are not probabilities, so they are flattered against zeta.

# the DPLN moment fit wants all four raw moments finite, so alpha > 4
x = statfit.dpln_sample(statfit.DplnParams(6, 3, 0, 0.5), 10**6, seed=2016)
print(statfit.fit_dpln_moments(x))

# frequency table for plotting P(X >= d) on log-log axes
for row in statfit.frequency_table(degrees)[:5]:
    print(row)
