"""Maximum-likelihood and method-of-moments fits, plus xmin selection."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from ..errors import DegenerateSample, InfeasibleMoments, NonConvergence
from .distributions import DplnParams, pointwise_loglik
from .special import hurwitz_zeta, log_normal_sf

ZETA_ALPHA_BOUNDS = (1.0 + 1e-6, 20.0)
ZETA_ALPHA_TOL = 1e-6
LOGNORMAL_MU_SPAN = 50.0
LOGNORMAL_SIGMA_MAX = 50.0


@dataclass(frozen=True)
class TailSample:
    """Positive observations together with the cut-off the fits start from.

    Zeros are dropped on construction: none of the candidate laws put mass
    there.
    """

    values: np.ndarray
    xmin: float = 1

    def __post_init__(self):
        v = np.asarray(self.values)
        v = v[v > 0]
        object.__setattr__(self, "values", v)
        if self.xmin < 1 and np.issubdtype(v.dtype, np.integer):
            raise ValueError("xmin must be at least 1 for integer data")
        if not self.xmin > 0:
            raise ValueError("xmin must be positive")
        if self.n_tail == 0:
            raise DegenerateSample(f"no observations at or above xmin={self.xmin}")

    @property
    def tail(self) -> np.ndarray:
        return self.values[self.values >= self.xmin]

    @property
    def n_tail(self) -> int:
        return int(np.count_nonzero(self.values >= self.xmin))


@dataclass(frozen=True)
class FitResult:
    kind: str
    params: dict
    xmin: float
    n_tail: int
    log_likelihood: float
    extra: dict = field(default_factory=dict, compare=False)

    def pointwise(self, x) -> np.ndarray:
        return pointwise_loglik(self.kind, self.params, x, self.xmin)

    def dpln_params(self) -> DplnParams:
        return DplnParams(**self.params)

    def to_dict(self) -> dict:
        d = {
            "kind": self.kind,
            "params": dict(self.params),
            "xmin": self.xmin,
            "n_tail": self.n_tail,
            "log_likelihood": self.log_likelihood,
        }
        if self.extra:
            d["extra"] = dict(self.extra)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "FitResult":
        return cls(d["kind"], dict(d["params"]), d["xmin"], d["n_tail"], d["log_likelihood"],
                   dict(d.get("extra", {})))


def log_likelihood(kind: str, params: dict, sample: TailSample) -> float:
    return float(np.sum(pointwise_loglik(kind, params, sample.tail, sample.xmin)))


def _result(kind, params, sample, **extra) -> FitResult:
    ll = log_likelihood(kind, params, sample)
    if not np.isfinite(ll):
        raise NonConvergence(f"{kind} fit produced a non-finite log-likelihood")
    return FitResult(kind, params, sample.xmin, sample.n_tail, ll, extra)


def _require_spread(tail: np.ndarray, kind: str):
    if len(tail) < 2 or np.all(tail == tail[0]):
        raise DegenerateSample(f"{kind} fit needs at least two distinct tail values")


# ---------------------------------------------------------------- zeta

def _zeta_mle(n: int, sum_log: float, xmin) -> float:
    def nll(alpha):
        return alpha * sum_log + n * np.log(hurwitz_zeta(alpha, xmin))

    res = optimize.minimize_scalar(nll, bounds=ZETA_ALPHA_BOUNDS, method="bounded",
                                   options={"xatol": ZETA_ALPHA_TOL})
    return float(res.x)


def fit_zeta_mle(sample: TailSample) -> FitResult:
    tail = sample.tail
    _require_spread(tail, "zeta")
    alpha = _zeta_mle(len(tail), float(np.log(tail).sum()), sample.xmin)
    return _result("zeta", {"alpha": alpha}, sample)


# ---------------------------------------------------------------- exponential

def fit_exponential_mle(sample: TailSample) -> FitResult:
    """Exponential shifted to start at xmin; the rate MLE is closed form."""
    tail = sample.tail
    excess = float(np.mean(tail)) - sample.xmin
    if len(tail) < 2 or excess <= 0:
        raise DegenerateSample("exponential fit needs tail mean above xmin")
    return _result("exponential", {"lambda": 1.0 / excess}, sample)


# ---------------------------------------------------------------- lognormal

def fit_lognormal_mle(sample: TailSample) -> FitResult:
    """Lognormal conditioned on ``X >= xmin``, fitted over (mu, log sigma).

    The untruncated closed form (mean and std of the logs) seeds the search.
    """
    tail = sample.tail
    _require_spread(tail, "lognormal")
    logs = np.log(tail)
    n = len(logs)
    sum_l, log_xmin = logs.sum(), np.log(sample.xmin)

    def nll(theta):
        mu, log_s = theta
        s = np.exp(log_s)
        quad = np.sum((logs - mu) ** 2) / (2 * s * s)
        return sum_l + n * log_s + quad + n * log_normal_sf((log_xmin - mu) / s)

    # Truncation lets the likelihood keep climbing as mu -> -inf with sigma
    # growing (the tail turns exponential-like); the box stops that drift.
    bounds = [(log_xmin - LOGNORMAL_MU_SPAN, logs.max() + LOGNORMAL_MU_SPAN),
              (np.log(1e-9), np.log(LOGNORMAL_SIGMA_MAX))]
    mu0, s0 = logs.mean(), max(logs.std(), 1e-3)
    res = optimize.minimize(nll, [mu0, np.log(s0)], method="Nelder-Mead", bounds=bounds,
                            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 20000,
                                     "maxfev": 40000})
    mu, sigma = float(res.x[0]), float(np.exp(res.x[1]))
    at_bound = any(np.isclose(v, lim, rtol=0, atol=1e-6) for v, b in zip(res.x, bounds) for lim in b)
    if sigma < 1e-8:
        raise DegenerateSample("lognormal fit collapsed (sigma -> 0)")
    if not np.isfinite(mu) or not (res.success or at_bound):
        raise NonConvergence(f"lognormal fit did not converge: {res.message}")
    return _result("lognormal", {"mu": mu, "sigma": sigma}, sample, at_bound=bool(at_bound))


# ---------------------------------------------------------------- DPLN

def _g(k, a, b):
    # log of ab / ((a - k)(b + k))
    return -np.log1p(-k / a) - np.log1p(k / b)


def _mu_sigma2(logm, a, b):
    """mu and sigma^2 from the k=1,2 log-moment equations at fixed (a, b)."""
    c1 = logm[0] - _g(1, a, b)
    c2 = logm[1] - _g(2, a, b)
    s2 = c2 - 2 * c1
    return c1 - s2 / 2, s2


def dpln_from_log_moments(logm, guess=(5.0, 2.0), tol=1e-8, max_iter=200) -> DplnParams:
    """Invert ``log E[X^k]`` for k = 1..4 into DPLN parameters.

    mu and sigma^2 are eliminated through the k = 1, 2 equations and the
    k = 3, 4 residuals are driven to zero over (alpha, beta), searched as
    ``alpha = 4 + e^u``, ``beta = e^v`` so every iterate keeps a finite
    fourth moment.
    """
    logm = np.asarray(logm, dtype=float)
    if logm.shape != (4,) or not np.all(np.isfinite(logm)):
        raise InfeasibleMoments("need four finite log-moments")

    def unpack(uv):
        return 4.0 + np.exp(uv[0]), np.exp(uv[1])

    def residual(uv):
        a, b = unpack(uv)
        mu, s2 = _mu_sigma2(logm, a, b)
        return [logm[k - 1] - _g(k, a, b) - k * mu - 0.5 * k * k * s2 for k in (3, 4)]

    if not guess[0] > 4 or not guess[1] > 0:
        raise ValueError("initial guess must have alpha > 4, beta > 0")
    uv0 = [np.log(guess[0] - 4.0), np.log(guess[1])]
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        sol = optimize.root(residual, uv0, method="hybr",
                            options={"xtol": tol, "maxfev": max_iter * 3})
        a, b = unpack(sol.x)
        mu, s2 = _mu_sigma2(logm, a, b)
    converged = sol.success and np.all(np.abs(sol.fun) < 1e-6)
    if not converged:
        # iterates running off to alpha -> 4 or beta -> 0/inf: no interior root
        if sol.x[0] < -2 or abs(sol.x[1]) > 6 or not np.all(np.isfinite(sol.x)):
            raise InfeasibleMoments(
                f"moment equations have no root with alpha > 4 (search reached alpha={a:.4g}, beta={b:.4g})")
        raise NonConvergence(f"DPLN moment solver failed: {sol.message}")
    if not (s2 > 0 and np.isfinite(mu)):
        raise InfeasibleMoments(f"moment solution has sigma^2 = {s2:.4g} <= 0")
    return DplnParams(float(a), float(b), float(mu), float(np.sqrt(s2)))


def sample_log_moments(values) -> np.ndarray:
    x = np.asarray(values, dtype=float)
    # scale out the median so x^4 cannot overflow on heavy data
    c = np.median(x)
    with np.errstate(over="ignore"):
        return np.array([k * np.log(c) + np.log(np.mean((x / c) ** k)) for k in (1, 2, 3, 4)])


def fit_dpln_moments(values, guess=(5.0, 2.0)) -> DplnParams:
    """Method-of-moments DPLN fit from the first four raw sample moments."""
    x = np.asarray(values, dtype=float)
    if len(x) < 100:
        raise DegenerateSample("DPLN moment fit needs at least 100 observations")
    if np.any(x <= 0):
        raise DegenerateSample("DPLN moment fit needs positive observations")
    return dpln_from_log_moments(sample_log_moments(x), guess=guess)


def fit_dpln(sample: TailSample) -> FitResult:
    """Moment fit on the tail, scored with the tail-renormalised density."""
    p = fit_dpln_moments(sample.tail)
    return _result("dpln", p.as_dict(), sample)


FITTERS = {
    "exponential": fit_exponential_mle,
    "lognormal": fit_lognormal_mle,
    "zeta": fit_zeta_mle,
    "dpln": fit_dpln,
}


# ---------------------------------------------------------------- xmin

@dataclass(frozen=True)
class XminEstimate:
    xmin: int
    alpha: float
    ks_distance: float


def zeta_ks_distance(tail, alpha: float, xmin) -> float:
    """Largest gap between empirical and fitted ``P(X >= x)`` over the observed tail values."""
    tail = np.sort(np.asarray(tail, dtype=float))
    u, counts = np.unique(tail, return_counts=True)
    emp = np.cumsum(counts[::-1])[::-1] / len(tail)
    model = hurwitz_zeta(alpha, u) / hurwitz_zeta(alpha, xmin)
    return float(np.max(np.abs(emp - model)))


def estimate_xmin(values, min_tail: int = 50) -> XminEstimate:
    """Scan distinct values as cut-offs and keep the one whose zeta fit has least KS distance.

    Candidates leave at least two distinct values in the tail. When some
    candidate keeps ``min_tail`` observations, only such candidates are
    considered. Ties go to the smaller xmin.
    """
    v = np.asarray(values)
    v = v[v > 0]
    u, counts = np.unique(v, return_counts=True)
    if len(u) < 2:
        raise DegenerateSample("xmin search needs at least two distinct positive values")
    n_tail = np.cumsum(counts[::-1])[::-1]
    sum_log = np.cumsum((counts * np.log(u))[::-1])[::-1]

    candidates = np.arange(len(u) - 1)
    big = candidates[n_tail[candidates] >= min_tail]
    if len(big):
        candidates = big

    best = None
    for i in candidates:
        xmin = u[i]
        alpha = _zeta_mle(int(n_tail[i]), float(sum_log[i]), xmin)
        emp = n_tail[i:] / n_tail[i]
        model = hurwitz_zeta(alpha, u[i:]) / hurwitz_zeta(alpha, xmin)
        d = float(np.max(np.abs(emp - model)))
        if best is None or d < best.ks_distance:
            best = XminEstimate(int(xmin), alpha, d)
    return best
