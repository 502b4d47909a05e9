"""Densities, tail functions and samplers for the four candidate families.

Conventions: every family is defined on ``[xmin, inf)``. The continuous
families (exponential, lognormal, DPLN) are renormalised to that tail; the
zeta law is discrete with support ``xmin, xmin + 1, ...``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DomainError
from .special import hurwitz_zeta, log_normal_cdf, log_normal_sf, normal_cdf, normal_sf

KINDS = ("exponential", "lognormal", "zeta", "dpln")
_LOG_SQRT_2PI = 0.5 * np.log(2 * np.pi)


@dataclass(frozen=True)
class DplnParams:
    alpha: float
    beta: float
    mu: float
    sigma: float

    def __post_init__(self):
        if not (self.alpha > 0 and self.beta > 0 and self.sigma > 0 and np.isfinite(self.mu)):
            raise DomainError(f"invalid DPLN parameters {self}")

    def as_dict(self) -> dict:
        return {"alpha": self.alpha, "beta": self.beta, "mu": self.mu, "sigma": self.sigma}


def _positive(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("density arguments must be positive")
    return x


# ---------------------------------------------------------------- zeta

def zeta_logpmf(x, alpha: float, xmin: int = 1):
    if not alpha > 1:
        raise DomainError("zeta law needs alpha > 1")
    x = np.asarray(x, dtype=float)
    if np.any(x < xmin):
        raise DomainError("zeta pmf evaluated below xmin")
    return -alpha * np.log(x) - np.log(hurwitz_zeta(alpha, xmin))


def zeta_pmf(x, alpha: float, xmin: int = 1):
    """``x^-alpha / zeta(alpha, xmin)`` on ``x >= xmin``."""
    return np.exp(zeta_logpmf(x, alpha, xmin))


def zeta_sf(x, alpha: float, xmin: int = 1):
    """``P(X >= x)``."""
    x = np.maximum(np.asarray(x, dtype=float), xmin)
    return hurwitz_zeta(alpha, x) / hurwitz_zeta(alpha, xmin)


def zeta_sample(alpha: float, n: int, seed, xmin: int = 1, cap: float = 1e15) -> np.ndarray:
    """Exact inverse-transform draws from the discrete power law.

    Each uniform ``u`` maps to the largest ``x`` with ``P(X >= x) >= u``,
    located by bracketing and integer bisection. Draws beyond ``cap`` are
    clipped to it.
    """
    if not alpha > 1:
        raise DomainError("zeta law needs alpha > 1")
    rng = np.random.default_rng(seed)
    u = 1.0 - rng.random(n)  # (0, 1]
    norm = hurwitz_zeta(alpha, xmin)

    def sf(x):
        return hurwitz_zeta(alpha, x) / norm

    lo = np.full(n, float(xmin))
    hi = np.full(n, float(xmin) + 1)
    grow = sf(hi) >= u
    while np.any(grow) and hi.max() < cap:
        lo = np.where(grow, hi, lo)
        hi = np.where(grow, np.minimum(2 * hi, cap), hi)
        grow = sf(hi) >= u
    # invariant: sf(lo) >= u > sf(hi)
    while True:
        open_ = hi - lo > 1
        if not np.any(open_):
            break
        mid = np.floor((lo + hi) / 2)
        ok = sf(mid) >= u
        lo = np.where(open_ & ok, mid, lo)
        hi = np.where(open_ & ~ok, mid, hi)
    return np.where(sf(hi) >= u, hi, lo).astype(np.int64)


# ---------------------------------------------------------------- exponential

def exponential_logpdf(x, lam: float, xmin: float = 1):
    if not lam > 0:
        raise DomainError("exponential rate must be positive")
    x = np.asarray(x, dtype=float)
    return np.log(lam) - lam * (x - xmin)


# ---------------------------------------------------------------- lognormal

def lognormal_logpdf(x, mu: float, sigma: float, xmin: float | None = None):
    """Lognormal log-density, renormalised to ``[xmin, inf)`` when xmin is given."""
    if not sigma > 0:
        raise DomainError("lognormal sigma must be positive")
    lx = np.log(_positive(x))
    out = -lx - np.log(sigma) - _LOG_SQRT_2PI - 0.5 * ((lx - mu) / sigma) ** 2
    if xmin is not None:
        out = out - log_normal_sf((np.log(xmin) - mu) / sigma)
    return out


# ---------------------------------------------------------------- DPLN

def _dpln_parts(x, p: DplnParams):
    lx = np.log(_positive(x))
    a, b, m, s = p.alpha, p.beta, p.mu, p.sigma
    z = (lx - m) / s
    # the two Pareto-lognormal mixture components, in log space
    left = -a * lx + a * m + 0.5 * a * a * s * s
    right = b * lx - b * m + 0.5 * b * b * s * s
    return lx, z, left, right


def dpln_logpdf(x, p: DplnParams):
    lx, z, left, right = _dpln_parts(x, p)
    a, b, s = p.alpha, p.beta, p.sigma
    t1 = left + log_normal_cdf(z - a * s)
    t2 = right + log_normal_sf(z + b * s)
    return np.log(a * b / (a + b)) - lx + np.logaddexp(t1, t2)


def dpln_pdf(x, p: DplnParams):
    """Double Pareto-lognormal density.

    ``ab/(a+b) [x^(-a-1) e^(a mu + a^2 s^2/2) Phi((ln x - mu - a s^2)/s)
    + x^(b-1) e^(-b mu + b^2 s^2/2) Phic((ln x - mu + b s^2)/s)]``,
    evaluated in log space so large shape parameters do not overflow.
    """
    return np.exp(dpln_logpdf(x, p))


def dpln_cdf(x, p: DplnParams):
    _, z, left, right = _dpln_parts(x, p)
    a, b, s = p.alpha, p.beta, p.sigma
    return (normal_cdf(z)
            - b / (a + b) * np.exp(left + log_normal_cdf(z - a * s))
            + a / (a + b) * np.exp(right + log_normal_sf(z + b * s)))


def dpln_sf(x, p: DplnParams):
    _, z, left, right = _dpln_parts(x, p)
    a, b, s = p.alpha, p.beta, p.sigma
    return (normal_sf(z)
            + b / (a + b) * np.exp(left + log_normal_cdf(z - a * s))
            - a / (a + b) * np.exp(right + log_normal_sf(z + b * s)))


def dpln_moment(k: float, p: DplnParams) -> float:
    """``E[X^k]``; finite only for ``k < alpha``."""
    if k >= p.alpha:
        return np.inf
    a, b = p.alpha, p.beta
    return a * b / ((a - k) * (b + k)) * np.exp(k * p.mu + 0.5 * k * k * p.sigma ** 2)


def dpln_sample(p: DplnParams, n: int, seed) -> np.ndarray:
    """``exp(mu + sigma Z + E1/alpha - E2/beta)`` with Z normal, E1, E2 unit exponential."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal(n)
    e1 = rng.standard_exponential(n)
    e2 = rng.standard_exponential(n)
    return np.exp(p.mu + p.sigma * z + e1 / p.alpha - e2 / p.beta)


# ---------------------------------------------------------------- dispatch

def pointwise_loglik(kind: str, params: dict, x, xmin) -> np.ndarray:
    """Per-observation log density (mass for zeta) on the tail ``[xmin, inf)``."""
    x = np.asarray(x, dtype=float)
    if kind == "zeta":
        return zeta_logpmf(x, params["alpha"], xmin)
    if kind == "exponential":
        return exponential_logpdf(x, params["lambda"], xmin)
    if kind == "lognormal":
        return lognormal_logpdf(x, params["mu"], params["sigma"], xmin)
    if kind == "dpln":
        p = DplnParams(**params)
        return dpln_logpdf(x, p) - np.log(dpln_sf(xmin, p))
    raise DomainError(f"unknown distribution kind {kind!r}")
