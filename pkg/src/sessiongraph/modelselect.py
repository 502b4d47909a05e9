"""Vuong likelihood-ratio comparisons between fitted candidates."""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DomainError, MissingFit
from .statfit import FitResult, TailSample, normal_sf

log = logging.getLogger(__name__)

SIGNIFICANCE = 0.05

# row order of the comparison tables: (first, second)
PAIRS = (
    ("exponential", "zeta"),
    ("lognormal", "zeta"),
    ("lognormal", "exponential"),
    ("dpln", "zeta"),
    ("dpln", "lognormal"),
)
LABELS = {"exponential": "Exponential", "lognormal": "Lognormal", "zeta": "Power law", "dpln": "DPLN"}


@dataclass(frozen=True)
class LlrResult:
    first: str
    second: str
    direction: str
    R: float
    p_value: float
    n_tail: int
    degenerate: bool = False

    @property
    def significant(self) -> bool:
        """Null of equal fit rejected at the 5% level."""
        return self.p_value < SIGNIFICANCE

    @property
    def better(self) -> str:
        """Kind favoured by the sign of R, or ``"tie"`` when not significant."""
        if not self.significant or self.R == 0:
            return "tie"
        return self.first if self.R > 0 else self.second

    @property
    def label(self) -> str:
        return f"{LABELS[self.first]}-{LABELS[self.second]}"

    def to_dict(self) -> dict:
        return {
            "first": self.first,
            "second": self.second,
            "direction": self.direction,
            "R": self.R,
            "p_value": self.p_value,
            "n_tail": self.n_tail,
            "better": self.better,
        }


def vuong_statistic(ll_first, ll_second) -> tuple[float, float, bool]:
    """``(R, two-sided p, degenerate)`` from per-point log-likelihoods.

    R is the summed log-likelihood difference, positive when the first model
    fits better. p uses the normalised statistic ``R / (s_d sqrt(n))``. With
    zero spread in the differences p is 1 if R is 0 and 0 otherwise.
    """
    d = np.asarray(ll_first, dtype=float) - np.asarray(ll_second, dtype=float)
    n = len(d)
    R = float(d.sum())
    sd = float(d.std(ddof=1)) if n > 1 else 0.0
    scale = max(1.0, float(np.abs(d).max(initial=0.0)))
    if sd <= 1e-13 * scale:
        if abs(R) <= 1e-12 * scale * max(n, 1):
            return 0.0, 1.0, False
        return R, 0.0, True
    v = R / (sd * np.sqrt(n))
    p = float(2 * normal_sf(abs(v)))
    return R, min(p, 1.0), False


def vuong_test(sample: TailSample, first: FitResult, second: FitResult, direction: str = "in") -> LlrResult:
    if not (first.xmin == second.xmin == sample.xmin):
        raise DomainError("both fits must share the sample's xmin")
    tail = sample.tail
    R, p, degenerate = vuong_statistic(first.pointwise(tail), second.pointwise(tail))
    if degenerate:
        log.warning("zero-variance log-likelihood ratio for %s vs %s", first.kind, second.kind)
    return LlrResult(first.kind, second.kind, direction, R, p, len(tail), degenerate)


def compare_all(sample: TailSample, fits: Mapping[str, FitResult], direction: str = "in",
                pairs: Sequence[tuple[str, str]] = PAIRS) -> list[LlrResult]:
    """The five standard pairings, in table order. Raises MissingFit naming an absent kind."""
    for first, second in pairs:
        for kind in (first, second):
            if kind not in fits:
                raise MissingFit(f"no fit for {kind!r}")
    return [vuong_test(sample, fits[a], fits[b], direction) for a, b in pairs]


def compare_available(sample: TailSample, fits: Mapping[str, FitResult], direction: str = "in") -> list[LlrResult]:
    """Like compare_all but silently skips pairs whose fit is missing."""
    pairs = [(a, b) for a, b in PAIRS if a in fits and b in fits]
    return compare_all(sample, fits, direction, pairs)


COMPARISON_HEADER = ("first", "second", "direction", "R", "p_value", "better")


def write_comparisons_csv(results: Sequence[LlrResult], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(COMPARISON_HEADER)
        for r in results:
            w.writerow((r.first, r.second, r.direction, repr(r.R), repr(r.p_value), r.better))
