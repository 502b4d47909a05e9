"""Empirical degree frequencies for log-log plotting."""
from __future__ import annotations

import csv
from typing import NamedTuple

import numpy as np


class FrequencyRow(NamedTuple):
    degree: int
    count: int
    pmf: float
    ccdf: float


def frequency_table(values) -> list[FrequencyRow]:
    """Rows of (degree, count, empirical pmf, P(X >= degree)), ascending in degree."""
    v = np.asarray(values, dtype=np.int64)
    if v.size == 0:
        return []
    u, counts = np.unique(v, return_counts=True)
    total = counts.sum()
    at_least = np.cumsum(counts[::-1])[::-1]
    return [FrequencyRow(int(d), int(c), float(c / total), float(a / total))
            for d, c, a in zip(u, counts, at_least)]


def write_frequency_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FrequencyRow._fields)
        for r in rows:
            w.writerow((r.degree, r.count, repr(float(r.pmf)), repr(float(r.ccdf))))
