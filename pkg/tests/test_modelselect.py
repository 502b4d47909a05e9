import csv
import itertools

import numpy as np
import pytest
from scipy import stats

from sessiongraph.errors import DomainError, MissingFit
from sessiongraph.modelselect import (PAIRS, LlrResult, compare_all, compare_available,
                                      vuong_statistic, vuong_test, write_comparisons_csv)
from sessiongraph.statfit import (DplnParams, FITTERS, TailSample, dpln_sample, fit_exponential_mle,
                                  fit_lognormal_mle, zeta_sample)

from conftest import SEED


def vuong_oracle(l1, l2):
    d = np.asarray(l1) - np.asarray(l2)
    v = d.sum() / (stats.tstd(d) * np.sqrt(len(d)))
    return d.sum(), 2 * stats.norm.cdf(-abs(v))


@pytest.fixture(scope="module")
def lognormal_sample():
    return TailSample(np.random.default_rng(SEED).lognormal(1.0, 1.0, 10**4), 1)


@pytest.fixture(scope="module")
def four_fits():
    # integer data with a finite fourth moment so all four candidates fit
    x = dpln_sample(DplnParams(6.0, 3.0, 2.0, 0.5), 10**5, SEED)
    sample = TailSample(np.ceil(x).astype(np.int64), 1)
    return sample, {k: f(sample) for k, f in FITTERS.items()}


def test_statistic_matches_oracle(rng):
    l1, l2 = rng.normal(0, 1, 500), rng.normal(0.1, 1.3, 500)
    R, p, degenerate = vuong_statistic(l1, l2)
    R0, p0 = vuong_oracle(l1, l2)
    assert R == pytest.approx(R0) and p == pytest.approx(p0, rel=1e-10)
    assert not degenerate


def test_identical_fits_give_zero(lognormal_sample):
    fit = fit_lognormal_mle(lognormal_sample)
    res = vuong_test(lognormal_sample, fit, fit)
    assert res.R == 0.0 and res.p_value == 1.0
    assert res.better == "tie" and not res.significant


def test_constant_difference_is_degenerate():
    R, p, degenerate = vuong_statistic(np.full(10, -1.0), np.full(10, -2.0))
    assert R == pytest.approx(10.0) and p == 0.0 and degenerate


def test_antisymmetry_all_pairs(four_fits):
    sample, fits = four_fits
    for a, b in itertools.permutations(fits, 2):
        ab, ba = vuong_test(sample, fits[a], fits[b]), vuong_test(sample, fits[b], fits[a])
        assert ab.R == pytest.approx(-ba.R, abs=1e-9)
        assert ab.p_value == pytest.approx(ba.p_value, abs=1e-12)
        assert 0.0 <= ab.p_value <= 1.0


def test_log_ratio_invariance(rng):
    l1, l2 = rng.normal(0, 1, 300), rng.normal(0, 2, 300)
    shift = rng.normal(0, 5, 300)  # same density factor applied pointwise to both models
    a, b = vuong_statistic(l1, l2), vuong_statistic(l1 + shift, l2 + shift)
    assert a[0] == pytest.approx(b[0], abs=1e-9) and a[1] == pytest.approx(b[1], rel=1e-8)


def test_lognormal_beats_exponential(lognormal_sample):
    ln, ex = fit_lognormal_mle(lognormal_sample), fit_exponential_mle(lognormal_sample)
    res = vuong_test(lognormal_sample, ln, ex)
    assert res.R > 0 and res.p_value < 0.05
    assert res.better == "lognormal" and res.label == "Lognormal-Exponential"


def test_compare_all_pairs_in_order(four_fits):
    sample, fits = four_fits
    results = compare_all(sample, fits, "out")
    assert [(r.first, r.second) for r in results] == list(PAIRS)
    assert [r.label for r in results] == ["Exponential-Power law", "Lognormal-Power law",
                                          "Lognormal-Exponential", "DPLN-Power law", "DPLN-Lognormal"]
    assert all(r.direction == "out" and r.n_tail == sample.n_tail for r in results)


def test_missing_fit_names_kind(four_fits):
    sample, fits = four_fits
    partial = {k: v for k, v in fits.items() if k != "dpln"}
    with pytest.raises(MissingFit, match="dpln"):
        compare_all(sample, partial)
    assert len(compare_available(sample, partial)) == 3


def test_xmin_mismatch(four_fits):
    sample, fits = four_fits
    with pytest.raises(DomainError):
        vuong_test(TailSample(sample.values, 2), fits["zeta"], fits["lognormal"])


def test_power_law_beats_exponential_on_zeta_data():
    sample = TailSample(zeta_sample(2.2, 20000, SEED), 1)
    fits = {k: FITTERS[k](sample) for k in ("zeta", "exponential")}
    res = compare_all(sample, fits, pairs=[("exponential", "zeta")])[0]
    assert res.R < 0 and res.better == "zeta"


def test_decision_rule():
    assert LlrResult("lognormal", "zeta", "in", 3.0, 0.049, 10).better == "lognormal"
    assert LlrResult("lognormal", "zeta", "in", -3.0, 0.01, 10).better == "zeta"
    assert LlrResult("lognormal", "zeta", "in", 3.0, 0.05, 10).better == "tie"


def test_csv_export(tmp_path, four_fits):
    sample, fits = four_fits
    results = compare_all(sample, fits)
    write_comparisons_csv(results, tmp_path / "c.csv")
    with open(tmp_path / "c.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["first", "second", "direction", "R", "p_value", "better"]
    assert [float(r["R"]) for r in rows] == [r.R for r in results]
