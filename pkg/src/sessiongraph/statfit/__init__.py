"""Candidate degree distributions: special functions, densities, samplers and fits."""
from .distributions import (
    KINDS,
    DplnParams,
    dpln_cdf,
    dpln_logpdf,
    dpln_moment,
    dpln_pdf,
    dpln_sample,
    dpln_sf,
    exponential_logpdf,
    lognormal_logpdf,
    pointwise_loglik,
    zeta_logpmf,
    zeta_pmf,
    zeta_sample,
    zeta_sf,
)
from .fit import (
    FITTERS,
    FitResult,
    TailSample,
    XminEstimate,
    dpln_from_log_moments,
    estimate_xmin,
    fit_dpln,
    fit_dpln_moments,
    fit_exponential_mle,
    fit_lognormal_mle,
    fit_zeta_mle,
    log_likelihood,
    sample_log_moments,
    zeta_ks_distance,
)
from .freq import FrequencyRow, frequency_table, write_frequency_csv
from .special import hurwitz_zeta, log_normal_cdf, log_normal_sf, normal_cdf, normal_sf
