"""hextreme: a six-parameter extreme value distribution family on (0, inf).

The family's density kernel is y^t6 * exp(-t1*y - (t2*y^t3 + t4)^t5); its
normalizing constant is a generalized H-type integral evaluated in `hfunc`.
The package provides the special-function layer (`specfun`), the integral and
its parameter derivatives (`hfunc`), the distribution toolkit (`dist`),
least-squares and maximum-likelihood estimation (`estimate`), goodness-of-fit
machinery (`gof`), bundled datasets (`datasets`), and a CLI (`hextreme`).
"""

from .params import ParamVector, as_theta
from .specfun import DomainError, NumericError
from .hfunc import h_full, h_incomplete, h_partials, h_series_m, log_c
from .dist import (cdf, char_fn, entropy, kl_divergence, log_pdf, mellin,
                   moment, pdf, quantile, sample, shape_classify)
from .estimate import (Dataset, FitOptions, FitResult, initial_guess,
                       log_likelihood, lse_fit, mle_fit, pipeline_fit,
                       project_theta5, score)
from .gof import (bootstrap_pvalues, cvm_statistic, info_criteria,
                  ks_statistic, rq_residuals)
from .datasets import BUNDLED, load_dataset, read_data_file

__version__ = "1.0.0"

__all__ = [
    "ParamVector", "as_theta", "DomainError", "NumericError",
    "h_full", "h_incomplete", "h_partials", "h_series_m", "log_c",
    "pdf", "log_pdf", "cdf", "quantile", "sample", "moment", "mellin",
    "char_fn", "entropy", "kl_divergence", "shape_classify",
    "Dataset", "FitOptions", "FitResult", "initial_guess", "log_likelihood",
    "score", "lse_fit", "mle_fit", "pipeline_fit", "project_theta5",
    "ks_statistic", "cvm_statistic", "bootstrap_pvalues", "info_criteria",
    "rq_residuals",
    "BUNDLED", "load_dataset", "read_data_file",
    "__version__",
]
