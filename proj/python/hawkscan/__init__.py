"""Change-point detection for multivariate Hawkes processes."""

from ._core import (
    HawkesModel,
    Kernel,
    detect,
    em_fit,
    experiment_names,
    fisher_information,
    kl_mean_field,
    llr,
    load_model,
    log_likelihood,
    mean_field_intensity,
    regularized_inverse,
    reproduce,
    save_model,
    score_vector,
    simulate,
)

__all__ = [
    "HawkesModel",
    "Kernel",
    "detect",
    "em_fit",
    "experiment_names",
    "fisher_information",
    "kl_mean_field",
    "llr",
    "load_model",
    "log_likelihood",
    "mean_field_intensity",
    "regularized_inverse",
    "reproduce",
    "save_model",
    "score_vector",
    "simulate",
]
