"""Fourier-spectrum benchmarks for data re-uploading quantum models.

Thin wrapper over the compiled core; every function is deterministic given
its seed arguments.
"""

from qnnbench._core import (
    QnnError,
    analytic_size,
    build_dataset,
    classification_metrics,
    derive_seed,
    evaluate,
    families,
    fourier_coefficients,
    gradient,
    learning_capability,
    param_count,
    prepare_run_to_failure,
    preset,
    rms_features,
    roc_auc,
    run_classification,
    run_suite,
    sample_target,
    spectrum,
)

__all__ = [
    "QnnError",
    "analytic_size",
    "build_dataset",
    "classification_metrics",
    "derive_seed",
    "evaluate",
    "families",
    "fourier_coefficients",
    "gradient",
    "learning_capability",
    "param_count",
    "prepare_run_to_failure",
    "preset",
    "rms_features",
    "roc_auc",
    "run_classification",
    "run_suite",
    "sample_target",
    "spectrum",
]

__version__ = "0.1.0"
