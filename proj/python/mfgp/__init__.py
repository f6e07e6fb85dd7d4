"""Multifidelity Gaussian process emulators for spatial simulator output."""

from ._core import (
    ConfigError,
    InvalidArgument,
    NonsepFit,
    NumericalError,
    SepFit,
    compute_metrics,
    fit_nonsep,
    fit_sep,
    generate_testbed,
    hi_fidelity,
    lo_fidelity,
    run_cli,
)

__all__ = [
    "ConfigError",
    "InvalidArgument",
    "NonsepFit",
    "NumericalError",
    "SepFit",
    "compute_metrics",
    "fit_nonsep",
    "fit_sep",
    "generate_testbed",
    "hi_fidelity",
    "lo_fidelity",
    "run_cli",
]
