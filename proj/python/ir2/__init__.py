"""Integrated R^2 dependence coefficient."""

from ir2._core import (
    DegenerateResponseError,
    InputError,
    InsufficientSampleError,
    NumericalError,
    asymptotic_test,
    bh_adjust,
    d_nu,
    d_nu_symmetric,
    ford_select,
    generate,
    models,
    nu,
    nu_1dim,
    nu_oracle,
    nu_product_uniform,
    permutation_metric,
    permutation_test,
    weight_comparison,
    xi,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateResponseError",
    "InputError",
    "InsufficientSampleError",
    "NumericalError",
    "asymptotic_test",
    "bh_adjust",
    "d_nu",
    "d_nu_symmetric",
    "ford_select",
    "generate",
    "models",
    "nu",
    "nu_1dim",
    "nu_oracle",
    "nu_product_uniform",
    "permutation_metric",
    "permutation_test",
    "weight_comparison",
    "xi",
]
