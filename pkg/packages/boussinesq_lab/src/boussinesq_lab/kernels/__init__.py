"""Characteristic roots, solution kernels, frequency regions and kernel envelopes."""

from .bounds import (
    EnvelopeCheck,
    EnvelopeFit,
    EnvelopeValidation,
    KERNEL_INDICES,
    envelope_shape,
    fit_envelope_constants,
    kernel_envelope,
    refine_values,
    validate_envelope,
    verify_kernel_envelopes,
)
from .symbols import (
    EPS_DEG,
    KernelArrays,
    KernelEval,
    Region,
    char_roots,
    char_roots_array,
    classify_region,
    g_functions,
    in_s1,
    kernel_arrays,
    kernel_symbols,
    region_codes,
    region_tag,
    root_bounds_hold,
    roots_from_coefficients,
    symbol_coefficients,
    verify_root_bounds,
    vieta_residuals,
)
from .table import TABLE_COLUMNS, kernel_table

__all__ = [
    "EPS_DEG",
    "EnvelopeCheck",
    "EnvelopeFit",
    "EnvelopeValidation",
    "KERNEL_INDICES",
    "KernelArrays",
    "KernelEval",
    "Region",
    "TABLE_COLUMNS",
    "char_roots",
    "char_roots_array",
    "classify_region",
    "envelope_shape",
    "fit_envelope_constants",
    "g_functions",
    "in_s1",
    "kernel_arrays",
    "kernel_envelope",
    "kernel_symbols",
    "kernel_table",
    "refine_values",
    "region_codes",
    "region_tag",
    "root_bounds_hold",
    "roots_from_coefficients",
    "symbol_coefficients",
    "validate_envelope",
    "verify_kernel_envelopes",
    "verify_root_bounds",
    "vieta_residuals",
]
