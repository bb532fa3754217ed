"""Whole-plane decay checks by direct quadrature of the exact kernel representation."""

from .envelopes import DecayCase, DecayReport, EnvelopeTerm, check_hypotheses, decay_report, predicted_terms
from .quadrature import QuadratureResult, adaptive_quadrature, graded_breaks, norm_by_quadrature
from .spectra import ClosedFormSpectrum, ContinuumInit, closed_form_norm, divergence_free_pair

__all__ = [
    "ClosedFormSpectrum",
    "ContinuumInit",
    "DecayCase",
    "DecayReport",
    "EnvelopeTerm",
    "QuadratureResult",
    "adaptive_quadrature",
    "check_hypotheses",
    "closed_form_norm",
    "decay_report",
    "divergence_free_pair",
    "graded_breaks",
    "norm_by_quadrature",
    "predicted_terms",
]
