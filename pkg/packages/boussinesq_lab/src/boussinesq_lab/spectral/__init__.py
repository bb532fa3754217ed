from .fields import SpectralField, VectorField, forward, inverse
from .grid import FrequencyGrid, fft_workers, make_grid, set_fft_workers
from .operators import (
    aniso_norm,
    aniso_norm_both,
    curl,
    dealias,
    dealias_vector,
    derivative,
    divergence,
    divergence_ratio,
    gradient,
    h1_norm,
    h1_norm_sq,
    h2_norm,
    h2_norm_sq,
    inner_product,
    inverse_laplacian,
    l2_norm,
    l2_norm_sq,
    laplacian,
    leray_project,
    perp_gradient,
    physical_l2_norm,
    pointwise_product,
    riesz,
)

__all__ = [
    "FrequencyGrid",
    "SpectralField",
    "VectorField",
    "aniso_norm",
    "aniso_norm_both",
    "curl",
    "dealias",
    "dealias_vector",
    "derivative",
    "divergence",
    "divergence_ratio",
    "fft_workers",
    "forward",
    "gradient",
    "h1_norm",
    "h1_norm_sq",
    "h2_norm",
    "h2_norm_sq",
    "inner_product",
    "inverse",
    "inverse_laplacian",
    "l2_norm",
    "l2_norm_sq",
    "laplacian",
    "leray_project",
    "make_grid",
    "perp_gradient",
    "physical_l2_norm",
    "pointwise_product",
    "riesz",
    "set_fft_workers",
]
