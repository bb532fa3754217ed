"""
boussinesq-lab - numerical laboratory for the 2D Boussinesq perturbation
system with vertical-only viscosity and horizontal-only thermal diffusion.

Exact linear solution operator, kernel bounds, decay-rate checks, Lyapunov
and energy diagnostics, and a pseudo-spectral nonlinear solver on the torus.
"""

import logging

__version__ = "0.1.0"

logging.getLogger(__name__).addHandler(logging.NullHandler())


def __getattr__(name: str):
    # Lazy exports to keep `import boussinesq_lab` free of numpy/scipy work.
    if name == "main":
        from .cli.main import main as _main
        return _main
    if name == "load_config":
        from .config import load_config as _load_config
        return _load_config
    raise AttributeError(name)


__all__ = ["main", "load_config", "__version__"]
