"""Numerical checks for parabolic BMO graph domains, the Lewis-Murray
half-derivative, and L^p Dirichlet estimates for divergence-form
parabolic equations on time-varying graphs."""

from .grid import GridSpec, ScalarField
from .kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["GridSpec", "ScalarField", "BACKEND", "__version__"]
