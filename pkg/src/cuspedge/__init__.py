"""Cuspidal edges of fronts: geometric invariants and Gauss map singularities."""

__version__ = "0.1.0"

from .expr import SurfaceDefinition, parse_expression  # noqa: E402
from .surfacefile import load_fixture, load_surface_file  # noqa: E402
from .tolerances import DEFAULT, Tolerances  # noqa: E402

__all__ = [
    "SurfaceDefinition",
    "Tolerances",
    "DEFAULT",
    "load_fixture",
    "load_surface_file",
    "parse_expression",
    "__version__",
]
