"""Oriented cycles in oriented graphs."""
from .errors import (
    CapacityError,
    ClassificationError,
    ConstructionError,
    GenerationError,
    InputError,
    OrienthamError,
    ParameterError,
)
from .graph import OrientedGraph
from .kernels import BACKEND
from .pattern import Pattern

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "CapacityError",
    "ClassificationError",
    "ConstructionError",
    "GenerationError",
    "InputError",
    "OrientedGraph",
    "OrienthamError",
    "ParameterError",
    "Pattern",
]
