"""Quadratic compensated convex transforms on regular grids."""

from .cct import char_grid, lower_transform, mixed_lu, mixed_ul, upper_transform
from .errors import CompConvError, NumericalError, ValidationError
from .grid import MaskGrid, Padding, SampleField, ScalarGrid, TransformParams, crop, pad_mirror
from .moreau import iterative_moreau, lower_moreau, squared_distance_transform, upper_moreau

__version__ = "0.1.0"

__all__ = [
    "CompConvError",
    "MaskGrid",
    "NumericalError",
    "Padding",
    "SampleField",
    "ScalarGrid",
    "TransformParams",
    "ValidationError",
    "char_grid",
    "crop",
    "iterative_moreau",
    "lower_moreau",
    "lower_transform",
    "mixed_lu",
    "mixed_ul",
    "pad_mirror",
    "squared_distance_transform",
    "upper_moreau",
    "upper_transform",
]
