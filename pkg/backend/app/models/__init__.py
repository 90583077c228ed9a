from .alpha_poly import AlphaPoly, ZERO_POLY_DEGREE
from .configuration import SixVertexConfig, VERTEX_TYPES
from .numbers import BigRational, exact_sqrt, to_bigfloat
from .weights import VertexWeights

__all__ = [
    "AlphaPoly",
    "ZERO_POLY_DEGREE",
    "SixVertexConfig",
    "VERTEX_TYPES",
    "VertexWeights",
    "exact_sqrt",
    "to_bigfloat",
    "BigRational",
]
