"""Exact arithmetic for row-finite infinite matrices over pluggable base rings."""

from .matrices import (FinVec, RowFiniteMap, add_maps, compose, equal_on_window,
                       from_rows, from_sparse, identity_map, matrix_unit,
                       neg_map, power, projection, scalar_map, to_sparse,
                       zero_map)
from .rings import (BaseRing, CountableRingEnum, Element, is_simple_hint,
                    parse_ring_spec)

__all__ = [
    "BaseRing", "CountableRingEnum", "Element", "FinVec", "RowFiniteMap",
    "add_maps", "compose", "equal_on_window", "from_rows", "from_sparse",
    "identity_map", "is_simple_hint", "matrix_unit", "neg_map",
    "parse_ring_spec", "power", "projection", "scalar_map", "to_sparse",
    "zero_map",
]

__version__ = "0.1.0"
