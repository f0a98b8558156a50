"""Distance graphs over finite fields: spectra, peeling, path and tree embedding, constructions."""

from .gf import FieldElement, FieldSpec, FqSpace, PointVec, field_build, field_from_q
from .distgraph import DistanceGraphFamily
from .expander import DistanceColoredFamily, ExplicitColoredFamily
from .trees import ColoredTree

__all__ = [
    "ColoredTree", "DistanceColoredFamily", "DistanceGraphFamily", "ExplicitColoredFamily",
    "FieldElement", "FieldSpec", "FqSpace", "PointVec", "field_build", "field_from_q",
]
