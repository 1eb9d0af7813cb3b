"""Exact computation of tropical Ceresa classes of metric graphs."""

from .graph_core import (
    TropicalCurve,
    genus,
    graph_genus,
    is_hyperelliptic,
    spanning_trees,
    stabilize,
    symanzik,
    tropical_curve,
)
from .symplectic import delta_from_Q, homology_basis, invariant_factors, polarization_Q
from .exterior import AbelianGroupDescriptor, WedgeVector
from .ceresa import CeresaReport, analyze, build_context
from .catalog import builtin_curve, builtin_table

__all__ = [
    "TropicalCurve",
    "tropical_curve",
    "genus",
    "graph_genus",
    "stabilize",
    "spanning_trees",
    "symanzik",
    "is_hyperelliptic",
    "homology_basis",
    "polarization_Q",
    "delta_from_Q",
    "invariant_factors",
    "WedgeVector",
    "AbelianGroupDescriptor",
    "analyze",
    "build_context",
    "CeresaReport",
    "builtin_curve",
    "builtin_table",
]

__version__ = "0.1.0"
