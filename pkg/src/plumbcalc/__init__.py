"""Dual-graph divisor calculus, plumbing calculus, and topological
invariants for a two-parameter family of affine surfaces."""

from .graphs import (
    AbelianGroup,
    ChainType,
    DomainError,
    Edge,
    OutOfScopeError,
    Vertex,
    WeightedGraph,
)

__all__ = [
    "AbelianGroup",
    "ChainType",
    "DomainError",
    "Edge",
    "OutOfScopeError",
    "Vertex",
    "WeightedGraph",
]

__version__ = "0.1.0"
