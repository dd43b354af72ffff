"""Exact spin structures and equivariant spinor indices of hyperbolic manifolds."""

__version__ = "0.1.0"
