"""Exact secondary invariants (multiplicative cohomology, differential
characters, Chern-Weil transgressions) of finite simplicial models."""

from . import chain_core, chern_weil, derham, exact_linalg, poly_forms, secondary, simplicial

__all__ = ["chain_core", "chern_weil", "derham", "exact_linalg", "poly_forms", "secondary", "simplicial"]
__version__ = "0.1.0"
