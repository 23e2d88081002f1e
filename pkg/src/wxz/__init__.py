"""Exact tools for the constant WXZ Yang-Baxter system in dimension two."""

from .scalar import Scalar
from .tensor import SquareMatrix, WXZTriple, wxz_residual, yb_commutator

__version__ = "0.1.0"

__all__ = ["Scalar", "SquareMatrix", "WXZTriple", "wxz_residual", "yb_commutator", "__version__"]
