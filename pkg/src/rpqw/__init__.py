"""Exact verification of deformed W_(1+infinity) algebra identities and matrix-model constraints."""

from .deform import Deformation, classical_limit, deformed_number, make_deformation

__all__ = ["Deformation", "classical_limit", "deformed_number", "make_deformation"]
__version__ = "0.1.0"
