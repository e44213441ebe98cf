"""Exact (co)homology of finite categories with natural-system coefficients."""
from .errors import CatCohomError
from .exactalg import F2, INT, RAT, GroupPresentation, Matrix, Ring, modp
from .fincat import FinCat, FinFunctor
from .natsys import Bimodule, Module, NaturalSystem

__all__ = [
    "CatCohomError",
    "F2",
    "INT",
    "RAT",
    "GroupPresentation",
    "Matrix",
    "Ring",
    "modp",
    "FinCat",
    "FinFunctor",
    "Bimodule",
    "Module",
    "NaturalSystem",
]
__version__ = "0.1.0"
