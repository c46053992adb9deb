"""Exact enumeration and structure of homomorphisms from the Hamming cube to the integers."""

from .config import DEFAULT, Config
from .cube import Cube
from .dyadic import DyadicSum
from .errors import (
    BudgetExceeded,
    CubeError,
    DimensionMismatch,
    InvalidHeightFunction,
    PreconditionError,
)
from .homomorphism import HeightFunction, RankFunction, ThreeColoring

__all__ = [
    "BudgetExceeded",
    "Config",
    "Cube",
    "CubeError",
    "DEFAULT",
    "DimensionMismatch",
    "DyadicSum",
    "HeightFunction",
    "InvalidHeightFunction",
    "PreconditionError",
    "RankFunction",
    "ThreeColoring",
]
