"""Exact finite-level models of Hecke pairs realized as semigroup crossed
products: residue towers, group algebras, covariant representations and
their unitary dilations, the crossed-product corner with its induction and
restriction-compression functors, and adelic duality pairings.

Everything that is rational on paper is computed with exact rationals;
Hilbert-space checks use floats with a configurable tolerance.
"""

from .errors import (
    ConfigError,
    HeckeLabError,
    LevelCapError,
    NotInCornerError,
    PrecisionError,
)
from .pairs import (
    BostConnesFamily,
    MatrixFamily,
    PadicFamily,
    PairFamily,
    SemidirectElement,
    family_from_config,
)

__version__ = "0.1.0"

__all__ = [
    "BostConnesFamily",
    "ConfigError",
    "HeckeLabError",
    "LevelCapError",
    "MatrixFamily",
    "NotInCornerError",
    "PadicFamily",
    "PairFamily",
    "PrecisionError",
    "SemidirectElement",
    "family_from_config",
    "__version__",
]
