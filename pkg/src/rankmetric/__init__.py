"""Rank-metric codes as linearized q-polynomials over finite field towers.

Construction of the known F_{q^n}-linear MRD families, rank statistics,
Delsarte duality, idealisers, and the distinguishers (h invariant,
Gabidulin index, constructive equivalence tests).
"""

from .codes import DEFAULT_BUDGET, MrdResult, RankDistribution, RdCode, \
    gaussian_binomial, random_code
from .errors import RankMetricError
from .gf import FieldContext, FieldElement, build_context
from .linpoly import LinearizedPoly, poly_from_images, random_poly

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_BUDGET", "FieldContext", "FieldElement", "LinearizedPoly",
    "MrdResult", "RankDistribution", "RankMetricError", "RdCode",
    "build_context", "gaussian_binomial", "poly_from_images",
    "random_code", "random_poly",
]
