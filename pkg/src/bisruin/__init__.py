"""Ruin probabilities for the two-season discrete-time risk model with
dependent claim pairs."""

from .engine import (
    ModelClass,
    RuinTable,
    ab_sequences,
    classify,
    phi0_estimate,
    ruin_table,
    survival_table,
    verify_identities,
)
from .errors import (
    ConfigError,
    InfiniteMeanError,
    ModelClassError,
    ParameterError,
    PrecisionError,
)
from .joint import (
    UNDEFINED,
    BivariatePoisson,
    Clayton,
    Explicit,
    JointMatrix,
    Product,
    build_joint,
    pearson_correlation,
)
from .marginal import Finite, MarginalDist, Poisson, ShiftedZeta, riemann_zeta

__version__ = "0.1.0"

__all__ = [
    "ModelClass",
    "RuinTable",
    "ab_sequences",
    "classify",
    "phi0_estimate",
    "ruin_table",
    "survival_table",
    "verify_identities",
    "ConfigError",
    "InfiniteMeanError",
    "ModelClassError",
    "ParameterError",
    "PrecisionError",
    "UNDEFINED",
    "BivariatePoisson",
    "Clayton",
    "Explicit",
    "JointMatrix",
    "Product",
    "build_joint",
    "pearson_correlation",
    "Finite",
    "MarginalDist",
    "Poisson",
    "ShiftedZeta",
    "riemann_zeta",
]
