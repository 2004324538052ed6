"""rplab: a numerical laboratory for Gaussian lattice fields whose covariance
may be complex.

The package builds exact covariance matrices for translation-invariant
multipliers on reflection-symmetric lattices, checks site-reflection
positivity in either operator ordering, evaluates Gaussian and charged
moments, periodizes kernels onto circles, extracts transfer operators and
sector Hamiltonians, and computes normalization/splitting diagnostics for
complex Gaussian weights.
"""

from .charged import ChargedField, doubled_matrix, permanent
from .compactify import CompactifyResult, compactify
from .errors import (
    GridMismatch,
    HamiltonianUndefined,
    HermitianPartNotPositive,
    NoDecay,
    NoSpatialAxis,
    NotACovariance,
    OracleTooLarge,
    RPLabError,
    SupportError,
    ZeroSpace,
)
from .gaussian import GaussianField, random_positive_half
from .grid import CIRCLE, LINE, Axis, Grid
from .multiplier import (
    DriftFreeField,
    ExplicitSymbol,
    FreeField,
    LatticeFreeField,
    Multiplier,
    PowerCovariance,
    covariance_matrix,
    kernel_table,
    symbol_reflection_defect,
)
from .quantize import ModeRecord, QuantizationResult, quantize
from .rp_check import RPReport, compress, reflection_defect, rp_check, symmetry_defect

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "CIRCLE",
    "ChargedField",
    "CompactifyResult",
    "DriftFreeField",
    "ExplicitSymbol",
    "FreeField",
    "GaussianField",
    "Grid",
    "GridMismatch",
    "HamiltonianUndefined",
    "HermitianPartNotPositive",
    "LINE",
    "LatticeFreeField",
    "ModeRecord",
    "Multiplier",
    "NoDecay",
    "NoSpatialAxis",
    "NotACovariance",
    "OracleTooLarge",
    "PowerCovariance",
    "QuantizationResult",
    "RPLabError",
    "RPReport",
    "SupportError",
    "ZeroSpace",
    "compactify",
    "compress",
    "covariance_matrix",
    "doubled_matrix",
    "kernel_table",
    "permanent",
    "quantize",
    "random_positive_half",
    "reflection_defect",
    "rp_check",
    "symbol_reflection_defect",
    "symmetry_defect",
]
