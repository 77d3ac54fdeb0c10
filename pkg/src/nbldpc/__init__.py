"""Erasure-channel analysis of nonbinary LDPC ensembles and coupled chains.

BP messages over the binary erasure channel collapse to subspaces of
GF(2)^m, so density evolution tracks a probability vector over the message
dimension.  This package computes those fixed points, the decoding
thresholds they imply, exact extrinsic transfer curves, area-rule MAP
bounds, and the saturation behavior of terminated coupled chains.
"""

from .coupled import (
    ChainState,
    CoupledChain,
    ScFixedPoint,
    build_chain,
    design_rate,
    sc_bp_threshold,
    sc_de_fixed_point,
    sc_exit_curve,
    sc_map_bound,
)
from .de import (
    DeFixedPoint,
    DeOptions,
    EnsembleSpec,
    bp_threshold,
    check_update,
    de_fixed_point,
    variable_update,
)
from .exitchart import (
    ExitCurve,
    ExitWeightTable,
    MapBoundError,
    bp_exit_curve,
    bp_exit_point,
    exit_weight_table,
    extrinsic_distribution,
    map_bound,
    subspace_bit_erasure,
)
from .gf2 import Gf2Matrix, SubspaceCatalog, enumerate_subspaces, gaussian_binomial
from .transfer import (
    DimDistribution,
    NormalizationError,
    TransferTensor,
    channel_distribution,
    check_coefficients,
    check_convolve,
    variable_coefficients,
    variable_convolve,
)

__all__ = [
    "ChainState", "CoupledChain", "ScFixedPoint", "build_chain", "design_rate",
    "sc_bp_threshold", "sc_de_fixed_point", "sc_exit_curve", "sc_map_bound",
    "DeFixedPoint", "DeOptions", "EnsembleSpec", "bp_threshold", "check_update",
    "de_fixed_point", "variable_update",
    "ExitCurve", "ExitWeightTable", "MapBoundError", "bp_exit_curve",
    "bp_exit_point", "exit_weight_table", "extrinsic_distribution", "map_bound",
    "subspace_bit_erasure",
    "Gf2Matrix", "SubspaceCatalog", "enumerate_subspaces", "gaussian_binomial",
    "DimDistribution", "NormalizationError", "TransferTensor",
    "channel_distribution", "check_coefficients", "check_convolve",
    "variable_coefficients", "variable_convolve",
]
