"""Branching coefficients of integrable highest-weight modules via fans of injections."""

from .algebras import (AlgebraSpec, build_affine, build_finite, classical_weyl_orbit,
                       expand_denominator, parse_algebra, singular_weights)
from .branching import (AnomalousTable, BranchingResult, anomalous_coefficients,
                        anomalous_coefficients_star, branch, branching_functions,
                        extract_branching, weight_multiplicities)
from .injections import Fan, InjectionSpec, build_fan, compute_phi, preset, project
from .lattice import GramForm, SignedSeries, Weight

__version__ = "0.1.0"

__all__ = [
    "AlgebraSpec", "AnomalousTable", "BranchingResult", "Fan", "GramForm", "InjectionSpec",
    "SignedSeries", "Weight", "anomalous_coefficients", "anomalous_coefficients_star", "branch",
    "branching_functions", "build_affine", "build_finite", "build_fan", "classical_weyl_orbit",
    "compute_phi", "expand_denominator", "extract_branching", "parse_algebra", "preset",
    "project", "singular_weights", "weight_multiplicities",
]
