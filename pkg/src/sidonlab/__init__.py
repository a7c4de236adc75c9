"""Dense B2 (Sidon) sets: constructions, verification and residue-class uniformity."""

from .constructions import ConstructionOutput, bose_chowla, construct, erdos_turan, mian_chowla, singer
from .core import (
    B2Set,
    DeviationStats,
    DifferenceCorrelation,
    ResidueProfile,
    deviation,
    difference_correlation,
    make_b2_set,
    residue_profile,
)
from .cosine import CosinePolynomial, cosine_from_b2, evaluate_grid, minimize, mod_filter, cosine_min_probe
from .residue import analyze_set, proof_trace, uniformity_bound
from .verify import B2Verdict, difference_multiset, verify_b2, verify_b2_by_differences

__version__ = "0.1.0"
