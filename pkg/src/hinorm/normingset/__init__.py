"""The norming set W: parameter profiles, the coding function, functional
trees, their validation, and the universal-basis model."""
from .coding import CodingTable, prefix_key, sigma
from .functionals import (AlphaAvg, BetaAvg, ConvexComb, SpecialSequence, TypeIAlpha,
                          TypeIBeta, TypeIIMinus, TypeIIPlus, Unit, Zero, branch_action,
                          dumps, evaluate, loads, negate, restrict, separates, walk,
                          weight, weight_set)
from .profile import ParameterProfile, make_profile
from .ubasis import UBasisModel, u_dual_norm, u_dual_solve, u_norm, u_norming_functional
from .validate import is_valid, validate_functional

__all__ = [
    "AlphaAvg", "BetaAvg", "CodingTable", "ConvexComb", "ParameterProfile",
    "SpecialSequence", "TypeIAlpha", "TypeIBeta", "TypeIIMinus", "TypeIIPlus",
    "UBasisModel", "Unit", "Zero", "branch_action", "dumps", "evaluate", "is_valid",
    "loads", "make_profile", "negate", "prefix_key", "restrict", "separates", "sigma",
    "u_dual_norm", "u_dual_solve", "u_norm", "u_norming_functional", "validate_functional",
    "walk", "weight", "weight_set",
]
