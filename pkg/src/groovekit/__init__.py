"""Self-similar solutions of y_t + B y_xxxx = 0: basis functions, transform
routes, a finite-difference oracle and groove-profile fitting."""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .basis import SimilarityCoefficients, z, z_derivative
from .errors import GrooveKitError
from .fitting import (
    FitConfig, FitResult, GrooveProfile, compare_models, fit_linear, fit_with_B, load_profile,
)
from .solutions import (
    DecayBasisWeights, PhysicalParams, TwoSidedSolution, amram_solution, evaluate,
    groove_depth, mullins_solution, y, y_derivative,
)

__all__ = [
    "BACKEND", "SimilarityCoefficients", "z", "z_derivative", "GrooveKitError",
    "FitConfig", "FitResult", "GrooveProfile", "compare_models", "fit_linear",
    "fit_with_B", "load_profile", "DecayBasisWeights", "PhysicalParams",
    "TwoSidedSolution", "amram_solution", "evaluate", "groove_depth",
    "mullins_solution", "y", "y_derivative", "__version__",
]
