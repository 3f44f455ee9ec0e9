"""Eigenvalue perturbation bounds for matrices and matrix polynomials, checked numerically."""
from .bounds import BOUNDS, BoundReport, elsner_constant, pokrzywa_gamma, run_check
from .campaign import CampaignConfig, run_campaign
from .errors import (
    BadInterval,
    ConvergenceFailure,
    HypothesisViolation,
    NotMonic,
    OracleSizeExceeded,
    OrderTooSmall,
    PolyspecError,
    SingularLeadingCoefficient,
    SingularMatrix,
    SizeMismatch,
    UnsupportedPNorm,
)
from .genlab import GenSpec, generate
from .linalg import determinant, eigenvalues, inverse, lu_decompose, matrix_p_norm, operator_p_norm
from .matching import MatchingResult, matching_distance
from .matpoly import MatrixPolynomial, companion, monicize, polynomial_spectrum

__version__ = "0.1.0"
