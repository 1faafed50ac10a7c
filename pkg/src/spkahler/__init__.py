"""Exact special Kähler Lie algebras over the rationals.

Structures are stored as rational structure tensors; every axiom is checked
by exact arithmetic.  See :mod:`spkahler.constructions` for the cotangent,
twisted-product and double-extension constructions and their inverses.
"""
__version__ = "0.1.0"

from .errors import SpecialKahlerError
from .exact_linalg import Matrix, Tensor3
from .special_kahler import (
    SpecialKahlerAlgebra,
    Subspace,
    VerificationReport,
    is_flat_special,
    is_geodesically_complete,
    model,
    signature,
    verify_full,
)
from .constructions import (
    DoubleExtensionInput,
    RepresentationPair,
    check_twist_conditions,
    cotangent_hess,
    derivation_space,
    double_extension,
    reduce_by_line,
    sp_commutant_space,
    split_by_ideal,
    twisted_product,
)
from .representations import AffineRepData, KahlerVectorSpace, algebra_from_etale, etale_from_algebra

__all__ = [
    "__version__",
    "SpecialKahlerError", "Matrix", "Tensor3",
    "SpecialKahlerAlgebra", "Subspace", "VerificationReport", "verify_full", "signature",
    "is_flat_special", "is_geodesically_complete", "model",
    "DoubleExtensionInput", "RepresentationPair", "check_twist_conditions", "cotangent_hess",
    "derivation_space", "double_extension", "reduce_by_line", "sp_commutant_space",
    "split_by_ideal", "twisted_product",
    "AffineRepData", "KahlerVectorSpace", "algebra_from_etale", "etale_from_algebra",
]
