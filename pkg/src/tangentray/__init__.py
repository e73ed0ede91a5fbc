"""Numerics for tangent-ray diffraction: the Pekeris caret function and the
leading-order field near a tangency point in high-frequency scattering by a
smooth convex obstacle.

The Airy evaluator itself lives in the ``airy`` submodule
(``tangentray.airy.airy``); the package namespace keeps the submodule.
"""

from . import airy as _airy_mod
from .airy import (AiryValue, RobinRoot, ai_prime_zero, ai_zero,
                   airy_asymptotic, airy_maclaurin, robin_root, rotated)
from .contours import ContourPath, DecayModel, named_contour, truncate
from .fock import (FieldValue, FockPoint, ProblemConfig, boundary_residual,
                   pwe_residual, scattered_forked, scattered_new, total_gamma,
                   total_new)
from .matching import (OuterPoint, PenumbraPoint, creeping_inner, fresnel,
                       i_sigma, i_sigma_remainder, penumbra_field,
                       pole_gaussian_identity, reflected_outer, transition_g,
                       transition_g_tilde)
from .pekeris import (DIRICHLET, NEUMANN, BoundaryKind, CaretEval,
                      caret_lit_asymptotic, caret_shadow_asymptotic,
                      pekeris_caret, pekeris_entire, robin)
from .quadrature import QuadOptions, QuadResult, QuadratureError, integrate

__all__ = [
    "AiryValue", "RobinRoot", "ai_prime_zero", "ai_zero",
    "airy_asymptotic", "airy_maclaurin", "robin_root", "rotated",
    "ContourPath", "DecayModel", "named_contour", "truncate",
    "FieldValue", "FockPoint", "ProblemConfig", "boundary_residual",
    "pwe_residual", "scattered_forked", "scattered_new", "total_gamma",
    "total_new",
    "OuterPoint", "PenumbraPoint", "creeping_inner", "fresnel", "i_sigma",
    "i_sigma_remainder", "penumbra_field", "pole_gaussian_identity",
    "reflected_outer", "transition_g", "transition_g_tilde",
    "DIRICHLET", "NEUMANN", "BoundaryKind", "CaretEval",
    "caret_lit_asymptotic", "caret_shadow_asymptotic", "pekeris_caret",
    "pekeris_entire", "robin",
    "QuadOptions", "QuadResult", "QuadratureError", "integrate",
]

__version__ = "0.1.0"
