"""
Riemann theta functions, integer symplectic reduction and the theta
splitting checks for the genus-2 Lamé and Halphen curves.
"""

from .reduction import (
    ReductionCertificate,
    ReductionCheck,
    decomposition_breadth,
    genus2_certificate,
    genus3_reduction_chain,
    verify_genus2_reduction,
    verify_transformation_formula,
    weights_from_periods,
)
from .riemann import SiegelMatrix, ThetaChar, genus1_theta, jacobi_thetas, theta, truncation_radius
from .symplectic import IntSymplectic, StandardForm, hopf_number, pi_relation, standard_form, transform_tau

__all__ = [
    "IntSymplectic",
    "ReductionCertificate",
    "ReductionCheck",
    "SiegelMatrix",
    "StandardForm",
    "ThetaChar",
    "decomposition_breadth",
    "genus1_theta",
    "genus2_certificate",
    "genus3_reduction_chain",
    "hopf_number",
    "jacobi_thetas",
    "pi_relation",
    "standard_form",
    "theta",
    "transform_tau",
    "truncation_radius",
    "verify_genus2_reduction",
    "verify_transformation_formula",
    "weights_from_periods",
]
