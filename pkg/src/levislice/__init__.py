"""Levi-form pseudoconvexity analysis of domains in C^n.

Any failure of pseudoconvexity of an open set {rho < 0} is witnessed by a
two-dimensional affine slice: this package evaluates the Levi form on
sampled boundary points via forward-mode Wirtinger jets, constructs the
witness slice and the local quadratic witness at a bad boundary point, and
verifies the whole chain numerically.
"""

__version__ = "0.1.0"

from .expr import (Ast, WirtingerJet, check_real_valued, compose_with_affine,
                   eval_jet, eval_jet_batch, eval_raw, parse, to_string)
from .hormander import (QuadraticWitness, VerificationRecord,
                        build_quadratic_witness, eval_quadratic,
                        quadratic_as_expression, verify_quadratic_witness)
from .levi import (Domain, LeviProbe, LeviReport, Tolerances, classify,
                   levi_form_at, make_domain, project_to_boundary,
                   restricted_levi_min, sample_boundary, square_box)
from .linalg import (HermitianMatrix, gram_solve_2, hermitian_eig,
                     hermitian_eig_min, tangent_null_basis)
from .slicing import (Slice, WitnessCertificate, make_slice, phi, phi_inv,
                      pullback_jet, slice_gradient_check, witness_slice)

__all__ = [
    "Ast", "WirtingerJet", "parse", "to_string", "eval_jet", "eval_jet_batch",
    "eval_raw", "check_real_valued", "compose_with_affine",
    "HermitianMatrix", "hermitian_eig", "hermitian_eig_min",
    "tangent_null_basis", "gram_solve_2",
    "Domain", "Tolerances", "LeviProbe", "LeviReport", "make_domain",
    "square_box", "project_to_boundary", "sample_boundary", "levi_form_at",
    "restricted_levi_min", "classify",
    "Slice", "WitnessCertificate", "make_slice", "phi", "phi_inv",
    "pullback_jet", "slice_gradient_check", "witness_slice",
    "QuadraticWitness", "VerificationRecord", "build_quadratic_witness",
    "eval_quadratic", "verify_quadratic_witness", "quadratic_as_expression",
    "__version__",
]
