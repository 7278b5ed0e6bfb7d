"""Finite-dimensional certification of Hilbert quasi *-algebras: modular
theory, standardness and the GNS construction for positive forms."""

from ._tolerances import DEFAULT_TOL, Tolerances
from ._version import __version__
from .algebra import (AlgebraSpec, InconsistentSpecError, check_banach_conditions,
                      flat_structure, left_mult, multiply, norm, right_mult, sharp_norm,
                      validate_spec)
from .diagnostics import Check, CheckList
from .gns import FormSpec, GnsResult, check_form, gns_construct, verify_homomorphism
from .hcq import (NotCyclicError, NotHCQError, NotSeparatingError, check_hcq,
                  gen_commutative, gen_from_cyclic_vector, gen_matrix_state, hcq_to_strict)
from .io import SpecParseError, SpecValidationError, parse_algebra, parse_form
from .linalg import AntilinearMap, gram_opnorm, polar_antilinear
from .modular import (check_left_hilbert, commutant, extension_check, modular_data,
                      quasi_unit, remark_probe, standardness, tomita_check, tomita_flow)

__all__ = [
    "AlgebraSpec", "AntilinearMap", "Check", "CheckList", "DEFAULT_TOL", "FormSpec",
    "GnsResult", "InconsistentSpecError", "NotCyclicError", "NotHCQError",
    "NotSeparatingError", "SpecParseError", "SpecValidationError", "Tolerances",
    "__version__", "check_banach_conditions", "check_form", "check_hcq",
    "check_left_hilbert", "commutant", "extension_check", "flat_structure",
    "gen_commutative", "gen_from_cyclic_vector", "gen_matrix_state", "gns_construct",
    "gram_opnorm", "hcq_to_strict", "left_mult", "modular_data", "multiply", "norm",
    "parse_algebra", "parse_form", "polar_antilinear", "quasi_unit", "remark_probe",
    "right_mult", "sharp_norm", "standardness", "tomita_check", "tomita_flow",
    "validate_spec", "verify_homomorphism",
]
