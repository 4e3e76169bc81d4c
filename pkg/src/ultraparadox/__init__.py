"""Exact paradoxical decompositions over non-Archimedean valued fields."""

__version__ = "0.1.0"

from .valued_fields import (  # noqa: E402
    FieldError,
    Magnitude,
    RationalFunctions,
    RationalsPadic,
    Trivial,
    ZERO,
    arith,
    magnitude,
    mag_compare,
    make_field,
    parse_field,
)
from .words import Word, canonical_class, enumerate_reduced, prefix_letter, reduce_concat, to_syllables  # noqa: E402
from .trace_poly import TriPoly, phi, poly_eval, psi_magnitude, verify_fricke  # noqa: E402
from .matrices import (  # noqa: E402
    AffineMap,
    GroupSpec,
    Mat,
    affinize,
    embed,
    fixed_points,
    group_membership,
    isometry_audit,
    magnus,
    magnus_eps_pair,
    mat_arith,
    rho,
    transcendental_pair,
)

__all__ = [
    "AffineMap", "FieldError", "GroupSpec", "Magnitude", "Mat", "RationalFunctions",
    "RationalsPadic", "TriPoly", "Trivial", "Word", "ZERO", "affinize", "arith",
    "canonical_class", "embed", "enumerate_reduced", "fixed_points", "group_membership",
    "isometry_audit", "mag_compare", "magnitude", "magnus", "magnus_eps_pair", "make_field",
    "mat_arith", "parse_field", "phi", "poly_eval", "prefix_letter", "psi_magnitude",
    "reduce_concat", "rho", "to_syllables", "transcendental_pair", "verify_fricke",
]
