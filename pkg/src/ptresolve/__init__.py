"""Relation-induced predicate transformers on finite powersets.

Resolutions of interior and closure operators through an interpolant,
minimal bases of fixpoint lattices, and factorizations of monotone
transformers, each checked pointwise.
"""
from .kernels import BACKEND
from .optable import (
    ClassReport,
    OperatorTable,
    apply,
    classify,
    compose,
    dual,
    equal,
    identity,
    kleisli_le,
    materialize,
    operator_from_family,
    random_operator,
    threshold_operator,
)
from .relalg import (
    GaloisReport,
    Relation,
    check_galois,
    check_negation_laws,
    complement_rel,
    converse,
    extract_relation,
    transform,
)
from .resolve import (
    Factorization,
    FixLattice,
    Resolution,
    basis_from_resolution,
    factorize_monotone,
    fixpoints,
    is_basis,
    minimal_basis,
    resolve_closure,
    resolve_interior,
    verify_resolution,
)
from .setcore import SubsetFamily, SubsetMask, Universe, family_saturate, mask_of, mk_universe

__all__ = [
    "BACKEND",
    "Universe", "SubsetMask", "SubsetFamily", "mk_universe", "mask_of", "family_saturate",
    "Relation", "GaloisReport", "converse", "complement_rel", "transform",
    "check_negation_laws", "check_galois", "extract_relation",
    "OperatorTable", "ClassReport", "materialize", "apply", "classify", "dual", "equal", "compose",
    "identity", "operator_from_family", "random_operator", "threshold_operator", "kleisli_le",
    "FixLattice", "Resolution", "Factorization", "fixpoints", "minimal_basis", "is_basis",
    "resolve_interior", "resolve_closure", "verify_resolution", "basis_from_resolution",
    "factorize_monotone",
]
