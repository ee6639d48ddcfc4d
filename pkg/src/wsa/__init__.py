"""Construction and verification of weighted surface algebras over exact fields."""

from .algebra import AlgebraElement, QuotientAlgebra, SymmetrizingForm, TruncationUnstable, build_algebra
from .document import QuiverDocument, parse_document, parse_quiver
from .field import FieldSpec, Subspace
from .homology import check_period4, detect_singular, projective, resolve, simple
from .presentation import (
    AssumptionViolated,
    WeightedPresentation,
    generate_relations,
    generic_parameters,
    opposite,
)
from .quiver import (
    FCubeNotIdentity,
    FNotPermutation,
    FTargetMismatch,
    MalformedQuiver,
    NotConnected,
    NotTwoRegular,
    QuiverError,
    TriangulationQuiver,
    catalog,
    generate_glued,
    make_triangulation_quiver,
)
from .verify import VerificationReport, verify_all

__all__ = [
    "AlgebraElement", "AssumptionViolated", "FCubeNotIdentity", "FNotPermutation", "FTargetMismatch",
    "FieldSpec", "MalformedQuiver", "NotConnected", "NotTwoRegular", "QuiverDocument", "QuiverError",
    "QuotientAlgebra", "Subspace", "SymmetrizingForm", "TriangulationQuiver", "TruncationUnstable",
    "VerificationReport", "WeightedPresentation", "build_algebra", "catalog", "check_period4",
    "detect_singular", "generate_glued", "generate_relations", "generic_parameters",
    "make_triangulation_quiver", "opposite", "parse_document", "parse_quiver", "projective",
    "resolve", "simple", "verify_all",
]
