"""Exact generalized persistence modules over finite prosets: translations,
sublinear projections and superlinear families, interleaving distances with
certificates, inverse-image filtrations and vector persistence."""
from __future__ import annotations

from .complexes import SimplicialComplex, betti, homology_basis
from .interleave import (
    DEFAULT_GUARD,
    Barcode,
    DistanceResult,
    GuardExceeded,
    InterleavingCertificate,
    barcode_1d,
    bottleneck,
    compose_certificates,
    distance_bruteforce,
    distance_family,
    exists_interleaving,
    pushforward_certificate,
    verify_certificate,
    weaken_certificate,
)
from .invimage import (
    SubsetFamily,
    VertexFunction,
    arc_family,
    dinfty,
    full_family,
    interval_family,
    inv_image_module,
    offset_family,
    quadrant_family,
    stability_suite,
    sublevelset_family,
)
from .metrics import (
    INF,
    LawvereMetric,
    LawvereProjection,
    SuperlinearFamily,
    adjoint_check,
    check_superlinear,
    family_from_omega,
    omega_from_family,
    shift_family,
)
from .pmod import (
    FinSet,
    FinSimp,
    FinVect,
    FinVectOp,
    NaturalTransformation,
    PersistenceModule,
    Thin,
    apply_functor,
    functor_from_tag,
    interval_module,
    make_module,
    merge_tree,
    validate_module,
)
from .proset import Proset, chain, grid_proset, make_proset
from .translations import Translation, enumerate_translations, maximal
from .vecpers import UpSet, componentwise_norm, d_a, d_set, delta_ab, vector_shift

__version__ = "0.1.0"

__all__ = [
    "SimplicialComplex",
    "betti",
    "homology_basis",
    "DEFAULT_GUARD",
    "Barcode",
    "DistanceResult",
    "GuardExceeded",
    "InterleavingCertificate",
    "barcode_1d",
    "bottleneck",
    "compose_certificates",
    "distance_bruteforce",
    "distance_family",
    "exists_interleaving",
    "pushforward_certificate",
    "verify_certificate",
    "weaken_certificate",
    "SubsetFamily",
    "VertexFunction",
    "arc_family",
    "dinfty",
    "full_family",
    "interval_family",
    "inv_image_module",
    "offset_family",
    "quadrant_family",
    "stability_suite",
    "sublevelset_family",
    "INF",
    "LawvereMetric",
    "LawvereProjection",
    "SuperlinearFamily",
    "adjoint_check",
    "check_superlinear",
    "family_from_omega",
    "omega_from_family",
    "shift_family",
    "FinSet",
    "FinSimp",
    "FinVect",
    "FinVectOp",
    "NaturalTransformation",
    "PersistenceModule",
    "Thin",
    "apply_functor",
    "functor_from_tag",
    "interval_module",
    "make_module",
    "merge_tree",
    "validate_module",
    "Proset",
    "chain",
    "grid_proset",
    "make_proset",
    "Translation",
    "enumerate_translations",
    "maximal",
    "UpSet",
    "componentwise_norm",
    "d_a",
    "d_set",
    "delta_ab",
    "vector_shift",
]
