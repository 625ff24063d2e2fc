"""Exact exterior algebra, orbit invariants, and classification over Q.

The building blocks are Form and Polyvector (sparse alternating tensors with
rational coefficients), LinMap group elements, and a reference VolumeForm.
On top of those sit the orbit invariants (rank, stabilizer, length and sign,
stability) and the classifier with its catalog of canonical forms.  The
`formlab` console script exposes the same machinery on JSON documents.
"""

from .classify import (
    CatalogEntry,
    Fingerprint,
    OrbitReport,
    catalog_entries,
    classify,
    classify_codim_two,
    classify_two_form,
    fingerprint,
    killing_signature,
    match_catalog,
    rank_profile,
    sample_orbit_statistics,
)
from .exterior import (
    DegreeError,
    DimensionMismatch,
    Form,
    FormError,
    InnerProduct,
    LinMap,
    MultiIndex,
    OrientationError,
    Polyvector,
    Rat,
    SingularMatrix,
    VolumeForm,
    act,
    act_vectors,
    interior,
    multi_interior,
    musical,
    musical_inv,
    poincare,
    poincare_inv,
    pullback,
    twisted_act,
    wedge,
)
from .invariants import (
    LengthSign,
    NilpotencyWitness,
    Reduction,
    StabAlgebra,
    infinitesimal_act,
    is_multisymplectic,
    is_stable,
    kernel_vectors,
    length_and_sign,
    nilpotency_witness_degenerate,
    orbit_dimension,
    orientation_reversing_stabilizer_witness,
    rank,
    reduce_form,
    stabilizer_algebra,
)

# reduce_form avoids shadowing the builtin; the short name stays available
# for callers who want the conventional spelling.
reduce = reduce_form

__version__ = "0.1.0"

__all__ = [
    "Rat",
    "MultiIndex",
    "FormError",
    "DimensionMismatch",
    "DegreeError",
    "SingularMatrix",
    "OrientationError",
    "Form",
    "Polyvector",
    "LinMap",
    "VolumeForm",
    "InnerProduct",
    "wedge",
    "interior",
    "multi_interior",
    "act",
    "pullback",
    "act_vectors",
    "twisted_act",
    "poincare",
    "poincare_inv",
    "musical",
    "musical_inv",
    "rank",
    "kernel_vectors",
    "is_multisymplectic",
    "Reduction",
    "reduce",
    "reduce_form",
    "infinitesimal_act",
    "StabAlgebra",
    "stabilizer_algebra",
    "orbit_dimension",
    "is_stable",
    "LengthSign",
    "length_and_sign",
    "NilpotencyWitness",
    "nilpotency_witness_degenerate",
    "orientation_reversing_stabilizer_witness",
    "Fingerprint",
    "rank_profile",
    "killing_signature",
    "fingerprint",
    "CatalogEntry",
    "catalog_entries",
    "match_catalog",
    "OrbitReport",
    "classify_two_form",
    "classify_codim_two",
    "classify",
    "sample_orbit_statistics",
    "__version__",
]
