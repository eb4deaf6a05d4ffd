"""Verification engine for special partial matchings on finite posets and
the Bruhat combinatorics of signed involutions."""

from .poset import (
    CycleDetected,
    IndexOutOfRange,
    MissingBound,
    NotAutomorphism,
    NotComparable,
    Poset,
    Relation,
    build_poset,
    poset_from_json,
)
from .matchings import (
    MatchingVerdict,
    MissingTop,
    NotAnSpm,
    Violation,
    check_lifting,
    check_special_matching,
    check_spm,
    classify,
    enumerate_spms,
    search_spm,
)
from .fixed_points import (
    ClaimViolation,
    ConjugatedFamily,
    ExtremeNotUnique,
    InducedSpm,
    OrbitRecord,
    all_orbits,
    conjugated_spms,
    induced_spm,
    orbit,
    verify_fixed_pircon,
)
from .signed_perms import (
    FullPermutation,
    PermStats,
    SignedPermutation,
    SizeMismatch,
    bruhat_leq,
    build_bruhat_poset,
    conjugate_by_longest,
    dominance_count,
    generate_family,
    longest_element,
    minimal_fpf_involution,
    stats,
)
from .covers import (
    CoverRecord,
    EdgeLabel,
    EqualInputs,
    NoCandidate,
    cover_type,
    covering_index,
    covering_index_signed_candidate,
    difference_index,
    family_covers,
    minimal_cover,
)
from .shellability import (
    EdgeLabelling,
    classify_chain,
    decreasing_chain,
    fpf_closure_check,
    verify_el_interval,
    verify_el_poset,
)
from .topology import (
    HomologySignature,
    SimplicialComplex,
    ball_sphere_signature,
    euler_characteristic,
    expected_dimension,
    homology_z2,
    make_complex,
    order_complex,
    verify_shelling,
)

__version__ = "0.1.0"
