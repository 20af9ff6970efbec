"""Sphere representations of matroids.

Build the lattice of flats of a matroid, fix a complete flag, and construct
the family of simplicial complexes representing every flat, together with
exact combinatorial certificates: nerve isomorphism with cross-polytopes,
reduced integer homology, the intersection law, recovery of the matroid
from the arrangement, the covector-poset embedding for realizable oriented
matroids, change-of-flag retractions, and weak-map obstructions.
"""

from .lattice import (
    Flag,
    GeometricLattice,
    MatroidInputError,
    all_complete_flags,
    boolean_matroid,
    default_flag,
    flag_restrict,
    lattice_from_flats,
    linear_matroid,
    load_matroid,
    make_flag,
    uniform_matroid,
    verify_geometric,
)
from .maps import (
    WeakMapReport,
    is_weak_map_covectors,
    is_weak_map_matroid,
    poset_map_search,
    retraction_map,
    select_cross_coatoms,
    verify_retraction,
)
from .oriented import (
    CovectorSet,
    Embedding,
    VectorConfig,
    build_covers,
    build_embedding,
    cocircuits_from_vectors,
    covector_flat,
    covector_span,
    covectors_from_vectors,
    pivots_check,
    underlying_matroid,
    vector_config,
    verify_embedding,
)
from .report import ValidationReport
from .spheres import (
    FlagRepresentation,
    HomotopyArrangement,
    RepComplex,
    arrangement_flats,
    roundtrip_isomorphic,
    verify_arrangement,
)
from .topology import (
    CoverFamily,
    HomologyProfile,
    Poset,
    SimplicialComplex,
    all_faces,
    carrier_check,
    cross_polytope_boundary,
    cross_polytope_nerve_iso,
    dimension,
    is_homology_point,
    is_homology_sphere,
    nerve,
    order_complex,
    order_homotopy_image,
    quillen_fibers_check,
    reduced_homology,
    simplex_boundary,
    sphere_profile,
    z2_free_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
