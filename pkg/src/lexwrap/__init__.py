"""Delaunay filtrations, Wrap complexes and lexicographically minimal cycles."""

from .complex import (
    Chain,
    ElementwiseFiltration,
    LexComparison,
    SimplicialComplex,
    boundary_chain,
    build_complex,
    chain_pivot,
    elementwise_filtration,
    lex_compare_chains,
)
from .flow import (
    FlowContext,
    apply_F,
    flow_once,
    gradient_flow_reduction,
    lex_minimal_cycle,
    stabilized_flow,
    stabilized_flow_reduction,
)
from .geometry import (
    GeneralPositionError,
    PointCloud,
    cech_radius_values,
    circumsphere,
    delaunay_complex,
    delaunay_radius_values,
    min_enclosing_ball,
)
from .morse import (
    DiscretePairing,
    GradientPartition,
    NotMorseError,
    apparent_pairs,
    descending_complex,
    gradient_partition,
    minimal_vertex_refinement,
    wrap_complex,
    zero_persistence_apparent_pairs,
)
from .pipeline import ReconstructionReport, export, load_points, reconstruct, verify_theorems
from .reduction import (
    AlgebraicGradient,
    ReductionResult,
    SparseColumnMatrix,
    compatibility_checks,
    decomposition_gradient,
    exhaustive_reduce,
    filtration_boundary_matrix,
    persistence_pairs_and_barcode,
    reduction_gradient,
    standard_reduce,
)

_ESTIMATORS = ("DelaunayPersistence", "WrapCycleReconstructor")

__all__ = [name for name in dir() if not name.startswith("_")] + list(_ESTIMATORS)


def __getattr__(name):
    # scikit-learn is slow to import; load the wrappers on first use
    if name in _ESTIMATORS:
        from . import estimators

        return getattr(estimators, name)
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")
