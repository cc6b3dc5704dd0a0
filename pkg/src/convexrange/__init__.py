"""Convex ranges of matrices and measures, with certification oracles.

Planar numerical ranges by eigenvalue support functions, exact rational
polytope faces and the face identity for affine intersections, majorization
and pinching, and exhaustively enumerated discretized vector-measure ranges.
"""

__version__ = "0.1.0"

from .errors import ConvexRangeError, InputFormatError  # noqa: F401
from .matrices import (  # noqa: F401
    SpectralDecomposition,
    haar_frames,
    haar_unitaries,
    haar_unitary,
    hermitian_eig,
    random_rank_k_projection,
    rotated_hermitian_part,
)
from .polytopes import (  # noqa: F401
    AffineSubspace,
    PolytopeFace,
    VPolytope,
    check_intersection_theorem,
    faces_of,
    facial_dimension,
    intersect_affine,
    minimal_face,
    minimal_face_of_set,
    polytope_contains,
    run_intersection_suite,
)
from .numrange import (  # noqa: F401
    BoundarySupportCurve,
    RegionReport,
    attainment_check,
    boundary_polygon,
    certification_run,
    certify_convexity,
    sample_range,
    support_point_c,
    support_point_k,
)
from .spectral import (  # noqa: F401
    IntervalFaceDescriptor,
    PinchFaceWitnesses,
    PinchingStep,
    apply_pinching,
    is_trace_slice_extreme,
    majorizes,
    minimal_interval_face,
    pinch_face_witnesses,
    pinching_sequence,
    trace_slice_face_dimension,
)
from .lyapunov import (  # noqa: F401
    DiscreteVectorMeasure,
    RangeSample,
    constrained_range,
    convexity_defect,
    extreme_solutions,
    projection_trace_range,
    range_bruteforce,
    refine,
    refinement_study,
)
