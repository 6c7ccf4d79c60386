"""Symmetric-difference volume between bodies and its quotient by the
integral affine group."""

__version__ = "0.1.0"

from .bodies import GeneralBody, mc_sym_diff_volume
from .delzant import is_delzant, standard_corpus
from .errors import (
    BodyMetricError,
    BudgetExceeded,
    DegenerateBody,
    DimensionMismatch,
    InputError,
    IrrationalDirection,
    NotUnimodular,
    TooFewPoints,
    UnboundedBody,
)
from .geometry import (
    EMPTY,
    ConvexPolygon,
    Hyperplane,
    convex_intersection,
    cube_vertex_gap,
    hausdorff_distance,
    polygon_from_vertices,
    sym_diff_area,
)
from .lattice import UnimodularAffine, apply, compose, enumerate_gl2z, enumerate_glnz_words, inverse
from .moduli import OrbitDistanceResult, SearchConfig, moduli_distance_2d, moduli_distance_nd

__all__ = [name for name in dir() if not name.startswith("_")]
