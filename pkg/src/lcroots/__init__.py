"""Polynomial root approximation through line-circle geometry in the complex
plane: per-angle LzC structures, discrete proximity maps over theta sweeps,
and ranked root estimate extraction."""

from .complex_geometry import (
    Circle,
    DegenerateCircle,
    IntersectionPair,
    Line,
    ReciprocalPole,
    SemiLine,
    circle_through_origin,
    complex_sqrt_pair,
    derived_semiline,
    intersect_ray_circle,
    mobius_reciprocal,
)
from .polynomial import (
    MonicPolynomial,
    RootSet,
    evaluate,
    from_roots,
    oracle_roots,
    quartic_resolvent,
    shift_variable,
    solve_quartic_resolvent,
    theta_root,
)
from .lzc_engine import (
    LzCFrame,
    QuadraticSolution,
    best_estimate,
    build_frame,
    dsd,
    normalize_theta,
    projections,
    quadratic_theta_star,
    solve_quadratic,
    terminal_curve_point,
    terminal_semiline,
    weighted_error,
    zc_circle,
    zc_point,
)
from .dsd_optimizer import (
    MinResult,
    MinStatus,
    OptimizerConfig,
    OptimizerMethod,
    default_grid_span,
    dsd_derivative,
    minimize_dsd,
)
from .proximity_maps import (
    EstimateRow,
    PartitionSpec,
    ProximityMap,
    SolveOutcome,
    build_derivative_map,
    build_e_map,
    dedupe_rows,
    e_map_crossings,
    estimate_roots_cubic,
    estimate_roots_general,
    find_crossings,
    gap_intervals,
    map_gaps,
    rescue_missing_root,
    solve_pipeline,
)

__version__ = "0.1.0"
