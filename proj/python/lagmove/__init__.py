"""Point-cloud movement schemes for Lagrangian meshfree advection."""

from ._lagmove import (  # noqa: F401
    DegenerateGeometryError,
    DimensionError,
    Error,
    HistoryMissingError,
    IllConditionedStencilError,
    NumericInputError,
    StencilDeficiencyError,
    StructuralError,
    UsageError,
    centroid,
    convergence_sweep,
    diameter,
    eps_V,
    eval_lissajous,
    eval_rotation,
    exact_lissajous_center,
    exp_series_apply,
    final_positions,
    hull_volume,
    move_m1,
    move_m2,
    move_m3,
    move_m4,
    neighbor_lists,
    run,
    sample_disc,
    scenario_names,
    validate,
    wlsq_gradients,
)

__version__ = "0.1.0"
