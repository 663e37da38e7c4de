"""Offset fixed-point iteration for d-th roots, its stability analysis,
Newton-family baselines and the associated continued fraction."""

__version__ = "0.1.0"

from .core import (  # noqa: E402
    IterationConfig,
    IterationTrace,
    RootQuery,
    Verdict,
    ZeroDivisorError,
    nth_step,
    recover_root,
    run_iteration,
    run_iteration_batch,
    sqrt_step,
)
from .stability import (  # noqa: E402
    StabilityClass,
    classify,
    cubic_validity_bounds,
    fixed_points,
    iteration_map,
    map_derivative,
    regime_table,
    scan_b,
    stability_report,
    threshold_ratio,
)
from .baselines import (  # noqa: E402
    BaselineMethod,
    ConvergenceEstimate,
    InsufficientDataError,
    babylonian_step,
    estimate_convergence,
    halley_step,
    newton_step,
    run_baseline,
)
from .contfrac import GeneralizedCF, build_gcf, evaluate_gcf, format_gcf, gcf_iteration_equivalence  # noqa: E402
