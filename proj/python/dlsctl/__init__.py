"""Damped least-squares acceleration control of coupled Duffing oscillators."""

from ._dlsctl import (
    ComparisonError,
    ConfigurationError,
    DivergenceError,
    DuffingControlConfig,
    DuffingParams,
    InsufficientDataError,
    SingularNormalMatrixError,
    UndefinedEstimateError,
    UsageError,
    char_poly_roots,
    compare_lambda_h,
    control_update,
    dls_solve,
    dls_solve_simple,
    duffing_rhs,
    evaluate_target,
    map_jacobian_spectrum,
    preset_names,
    q_estimate,
    read_csv,
    run_preset,
    simulate_preset,
)

__all__ = [name for name in dir() if not name.startswith("_")]
