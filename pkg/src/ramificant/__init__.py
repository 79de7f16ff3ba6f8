"""Exponential periods, the Ramificant determinant and integrability in finite terms."""

__version__ = "0.1.0"

from .exact_algebra import (
    BigRational,
    CPoly,
    MultiPoly,
    NormalizedP0,
    UsageError,
    cp_derivative,
    cp_divmod,
    cp_eval,
    mp_add,
    mp_mul,
    mp_partial,
    mp_scale,
)
from .integrability import (
    DisagreementError,
    IntegrabilityReport,
    asymptotic_values,
    check_integrability,
    solve_finite_terms,
)
from .ode import OdeResult, build_ode, q_table, wronskian_check
from .periods import (
    PeriodMatrix,
    RecoveryResult,
    SingularMatrix,
    jacobian_check,
    period_matrix,
    ramificant_det,
    recover_coefficients,
    separation_check,
    verify_identity,
)
from .quadrature import (
    QuadConfig,
    QuadResult,
    RayIntegralSpec,
    TailBoundFailure,
    ToleranceNotMet,
    gamma_fn,
    integrate_ray,
    integrate_segment,
)
from .reduction import ReductionResult, RemainderTable, reduce_primitive, remainder_table
from .universal_pi import (
    ExactnessViolation,
    PiResult,
    RangeError,
    delta_closed_form,
    delta_zero,
    pi_gradient,
    pi_polynomial,
)

__all__ = [
    "__version__",
    "BigRational",
    "CPoly",
    "DisagreementError",
    "ExactnessViolation",
    "IntegrabilityReport",
    "MultiPoly",
    "NormalizedP0",
    "OdeResult",
    "PeriodMatrix",
    "PiResult",
    "QuadConfig",
    "QuadResult",
    "RangeError",
    "RayIntegralSpec",
    "RecoveryResult",
    "ReductionResult",
    "RemainderTable",
    "SingularMatrix",
    "TailBoundFailure",
    "ToleranceNotMet",
    "UsageError",
    "asymptotic_values",
    "build_ode",
    "check_integrability",
    "cp_derivative",
    "cp_divmod",
    "cp_eval",
    "delta_closed_form",
    "delta_zero",
    "gamma_fn",
    "integrate_ray",
    "integrate_segment",
    "jacobian_check",
    "mp_add",
    "mp_mul",
    "mp_partial",
    "mp_scale",
    "period_matrix",
    "pi_gradient",
    "pi_polynomial",
    "q_table",
    "ramificant_det",
    "recover_coefficients",
    "reduce_primitive",
    "remainder_table",
    "separation_check",
    "solve_finite_terms",
    "verify_identity",
    "wronskian_check",
]
