"""Integrability in finite terms of int Q e^{P0}, decided two independent ways.

The algebraic branch looks for a polynomial A with A P0' + A' = Q.  The
numeric branch computes the d asymptotic values of the primitive and asks
whether they coincide.  ``check_integrability`` runs both and cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exact_algebra import CPoly, NormalizedP0, complex_to_json
from .periods import PeriodMatrix, period_matrix
from .quadrature import QuadConfig, adaptive_gk, ray_radius, root_of_unity
from .reduction import reduce_primitive

__all__ = [
    "DisagreementError",
    "IntegrabilityReport",
    "solve_finite_terms",
    "solve_finite_terms_exact",
    "asymptotic_values",
    "asymptotic_values_direct",
    "check_integrability",
]


class DisagreementError(ArithmeticError):
    """Exact and numeric verdicts conflict; both payloads are attached."""

    def __init__(self, message: str, report: "IntegrabilityReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class IntegrabilityReport:
    integrable_exact: bool
    antiderivative: CPoly | None
    asymptotic_values: tuple[complex, ...]
    max_spread: float
    omega_constant: complex | None
    agree: bool
    gamma_periods: tuple[complex, ...]
    spread_tol: float
    est_error: float

    def to_json(self) -> dict:
        return {
            "integrable_exact": self.integrable_exact,
            "antiderivative": None if self.antiderivative is None else self.antiderivative.to_json(),
            "asymptotic_values": [complex_to_json(z) for z in self.asymptotic_values],
            "max_spread": self.max_spread,
            "omega_constant": None if self.omega_constant is None else complex_to_json(self.omega_constant),
            "agree": self.agree,
            "gamma_periods": [complex_to_json(z) for z in self.gamma_periods],
            "spread_tol": self.spread_tol,
            "est_error": self.est_error,
        }


def _descending_solve(q: list, dp0: list, zero):
    """Coefficients of A with A P0' + A' matching q in degrees >= deg P0'.

    Works for any field elements supporting + - * (the division is by the
    leading coefficient of P0', which is exactly -1).  Returns A's coefficients
    and the full residual list q - (A P0' + A').
    """
    n = len(q) - 1
    m = len(dp0) - 1  # = d - 1
    if n < m:
        return [], list(q)
    alpha = [zero] * (n - m + 1)
    for s in range(n, m - 1, -1):
        i = s - m
        acc = zero
        for mm in range(i + 1, len(alpha)):
            if 0 <= s - mm <= m:
                acc = acc + alpha[mm] * dp0[s - mm]
        if s + 1 < len(alpha):
            acc = acc + (s + 1) * alpha[s + 1]
        # -alpha_i + acc = q_s, using dp0[m] == -1
        alpha[i] = acc - q[s]
    resid = list(q)
    for i, c in enumerate(alpha):
        for j, p in enumerate(dp0):
            resid[i + j] = resid[i + j] - c * p
        if i >= 1:
            resid[i - 1] = resid[i - 1] - i * c
    return alpha, resid


def solve_finite_terms(p0: NormalizedP0, q: CPoly, tol: float = 1e-9) -> CPoly | None:
    """Polynomial A with A P0' + A' = q, or None when none exists."""
    if q.is_zero():
        return CPoly()
    dp0 = list(p0.derivative().coeffs)
    alpha, resid = _descending_solve(list(q.coeffs), dp0, 0j)
    scale = max(1.0, q.norm())
    if any(abs(r) > tol * scale for r in resid):
        return None
    return CPoly(alpha)


def solve_finite_terms_exact(a, q):
    """Exact variant over Gaussian rationals.

    ``a`` holds a_0..a_{d-1} and ``q`` the ascending coefficients of Q, each
    entry an int, Fraction, or (re, im) pair of those.  Returns the exact
    coefficients of A as ``sympy`` Gaussian rationals, or None.
    """
    from sympy.polys.domains import QQ_I

    def conv(x):
        if isinstance(x, (tuple, list)):
            re, im = x
            return QQ_I(Fraction(re), Fraction(im))
        return QQ_I(Fraction(x), 0)

    a = [conv(x) for x in a]
    d = len(a)
    dp0 = [k * a[k] for k in range(1, d)] + [QQ_I(-1, 0)]
    coeffs = [conv(x) for x in q]
    while coeffs and coeffs[-1] == QQ_I.zero:
        coeffs.pop()
    if not coeffs:
        return []
    alpha, resid = _descending_solve(coeffs, dp0, QQ_I.zero)
    if any(r != QQ_I.zero for r in resid):
        return None
    return alpha


def asymptotic_values(
    p0: NormalizedP0,
    q: CPoly,
    cfg: QuadConfig = QuadConfig(),
    matrix: PeriodMatrix | None = None,
) -> tuple[list[complex], float]:
    """Omega_l(F) for F = int_0^z q e^{P0}, via the reduction and the periods.

    A0 e^{P0} tends to 0 along every decay ray, so only the F_k part and the
    constant survive.  Returns the values and a propagated error estimate.
    """
    red = reduce_primitive(p0, q)
    m = matrix if matrix is not None else period_matrix(p0, cfg)
    b = np.array(red.basis_coeffs)
    vals = m.entries @ b + red.const_term
    err = m.est_error * float(np.sum(np.abs(b)))
    return [complex(v) for v in vals], err


def asymptotic_values_direct(p0: NormalizedP0, q: CPoly, cfg: QuadConfig = QuadConfig()) -> list[complex]:
    """Same values by direct ray quadrature of q e^{P0}; an independent check."""
    if q.is_zero():
        return [0j] * p0.d
    poly = p0.poly()
    radius = max(ray_radius(p0, max(q.degree, 0), cfg.tail_tol), 1.0)
    out = []
    for l in range(1, p0.d + 1):
        w = root_of_unity(p0.d, l)

        def f(r, w=w):
            t = r * w
            return q(t) * np.exp(poly(t)) * w

        out.append(adaptive_gk(f, 0.0, radius, cfg, initial=4).value)
    return out


def check_integrability(
    p0: NormalizedP0,
    q: CPoly,
    cfg: QuadConfig = QuadConfig(),
    spread_tol: float | None = None,
    matrix: PeriodMatrix | None = None,
    raise_on_disagreement: bool = True,
) -> IntegrabilityReport:
    """Run the algebraic and the asymptotic-value test and compare verdicts.

    The numeric verdict is "all values equal" at threshold
    max(1e-6, 100 * est_error) unless ``spread_tol`` overrides it.
    """
    antideriv = solve_finite_terms(p0, q)
    vals, err = asymptotic_values(p0, q, cfg, matrix)
    d = p0.d
    spread = max((abs(vals[i] - vals[j]) for i in range(d) for j in range(i + 1, d)), default=0.0)
    tol = spread_tol if spread_tol is not None else max(1e-6, 100 * err)
    numeric_equal = spread <= tol
    exact = antideriv is not None
    gamma = tuple(vals[(l + 1) % d] - vals[l] for l in range(d))
    report = IntegrabilityReport(
        integrable_exact=exact,
        antiderivative=antideriv,
        asymptotic_values=tuple(vals),
        max_spread=float(spread),
        omega_constant=complex(np.mean(vals)) if exact else None,
        agree=exact == numeric_equal,
        gamma_periods=gamma,
        spread_tol=tol,
        est_error=err,
    )
    if raise_on_disagreement and not report.agree:
        raise DisagreementError(
            f"exact verdict {exact} but asymptotic spread {spread:.3g} vs tolerance {tol:.3g}",
            report,
        )
    return report
