"""Period matrices, the numeric Ramificant determinant and what it controls.

Row l of the period matrix holds the asymptotic values F_{k-1}(+inf . omega_l)
for k = 1..d.  Besides assembling it, this module checks the closed-form
determinant identity, recovers the coefficients of P0 from the periods, and
compares the period map's finite-difference Jacobian with the matrix itself.
"""

from __future__ import annotations

import cmath
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .exact_algebra import NormalizedP0, UsageError, complex_to_json, parse_complex
from .quadrature import QuadConfig, RayIntegralSpec, integrate_ray
from .universal_pi import delta_zero, pi_value

__all__ = [
    "PeriodMatrix",
    "RecoveryResult",
    "SingularMatrix",
    "period_matrix",
    "ramificant_det",
    "verify_identity",
    "recover_coefficients",
    "jacobian_check",
    "separation_check",
    "row_identity_residual",
    "thread_count",
]


class SingularMatrix(ArithmeticError):
    pass


def thread_count() -> int:
    env = os.environ.get("RAMIFICANT_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise UsageError(f"RAMIFICANT_THREADS must be an integer, got {env!r}") from None
        return max(1, n)
    return os.cpu_count() or 1


@dataclass(frozen=True)
class PeriodMatrix:
    d: int
    entries: np.ndarray
    est_error: float
    nodes_used: int = 0
    entry_errors: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (self.d, self.d):
            raise UsageError(f"period matrix must be {self.d}x{self.d}, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise UsageError("period matrix entries must be finite")
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def omega(self, k: int, l: int) -> complex:
        """Omega_{kl} with k = 1..d (power t^{k-1}) and l = 1..d."""
        return complex(self.entries[l - 1, k - 1])

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "entries": [[complex_to_json(z) for z in row] for row in self.entries],
            "est_error": self.est_error,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PeriodMatrix":
        try:
            d = int(data["d"])
            rows = [[parse_complex(z) for z in row] for row in data["entries"]]
            est = float(data.get("est_error", 0.0))
        except (KeyError, TypeError) as exc:
            raise UsageError(
                f'matrix must look like {{"d": n, "entries": [[[re, im], ...], ...], "est_error": x}}: {exc}'
            ) from None
        return cls(d, np.array(rows, dtype=complex).reshape(d, d) if d else np.zeros((0, 0)), est)


@dataclass(frozen=True)
class RecoveryResult:
    exp_a0: complex
    a: tuple[complex, ...]
    residual: float

    @property
    def log_a0(self) -> complex:
        """Principal logarithm of e^{a0}; a0 itself is only defined mod 2 pi i."""
        return cmath.log(self.exp_a0)

    def to_json(self) -> dict:
        return {
            "exp_a0": complex_to_json(self.exp_a0),
            "a0_mod_2pi_i": complex_to_json(self.log_a0),
            "a": [complex_to_json(x) for x in self.a],
            "residual": self.residual,
        }


def _entry(p0, k, l, cfg):
    return integrate_ray(RayIntegralSpec(p0, k, l), cfg)


def period_matrix(p0: NormalizedP0, cfg: QuadConfig = QuadConfig()) -> PeriodMatrix:
    d = p0.d
    jobs = [(k, l) for l in range(1, d + 1) for k in range(d)]
    workers = min(thread_count(), len(jobs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda kl: _entry(p0, kl[0], kl[1], cfg), jobs))
    else:
        results = [_entry(p0, k, l, cfg) for k, l in jobs]
    m = np.empty((d, d), dtype=complex)
    errs = np.empty((d, d))
    nodes = 0
    for (k, l), r in zip(jobs, results):
        m[l - 1, k] = r.value
        errs[l - 1, k] = r.est_error
        nodes += r.nodes_used
    return PeriodMatrix(d, m, float(errs.max()) * d, nodes, errs)


def _lu(m: np.ndarray):
    # exact singularity is reported through the pivots, not a warning
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        return scipy.linalg.lu_factor(m, check_finite=True)


def ramificant_det(m: PeriodMatrix | np.ndarray) -> complex:
    """Determinant from a partially pivoted LU factorization."""
    a = m.entries if isinstance(m, PeriodMatrix) else np.asarray(m, dtype=complex)
    if a.size == 0:
        return 1 + 0j
    lu, piv = _lu(a)
    sign = (-1) ** int(np.count_nonzero(piv != np.arange(len(piv))))
    return complex(sign * np.prod(np.diag(lu)))


def row_identity_residual(m: PeriodMatrix, p0: NormalizedP0) -> float:
    """|| M (a_1, 2a_2, ..., -1)^T + e^{a0} 1 ||_inf, zero in exact arithmetic."""
    v = np.array(p0.exact_form_coefficients())
    return float(np.max(np.abs(m.entries @ v + cmath.exp(p0.a[0]))))


def verify_identity(p0: NormalizedP0, cfg: QuadConfig = QuadConfig()) -> dict:
    """Compare Delta_quad(a)/Delta_quad(0) with exp(Pi_d(a))."""
    d = p0.d
    m = period_matrix(p0, cfg)
    m0 = period_matrix(NormalizedP0.zero(d), cfg)
    delta = ramificant_det(m)
    delta0 = ramificant_det(m0)
    ratio = delta / delta0
    pi = pi_value(p0)
    exp_pi = cmath.exp(pi)
    return {
        "d": d,
        "delta_numeric": delta,
        "delta_zero_numeric": delta0,
        "ratio_numeric": ratio,
        "pi_value": pi,
        "exp_pi": exp_pi,
        "rel_err": abs(ratio - exp_pi) / abs(exp_pi),
        "paper_constant": (2 * math.pi * d) ** (d / 2) / math.sqrt(2 * math.pi),
        "vandermonde_constant": delta_zero(d),
        "est_error": max(m.est_error, m0.est_error),
        "nodes_used": m.nodes_used + m0.nodes_used,
    }


def recover_coefficients(m: PeriodMatrix | np.ndarray) -> RecoveryResult:
    """Solve M y = 1; then y = -e^{-a0} (a_1, 2a_2, ..., (d-1)a_{d-1}, -1)."""
    a = m.entries if isinstance(m, PeriodMatrix) else np.asarray(m, dtype=complex)
    d = a.shape[0]
    if d == 0:
        raise UsageError("empty period matrix")
    lu, piv = _lu(a)
    norm = float(np.max(np.abs(a)))
    pivot = float(np.min(np.abs(np.diag(lu))))
    if pivot < 1e-12 * norm or norm == 0:
        raise SingularMatrix(f"pivot {pivot:.3g} below 1e-12 * ||M|| = {1e-12 * norm:.3g}")
    ones = np.ones(d, dtype=complex)
    y = scipy.linalg.lu_solve((lu, piv), ones)
    residual = float(np.max(np.abs(a @ y - ones)))
    y_last = y[-1]
    exp_a0 = 1 / y_last
    coeffs = tuple(complex(-y[j - 1] / (j * y_last)) for j in range(1, d))
    return RecoveryResult(complex(exp_a0), coeffs, residual)


def _upsilon(p0: NormalizedP0, cfg: QuadConfig) -> np.ndarray:
    return np.array([integrate_ray(RayIntegralSpec(p0, 0, l), cfg).value for l in range(1, p0.d + 1)])


def jacobian_check(p0: NormalizedP0, h: float = 1e-4, cfg: QuadConfig = QuadConfig()) -> dict:
    """Central differences of the period map a -> (F_0(+inf . omega_l))_l.

    Column j of the Jacobian is d/da_j F_0(+inf . omega_l) = int t^j e^{P0},
    i.e. column j+1 of the period matrix, so det(Jacobian) = Delta.
    """
    if not 1e-6 <= h <= 1e-3:
        raise UsageError("h must lie in [1e-6, 1e-3]")
    d = p0.d
    jac = np.empty((d, d), dtype=complex)
    for j in range(d):
        plus = list(p0.a)
        minus = list(p0.a)
        plus[j] += h
        minus[j] -= h
        fp = _upsilon(NormalizedP0(d, tuple(plus)), cfg)
        fm = _upsilon(NormalizedP0(d, tuple(minus)), cfg)
        jac[:, j] = (fp - fm) / (2 * h)
    m = period_matrix(p0, cfg)
    dev = np.abs(jac - m.entries) / np.maximum(np.abs(m.entries), 1e-300)
    det_jac = ramificant_det(jac)
    delta = ramificant_det(m)
    return {
        "d": d,
        "h": h,
        "jacobian": jac,
        "period_matrix": m,
        "max_entry_rel_dev": float(dev.max()),
        "det_jacobian": det_jac,
        "delta": delta,
        "det_rel_dev": abs(det_jac - delta) / abs(delta),
    }


def separation_check(m: PeriodMatrix) -> dict:
    """Smallest sup-norm distance between two rows (distinct directions)."""
    d = m.d
    gap = math.inf
    pair = None
    for i in range(d):
        for j in range(i + 1, d):
            g = float(np.max(np.abs(m.entries[i] - m.entries[j])))
            if g < gap:
                gap, pair = g, (i + 1, j + 1)
    threshold = 10 * m.est_error
    return {
        "min_row_gap": gap,
        "closest_directions": pair,
        "threshold": threshold,
        "separated": gap > threshold,
    }
