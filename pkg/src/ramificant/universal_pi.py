"""Universal polynomials Pi_d and the closed form of the Ramificant determinant.

Delta(a) = Delta(0) * exp(Pi_d(a)), where the gradient of Pi_d is read off the
exact remainder table (z^n mod z P0') and Pi_d itself is recovered from its
gradient by Euler integration of the homogeneous components.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

from .exact_algebra import MultiPoly, NormalizedP0, UsageError, mp_partial
from .quadrature import gamma_fn, root_of_unity
from .reduction import remainder_table

__all__ = [
    "ExactnessViolation",
    "RangeError",
    "PiResult",
    "pi_gradient",
    "pi_polynomial",
    "delta_zero",
    "delta_zero_audit",
    "delta_closed_form",
    "vandermonde",
]


class ExactnessViolation(ArithmeticError):
    """Mixed partials of the gradient disagree; indicates a bug, not bad input."""


class RangeError(OverflowError):
    def __init__(self, message: str, exponent: complex):
        super().__init__(message)
        self.exponent = exponent


@dataclass(frozen=True)
class PiResult:
    d: int
    pi: MultiPoly
    gradient: tuple[MultiPoly, ...]

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "pi": self.pi.to_json(),
            "gradient": [g.to_json() for g in self.gradient],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PiResult":
        d = int(data["d"])
        return cls(
            d,
            MultiPoly.from_json(data["pi"], d),
            tuple(MultiPoly.from_json(g, d) for g in data["gradient"]),
        )


def pi_gradient(d: int) -> list[MultiPoly]:
    """Logarithmic derivatives c_k = d_{a_k} log Delta as exact polynomials.

    c_0 is the constant d.  For k >= 1 the column-by-column derivative gives
    c_k = A_{d-1+k,d-1} + A_{d-2+k,d-2} + ... + A_{d,d-k}.
    """
    if d < 1:
        raise UsageError("degree must be >= 1")
    grad = [MultiPoly.constant(d, d)]
    if d == 1:
        return grad
    table = remainder_table(d, 2 * d - 2)
    for k in range(1, d):
        acc = MultiPoly.zero(d)
        for j in range(d - k, d):
            acc = acc + table[j + k, j]
        grad.append(acc)
    return grad


_cache: dict[int, PiResult] = {}
_cache_lock = threading.Lock()


def pi_polynomial(d: int) -> PiResult:
    """Pi_d with zero constant term, integrated exactly from ``pi_gradient(d)``."""
    with _cache_lock:
        if d in _cache:
            return _cache[d]
    grad = pi_gradient(d)
    for j in range(d):
        for k in range(j + 1, d):
            if mp_partial(grad[k], j) != mp_partial(grad[j], k):
                raise ExactnessViolation(f"d={d}: d_{j} c_{k} != d_{k} c_{j}")
    euler = MultiPoly.zero(d)
    for k in range(d):
        euler = euler + MultiPoly.variable(d, k) * grad[k]
    pi = MultiPoly.zero(d)
    for g, part in euler.homogeneous_components().items():
        if g == 0:
            raise ExactnessViolation(f"d={d}: Euler form has a constant term")
        pi = pi + part / g
    for k in range(d):
        if mp_partial(pi, k) != grad[k]:
            raise ExactnessViolation(f"d={d}: integrated polynomial misses c_{k}")
    result = PiResult(d, pi, tuple(grad))
    with _cache_lock:
        _cache.setdefault(d, result)
    return result


def vandermonde(d: int) -> complex:
    """prod_{i<j} (omega_j - omega_i) over the d-th roots of unity in order."""
    w = [root_of_unity(d, l) for l in range(1, d + 1)]
    v = 1 + 0j
    for i in range(d):
        for j in range(i + 1, d):
            v *= w[j] - w[i]
    return v


def _gamma_product(d: int) -> float:
    # Gauss multiplication at z = 1/d: prod_{k=1}^d Gamma(k/d) = (2 pi)^{(d-1)/2} d^{-1/2}
    return (2 * math.pi) ** ((d - 1) / 2) / math.sqrt(d)


def delta_zero(d: int) -> complex:
    """Delta(0, ..., 0) for P0 = -t^d/d.

    Entries at the origin are omega_l^k d^{k/d-1} Gamma(k/d) (k = 1..d), so the
    determinant factors into the Gamma product, a power of d and
    det[omega_l^k] = (-1)^{d-1} V_d, giving (2 pi/d)^{d/2} (-1)^{d-1} V_d / sqrt(2 pi).
    """
    if d < 1:
        raise UsageError("degree must be >= 1")
    scale = (2 * math.pi / d) ** (d / 2) / math.sqrt(2 * math.pi)
    return scale * (-1) ** (d - 1) * vandermonde(d)


def delta_zero_audit(d: int) -> dict:
    """Both candidate constants side by side, plus the Gamma-product cross-check."""
    value = delta_zero(d)
    paper_constant = (2 * math.pi * d) ** (d / 2) / math.sqrt(2 * math.pi)
    gamma_prod = 1.0
    for k in range(1, d + 1):
        gamma_prod *= gamma_fn(k / d)
    return {
        "d": d,
        "delta_zero": value,
        "vandermonde": vandermonde(d),
        "paper_constant": paper_constant,
        "paper_over_vandermonde": paper_constant / abs(value),
        "gamma_product": gamma_prod,
        "gamma_product_closed": _gamma_product(d),
    }


def delta_closed_form(p0: NormalizedP0) -> complex:
    """Delta(0) * exp(Pi_d(a_0, ..., a_{d-1}))."""
    pi = pi_polynomial(p0.d).pi
    exponent = complex(pi(*p0.a))
    if exponent.real > 709.0:
        raise RangeError(f"exp(Pi_d(a)) overflows: Re exponent = {exponent.real:.6g}", exponent)
    return delta_zero(p0.d) * cmath.exp(exponent)


def pi_value(p0: NormalizedP0) -> complex:
    return complex(pi_polynomial(p0.d).pi(*p0.a))


