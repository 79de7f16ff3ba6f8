"""Linear ODE with polynomial coefficients annihilating z^k e^{P0}, k < d.

The coefficients come from the Pascal-with-derivative table
y_{n,m+1} = y_{n-1,m} + y'_{n,m}, written as y_{n,m} = Q_{n,m} e^{P0}, and a
unit-diagonal triangular system solved by back substitution.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .exact_algebra import CPoly, UsageError

__all__ = [
    "OdeResult",
    "q_table",
    "build_ode",
    "apply_operator",
    "ode_residuals",
    "wronskian_check",
    "exp_derivative",
]


def exp_derivative(p: CPoly, dp0: CPoly) -> CPoly:
    """D(p) with (p e^{P0})' = D(p) e^{P0}, i.e. p' + P0' p."""
    return p.derivative() + dp0 * p


def q_table(p0_poly: CPoly, d: int | None = None) -> dict[tuple[int, int], CPoly]:
    """Q_{n,m} for 0 <= n <= m <= d (entries with n > m are zero and omitted)."""
    if d is None:
        d = p0_poly.degree
    if d < 1 or p0_poly.degree < 1:
        raise UsageError("P0 must have degree >= 1")
    dp0 = p0_poly.derivative()
    table = {(0, 0): CPoly([1.0])}
    for m in range(d):
        for n in range(0, m + 2):
            below = table.get((n - 1, m), CPoly()) if n >= 1 else CPoly()
            here = table.get((n, m), CPoly())
            table[(n, m + 1)] = below + exp_derivative(here, dp0)
    return table


@dataclass(frozen=True)
class OdeResult:
    p0_poly: CPoly
    b: tuple[CPoly, ...]
    q_table: dict

    @property
    def order(self) -> int:
        return len(self.b)

    def to_json(self) -> dict:
        return {"order": self.order, "b": [c.to_json() for c in self.b]}


def build_ode(p0_poly: CPoly) -> OdeResult:
    """y^(d) + b_{d-1} y^(d-1) + ... + b_0 y = 0 with solutions z^k e^{P0}.

    Row j of the triangular system is b_j Q_{j,j} + ... + b_{d-1} Q_{j,d-1} + Q_{j,d} = 0
    with Q_{j,j} = 1.
    """
    d = p0_poly.degree
    if d < 1:
        raise UsageError("P0 must have degree >= 1")
    table = q_table(p0_poly, d)
    b: list[CPoly] = [CPoly()] * d
    for j in range(d - 1, -1, -1):
        acc = -table[(j, d)]
        for i in range(j + 1, d):
            acc = acc - b[i] * table[(j, i)]
        b[j] = acc
    return OdeResult(p0_poly, tuple(b), table)


def apply_operator(ode: OdeResult, p: CPoly) -> CPoly:
    """L(p e^{P0}) e^{-P0}, computed from scratch by repeated differentiation."""
    dp0 = ode.p0_poly.derivative()
    out = CPoly()
    cur = p
    for j in range(ode.order + 1):
        coef = ode.b[j] if j < ode.order else CPoly([1.0])
        out = out + coef * cur
        cur = exp_derivative(cur, dp0)
    return out


def ode_residuals(ode: OdeResult) -> list[float]:
    """Relative coefficient norm of L(z^k e^{P0}) e^{-P0} for k < d."""
    out = []
    dp0 = ode.p0_poly.derivative()
    for k in range(ode.order):
        p = CPoly.monomial(k)
        scale = 0.0
        cur = p
        for j in range(ode.order + 1):
            coef = ode.b[j] if j < ode.order else CPoly([1.0])
            scale = max(scale, (coef * cur).norm())
            cur = exp_derivative(cur, dp0)
        out.append(apply_operator(ode, p).norm() / max(scale, 1e-300))
    return out


def _poly_det(mat: list[list[CPoly]]) -> tuple[CPoly, float]:
    """Leibniz expansion; also returns the largest term norm (cancellation scale)."""
    n = len(mat)
    total = CPoly()
    biggest = 0.0
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = CPoly([1.0])
        for i, pi in enumerate(perm):
            term = term * mat[i][pi]
            if term.is_zero():
                break
        biggest = max(biggest, term.norm())
        total = total + (-term if inv % 2 else term)
    return total, biggest


def wronskian_check(p0_poly: CPoly, sample_points, rtol: float = 1e-8) -> dict:
    """Wronskian of z^k e^{P0} (k < d) divided by e^{d P0}.

    Symbolically the quotient is the determinant of the polynomial matrix
    D^i(z^k); it comes out constant.  The constant is compared with numeric
    Wronskians at the sample points.
    """
    pts = [complex(z) for z in sample_points]
    if len(pts) < 2:
        raise UsageError("need at least two sample points")
    d = p0_poly.degree
    if d < 1:
        raise UsageError("P0 must have degree >= 1")
    dp0 = p0_poly.derivative()
    rows: list[list[CPoly]] = []
    cur = [CPoly.monomial(k) for k in range(d)]
    for _ in range(d):
        rows.append(cur)
        cur = [exp_derivative(p, dp0) for p in cur]
    sym, scale = _poly_det(rows)
    c = sym.coef(0)
    scale = max(scale, 1e-300)
    nonconst = max((abs(x) for x in sym.coeffs[1:]), default=0.0) / scale
    samples = []
    for z in pts:
        w = np.linalg.det(np.array([[p(z) for p in row] for row in rows], dtype=complex))
        samples.append(complex(w))
    rel = [abs(s - c) / abs(c) for s in samples] if c else [math.inf for _ in samples]
    return {
        "d": d,
        "wronskian_constant": c,
        "symbolic_nonconstant_rel": nonconst,
        "sample_values": samples,
        "max_sample_rel_dev": max(rel),
        "consistent": nonconst <= rtol and max(rel) <= rtol,
        "superfactorial": math.prod(math.factorial(k) for k in range(d)),
    }
