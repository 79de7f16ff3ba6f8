"""Acceptance criteria, runnable from pytest and from ``ramificant selftest``.

Each ``criterion_*`` function returns a ``CriterionResult``; every tolerance
and time limit is fixed here.  Random draws use fixed seeds.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .exact_algebra import CPoly, MultiPoly, NormalizedP0, mp_partial
from .integrability import check_integrability
from .ode import build_ode, ode_residuals, wronskian_check
from .periods import (
    jacobian_check,
    period_matrix,
    ramificant_det,
    recover_coefficients,
    verify_identity,
)
from .quadrature import integrate_segment
from .reduction import identity_rel_error, reduce_primitive
from .universal_pi import delta_zero, pi_polynomial

__all__ = ["CriterionResult", "CRITERIA", "run_all", "random_p0", "growth_point"]


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    elapsed: float
    time_limit: float
    details: dict = field(default_factory=dict)

    @property
    def within_time(self) -> bool:
        return self.elapsed < self.time_limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        timing = f"{self.elapsed:.2f}s/{self.time_limit:.0f}s"
        return f"[{status}] {self.number:2d}. {self.name} ({timing})"


def random_p0(rng: np.random.Generator, d: int, radius: float = 0.5) -> NormalizedP0:
    """Coefficients uniform in the complex disc of the given radius."""
    r = radius * np.sqrt(rng.uniform(0, 1, d))
    t = rng.uniform(0, 2 * math.pi, d)
    return NormalizedP0(d, tuple(complex(x) for x in r * np.exp(1j * t)))


def _unit_square(rng: np.random.Generator, n: int) -> list[complex]:
    return [complex(x, y) for x, y in rng.uniform(-1, 1, (n, 2))]


def _timed(number: int, name: str, limit: float):
    def wrap(fn: Callable[[], tuple[bool, dict]]):
        def run() -> CriterionResult:
            t0 = time.perf_counter()
            passed, details = fn()
            return CriterionResult(number, name, bool(passed), time.perf_counter() - t0, limit, details)

        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run

    return wrap


@_timed(1, "universal polynomials Pi_1..Pi_4", 1.0)
def criterion_universal_polynomials():
    x = [lambda d, i=i: MultiPoly.variable(d, i) for i in range(4)]
    ok = {}
    ok["pi1"] = pi_polynomial(1).pi == x[0](1)
    ok["pi2"] = pi_polynomial(2).pi == 2 * x[0](2) + Fraction(1, 2) * x[1](2) ** 2
    ok["pi3"] = pi_polynomial(3).pi == (
        3 * x[0](3) + 2 * x[1](3) * x[2](3) + Fraction(4, 3) * x[2](3) ** 3
    )
    p4 = pi_polynomial(4).pi
    known = 4 * x[0](4) + 3 * x[3](4) * x[1](4) + 2 * x[2](4) ** 2 + 9 * x[3](4) ** 2 * x[2](4)
    rest = p4 - known
    ok["pi4_rest_pure_X3"] = rest.variables_used() <= {3}
    ok["pi4_known_terms"] = all(p4.terms.get(e) == c for e, c in known.terms.items())
    return all(ok.values()), {**ok, "pi4": str(p4), "pi4_pure_X3_part": str(rest)}


@_timed(2, "gradient exactness d=1..6", 10.0)
def criterion_gradient_exactness():
    details = {}
    good = True
    for d in range(1, 7):
        res = pi_polynomial(d)
        c = res.gradient
        closed = all(
            mp_partial(c[k], j) == mp_partial(c[j], k) for j in range(d) for k in range(j + 1, d)
        )
        fidelity = all(mp_partial(res.pi, k) == c[k] for k in range(d))
        linear = all(res.pi.degree_in(k) <= 1 for k in range(d) if 2 * k < d)
        no_const = res.pi.constant_term() == 0
        details[d] = dict(closed=closed, fidelity=fidelity, linear_low=linear, no_constant=no_const)
        good &= closed and fidelity and linear and no_const
    return good, details


@_timed(3, "master determinant identity d=1,2,3 x 20 draws", 60.0)
def criterion_master_identity(draws: int = 20, tol: float = 1e-6):
    rng = np.random.default_rng(20230301)
    worst = {}
    for d in (1, 2, 3):
        worst[d] = max(verify_identity(random_p0(rng, d))["rel_err"] for _ in range(draws))
    return all(v <= tol for v in worst.values()), {"max_rel_err": worst, "tol": tol}


@_timed(4, "Delta(0) constant audit", 10.0)
def criterion_delta_zero_audit(tol: float = 1e-8):
    details = {}
    good = True
    for d in (1, 2, 3):
        quad = ramificant_det(period_matrix(NormalizedP0.zero(d)))
        vdm = delta_zero(d)
        alt = (2 * math.pi * d) ** (d / 2) / math.sqrt(2 * math.pi)
        rel = abs(quad - vdm) / abs(vdm)
        details[d] = {
            "delta_quad": quad,
            "vandermonde_constant": vdm,
            "paper_constant": alt,
            "paper_over_quad": alt / abs(quad),
            "rel_err": rel,
        }
        good &= rel <= tol
    return good, details


@_timed(5, "reduction postcondition, 100 instances", 10.0)
def criterion_reduction(n: int = 100, tol: float = 1e-10):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(n):
        d = int(rng.integers(1, 6))
        p0 = NormalizedP0(d, tuple(_unit_square(rng, d)))
        deg = int(rng.integers(0, 3 * d + 1))
        q = CPoly(_unit_square(rng, deg + 1))
        res = reduce_primitive(p0, q)
        worst = max(worst, identity_rel_error(p0, q, res))
    return worst <= tol, {"max_rel_residual": worst, "tol": tol}


@_timed(6, "integrability equivalence, 200 instances", 120.0)
def criterion_integrability(n: int = 200, recover_tol: float = 1e-9):
    rng = np.random.default_rng(6)
    disagreements = 0
    ambiguous = 0
    worst_recovery = 0.0
    counts = {"integrable": 0, "not_integrable": 0}
    for i in range(n):
        d = int(rng.integers(1, 5))
        p0 = random_p0(rng, d)
        constructed = i % 2 == 0
        if constructed:
            a_true = CPoly(_unit_square(rng, int(rng.integers(0, d + 1)) + 1))
            q = a_true * p0.derivative() + a_true.derivative()
        else:
            q = CPoly(_unit_square(rng, int(rng.integers(0, 3 * d + 1)) + 1))
        rep = check_integrability(p0, q, raise_on_disagreement=False)
        counts["integrable" if rep.integrable_exact else "not_integrable"] += 1
        if not rep.agree:
            if 100 * rep.est_error >= rep.max_spread:
                ambiguous += 1
            else:
                disagreements += 1
        if constructed:
            if rep.antiderivative is None:
                worst_recovery = math.inf
            else:
                diff = (rep.antiderivative - a_true).norm() / max(1.0, a_true.norm())
                worst_recovery = max(worst_recovery, diff)
    details = {
        "disagreements": disagreements,
        "ambiguous_reported": ambiguous,
        "verdicts": counts,
        "max_antiderivative_error": worst_recovery,
    }
    return disagreements == 0 and worst_recovery <= recover_tol, details


@_timed(7, "Torelli roundtrip d=2,3 x 10 draws", 60.0)
def criterion_torelli(draws: int = 10, tol: float = 1e-6):
    rng = np.random.default_rng(7)
    worst_a = 0.0
    worst_e = 0.0
    for d in (2, 3):
        for _ in range(draws):
            p0 = random_p0(rng, d)
            rec = recover_coefficients(period_matrix(p0))
            worst_a = max(worst_a, max(abs(x - y) for x, y in zip(rec.a, p0.a[1:])))
            e = cmath.exp(p0.a[0])
            worst_e = max(worst_e, abs(rec.exp_a0 - e) / abs(e))
    return worst_a <= tol and worst_e <= tol, {"max_abs_err_a": worst_a, "max_rel_err_exp_a0": worst_e}


@_timed(8, "Jacobian of the period map (etale)", 60.0)
def criterion_jacobian(entry_tol: float = 1e-4, det_tol: float = 1e-3):
    rng = np.random.default_rng(8)
    worst_entry = 0.0
    worst_det = 0.0
    for d in (2, 3):
        for p0 in [NormalizedP0.zero(d)] + [random_p0(rng, d) for _ in range(3)]:
            rep = jacobian_check(p0, 1e-4)
            worst_entry = max(worst_entry, rep["max_entry_rel_dev"])
            worst_det = max(worst_det, rep["det_rel_dev"])
    ok = worst_entry <= entry_tol and worst_det <= det_tol
    return ok, {"max_entry_rel_dev": worst_entry, "max_det_rel_dev": worst_det}


@_timed(9, "ODE construction and Wronskian", 5.0)
def criterion_ode(tol: float = 1e-9):
    details = {}
    p1 = CPoly([0.3 + 0.1j, -0.7])
    d1 = build_ode(p1)
    details["d1"] = d1.b[0].allclose(-p1.derivative(), rtol=0, atol=1e-15)
    sq = build_ode(CPoly([0, 0, 1]))
    details["z2"] = sq.b[1].allclose(CPoly([0, -4]), rtol=0, atol=1e-15) and sq.b[0].allclose(
        CPoly([-2, 0, 4]), rtol=0, atol=1e-15
    )
    rng = np.random.default_rng(9)
    worst = 0.0
    for d in range(1, 6):
        for _ in range(4):
            p = CPoly(_unit_square(rng, d + 1))
            worst = max(worst, max(ode_residuals(build_ode(p))))
    details["max_residual"] = worst
    pts = [0.3, 1 + 1j, -0.5j, -1.2 + 0.4j]
    consts = {}
    wr_ok = True
    for d in (1, 2, 3):
        w = wronskian_check(CPoly(_unit_square(rng, d + 1)), pts)
        consts[d] = w["wronskian_constant"]
        expected = 1 if d <= 2 else math.prod(math.factorial(k) for k in range(d))
        wr_ok &= w["consistent"] and abs(w["wronskian_constant"] - expected) <= 1e-12 * expected
    details["wronskian_constants"] = consts
    ok = details["d1"] and details["z2"] and worst <= tol and wr_ok
    return ok, details


def growth_point(p0: NormalizedP0, limit: float = 600.0) -> complex:
    """Largest z = R e^{i pi/d} d^{1/d} with |P0(z)| <= limit."""
    d = p0.d
    u = cmath.exp(1j * math.pi / d) * d ** (1 / d)
    lo, hi = 0.0, 1.0
    while abs(p0(hi * u)) <= limit:
        lo, hi = hi, 2 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if abs(p0(mid * u)) <= limit:
            lo = mid
        else:
            hi = mid
    return lo * u


@_timed(10, "asymptotics along a growth direction", 10.0)
def criterion_asymptotics(tol: float = 0.05):
    rng = np.random.default_rng(10)
    worst = 0.0
    details = {}
    for d in (1, 2, 3, 4):
        for p0 in (NormalizedP0.zero(d), random_p0(rng, d)):
            z = growth_point(p0)
            dp = p0.derivative()
            for j in range(d):
                fj = integrate_segment(p0, j, z).value
                ratio = fj * dp(z) / (z**j * cmath.exp(p0(z)))
                worst = max(worst, abs(ratio - 1))
        details[d] = worst
    return worst <= tol, {"max_abs_ratio_minus_1": worst, "by_degree_cumulative": details}


CRITERIA = [
    criterion_universal_polynomials,
    criterion_gradient_exactness,
    criterion_master_identity,
    criterion_delta_zero_audit,
    criterion_reduction,
    criterion_integrability,
    criterion_torelli,
    criterion_jacobian,
    criterion_ode,
    criterion_asymptotics,
]


def run_all(echo: Callable[[str], None] | None = None) -> list[CriterionResult]:
    out = []
    for crit in CRITERIA:
        res = crit()
        if echo:
            echo(res.line())
        out.append(res)
    return out
