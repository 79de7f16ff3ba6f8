"""Adaptive Gauss-Kronrod integration of t^k e^{P0(t)} along complex paths.

Two path families are supported: the straight segment [0, z] and the ray
from 0 towards infinity in the direction of a d-th root of unity, where the
normalized leading term -t^d/d guarantees super-exponential decay.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact_algebra import NormalizedP0, UsageError, cp_eval

__all__ = [
    "QuadConfig",
    "QuadResult",
    "RayIntegralSpec",
    "ToleranceNotMet",
    "TailBoundFailure",
    "adaptive_gk",
    "integrate_segment",
    "integrate_ray",
    "ray_radius",
    "root_of_unity",
    "gamma_fn",
]


class ToleranceNotMet(ArithmeticError):
    """The subdivision cap was hit before the error target was reached."""

    def __init__(self, message: str, estimate: complex, error: float, nodes_used: int):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
        self.nodes_used = nodes_used


class TailBoundFailure(ArithmeticError):
    """No truncation radius below the search cap makes the tail negligible."""


@dataclass(frozen=True)
class QuadConfig:
    rel_tol: float = 1e-10
    abs_floor: float = 1e-14
    max_subdivisions: int = 60
    tail_tol: float = 1e-16

    def __post_init__(self):
        for name in ("rel_tol", "abs_floor", "tail_tol"):
            if not getattr(self, name) > 0:
                raise UsageError(f"{name} must be positive")
        if self.max_subdivisions < 1:
            raise UsageError("max_subdivisions must be >= 1")

    def to_json(self) -> dict:
        return {
            "rel_tol": self.rel_tol,
            "abs_floor": self.abs_floor,
            "max_subdivisions": self.max_subdivisions,
            "tail_tol": self.tail_tol,
        }


@dataclass(frozen=True)
class QuadResult:
    value: complex
    est_error: float
    nodes_used: int
    radius: float | None = None

    def __complex__(self) -> complex:
        return complex(self.value)

    def to_json(self) -> dict:
        out = {
            "value": [self.value.real, self.value.imag],
            "est_error": self.est_error,
            "nodes_used": self.nodes_used,
        }
        if self.radius is not None:
            out["radius"] = self.radius
        return out


@dataclass(frozen=True)
class RayIntegralSpec:
    p0: NormalizedP0
    power: int
    direction_index: int

    def __post_init__(self):
        if self.power < 0:
            raise UsageError("power must be >= 0")
        if not 1 <= self.direction_index <= self.p0.d:
            raise UsageError(f"direction_index must lie in 1..{self.p0.d}")


def root_of_unity(d: int, l: int) -> complex:
    """omega_l = exp(2 pi i (l-1)/d), with exact values on the axes."""
    k = (l - 1) % d
    if 4 * k % d == 0:
        return (1, 1j, -1, -1j)[4 * k // d]
    t = 2 * math.pi * k / d
    return complex(math.cos(t), math.sin(t))


# 15-point Kronrod extension of the 7-point Gauss-Legendre rule (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WK = np.concatenate([_WGK[:-1], _WGK[::-1]])
_WG15 = np.zeros(15)
for _i, _w in zip((1, 3, 5, 7, 9, 11, 13), (_WG[0], _WG[1], _WG[2], _WG[3], _WG[2], _WG[1], _WG[0])):
    _WG15[_i] = _w
_EPS = np.finfo(float).eps


def _gk15(f, a: np.ndarray, b: np.ndarray):
    """Vectorized GK15 over intervals [a_i, b_i]; QUADPACK error heuristic."""
    half = 0.5 * (b - a)
    center = 0.5 * (a + b)
    x = center[:, None] + half[:, None] * _NODES[None, :]
    fx = f(x)
    kron = fx @ _WK * half
    gauss = fx @ _WG15 * half
    resabs = np.abs(fx) @ _WK * np.abs(half)
    mean = kron / np.where(half == 0, 1, half) * 0.5
    resasc = np.abs(fx - mean[:, None]) @ _WK * np.abs(half)
    err = np.abs(kron - gauss)
    with np.errstate(divide="ignore", invalid="ignore"):
        scaled = resasc * np.minimum(1.0, (200 * err / resasc) ** 1.5)
    err = np.where((resasc != 0) & (err != 0), scaled, err)
    floor = 50 * _EPS * resabs
    err = np.where(resabs > np.finfo(float).tiny / (50 * _EPS), np.maximum(err, floor), err)
    return kron, err


def adaptive_gk(f, a: float, b: float, cfg: QuadConfig, initial: int = 1) -> QuadResult:
    """Adaptively integrate a vectorized complex-valued ``f`` over real [a, b].

    All unresolved intervals of a sweep are bisected together, so each sweep
    is a single batched evaluation of ``f``.  An interval is resolved once
    its error is below its length-proportional share of the target.
    """
    if a == b:
        return QuadResult(0j, 0.0, 0)
    edges = np.linspace(a, b, initial + 1)
    lo, hi = edges[:-1], edges[1:]
    depth = 0
    done_val = 0j
    done_err = 0.0
    nodes = 0
    span = abs(b - a)
    while True:
        vals, errs = _gk15(f, lo, hi)
        nodes += 15 * len(lo)
        total = done_val + vals.sum()
        target = max(cfg.rel_tol * abs(total), cfg.abs_floor)
        share = target * np.abs(hi - lo) / span
        bad = errs > share
        if not np.all(np.isfinite(vals)):
            raise ToleranceNotMet("non-finite integrand values", complex(total), math.inf, nodes)
        if not bad.any() or depth >= cfg.max_subdivisions:
            total_err = done_err + float(errs.sum())
            result = done_val + complex(vals.sum())
            if total_err > target:
                raise ToleranceNotMet(
                    f"error {total_err:.3g} exceeds target {target:.3g} after "
                    f"{depth} subdivision levels",
                    result, total_err, nodes,
                )
            return QuadResult(result, total_err, nodes)
        done_val += complex(vals[~bad].sum())
        done_err += float(errs[~bad].sum())
        lo, hi = lo[bad], hi[bad]
        mid = 0.5 * (lo + hi)
        lo, hi = np.concatenate([lo, mid]), np.concatenate([mid, hi])
        order = np.argsort(lo, kind="stable")
        lo, hi = lo[order], hi[order]
        depth += 1


def _power_exp(p0: NormalizedP0, power: int):
    coeffs = p0.poly()

    def g(t):
        return t**power * np.exp(cp_eval(coeffs, t)) if power else np.exp(cp_eval(coeffs, t))

    return g


def integrate_segment(
    p0: NormalizedP0, power: int, z_end: complex, cfg: QuadConfig = QuadConfig()
) -> QuadResult:
    """int_0^{z_end} t^power e^{P0(t)} dt along the straight segment."""
    if power < 0:
        raise UsageError("power must be >= 0")
    z_end = complex(z_end)
    if z_end == 0:
        return QuadResult(0j, 0.0, 0)
    g = _power_exp(p0, power)
    return adaptive_gk(lambda s: g(s * z_end) * z_end, 0.0, 1.0, cfg)


def _log_bound(p0: NormalizedP0, power: int, r: float) -> float:
    """Upper bound for log|t^power e^{P0(t)}| on |t| = r along any decay ray."""
    d = p0.d
    s = -(r**d) / d + sum(abs(a) * r**j for j, a in enumerate(p0.a))
    if power:
        s += power * math.log(r)
    return s


def ray_radius(p0: NormalizedP0, power: int, tail_tol: float) -> float:
    """Truncation radius: last crossing of the log-bound with log(tail_tol), +20%."""
    d = p0.d
    target = math.log(tail_tol)
    r_cap = 10 * (d * math.log(1 / tail_tol)) ** (1 / d) + 50 if tail_tol < 1 else 60.0
    if _log_bound(p0, power, r_cap) > target:
        raise TailBoundFailure(
            f"no truncation radius <= {r_cap:.4g} bounds the tail by {tail_tol:g}"
        )
    # scan down from the cap for the last point still above the target
    grid = np.linspace(r_cap, 0.0, 2001)
    lo = None
    hi = r_cap
    for r in grid[1:]:
        if r <= 0 or _log_bound(p0, power, float(r)) > target:
            lo = max(float(r), 0.0)
            break
        hi = float(r)
    if lo is None:
        lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid <= 0 or _log_bound(p0, power, mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-12 * max(1.0, hi):
            break
    return max(1.2 * hi, 1.0)


def integrate_ray(spec: RayIntegralSpec, cfg: QuadConfig = QuadConfig()) -> QuadResult:
    """int_0^{+inf . omega_l} t^power e^{P0(t)} dt on the straight ray."""
    p0 = spec.p0
    omega = root_of_unity(p0.d, spec.direction_index)
    radius = ray_radius(p0, spec.power, cfg.tail_tol)
    g = _power_exp(p0, spec.power)
    res = adaptive_gk(lambda r: g(r * omega) * omega, 0.0, radius, cfg, initial=4)
    return QuadResult(res.value, res.est_error, res.nodes_used, radius)


# Lanczos approximation, g = 7, nine terms.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x: float) -> float:
    """Gamma function for real x > 0 (Lanczos, about 15 significant digits)."""
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise ValueError(f"gamma_fn domain is x > 0, got {x!r}")
    if x < 1.0:
        return gamma_fn(x + 1.0) / x
    y = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (y + i)
    t = y + _LANCZOS_G + 0.5
    log_val = 0.5 * math.log(2 * math.pi) + (y + 0.5) * math.log(t) - t + math.log(acc)
    if log_val > 709.0:
        raise OverflowError(f"gamma_fn({x}) overflows double precision")
    return math.exp(log_val)
