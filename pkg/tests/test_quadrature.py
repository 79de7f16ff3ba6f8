import cmath
import math

import numpy as np
import pytest

from ramificant.exact_algebra import NormalizedP0, UsageError
from ramificant.quadrature import (
    QuadConfig,
    RayIntegralSpec,
    TailBoundFailure,
    ToleranceNotMet,
    adaptive_gk,
    gamma_fn,
    integrate_ray,
    integrate_segment,
    ray_radius,
    root_of_unity,
)

from conftest import disc_p0

CFG = QuadConfig()


def test_segment_examples():
    assert integrate_segment(NormalizedP0.zero(1), 0, 0, CFG).value == 0
    v = integrate_segment(NormalizedP0.zero(1), 0, 1.0, CFG).value
    assert v == pytest.approx(1 - math.exp(-1), rel=1e-12)
    v = integrate_segment(NormalizedP0.zero(2), 1, 2.0, CFG).value
    assert v == pytest.approx(1 - math.exp(-2), rel=1e-12)


def test_segment_error_estimate_within_target():
    res = integrate_segment(NormalizedP0(3, (0.2, 0.1j, -0.3)), 2, 1.5 + 1j, CFG)
    assert res.est_error <= max(CFG.rel_tol * abs(res.value), CFG.abs_floor)
    assert res.nodes_used > 0


@pytest.mark.parametrize("l", [1, 2])
def test_ray_d2_power1(l):
    v = integrate_ray(RayIntegralSpec(NormalizedP0.zero(2), 1, l), CFG).value
    assert v == pytest.approx(1, abs=1e-12)


def test_ray_d2_power0():
    v = integrate_ray(RayIntegralSpec(NormalizedP0.zero(2), 0, 1), CFG).value
    assert v == pytest.approx(math.sqrt(math.pi / 2), rel=1e-12)


def test_ray_d3_direction2():
    v = integrate_ray(RayIntegralSpec(NormalizedP0.zero(3), 0, 2), CFG).value
    w = cmath.exp(2j * math.pi / 3)
    assert abs(v - w * 3 ** (-2 / 3) * gamma_fn(1 / 3)) < 1e-11


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_origin_values_follow_gamma(d):
    # Omega_{kl}(0) = omega_l^k d^{k/d-1} Gamma(k/d), power = k - 1
    p0 = NormalizedP0.zero(d)
    for l in range(1, d + 1):
        for k in range(1, d + 1):
            v = integrate_ray(RayIntegralSpec(p0, k - 1, l), CFG).value
            expect = root_of_unity(d, l) ** k * d ** (k / d - 1) * gamma_fn(k / d)
            assert abs(v - expect) <= 1e-10 * abs(expect)


def test_gamma_values():
    assert gamma_fn(1) == pytest.approx(1, rel=1e-14)
    assert gamma_fn(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)
    assert gamma_fn(1 / 3) == pytest.approx(2.678938534707747, rel=1e-12)
    for x in (0.1, 0.25, 0.7, 1.5, 3.3, 7.0, 20.5):
        assert gamma_fn(x) == pytest.approx(math.gamma(x), rel=1e-12)


def test_gamma_one_third_by_quadrature():
    # substitute u = s^3 to remove the singularity: int 3 e^{-s^3} ds
    res = adaptive_gk(lambda s: 3 * np.exp(-s**3) + 0j, 0.0, 12.0, CFG, initial=4)
    assert res.value.real == pytest.approx(gamma_fn(1 / 3), rel=1e-11)


def test_gamma_domain():
    for x in (0, -1, -0.5):
        with pytest.raises(ValueError):
            gamma_fn(x)


def test_path_independence(rng):
    for _ in range(10):
        d = int(rng.integers(1, 5))
        p0 = disc_p0(rng, d)
        z, w = (complex(*rng.uniform(-1.5, 1.5, 2)) for _ in range(2))
        direct = integrate_segment(p0, 1, z, CFG).value
        leg1 = integrate_segment(p0, 1, w, CFG).value
        poly = p0.poly()
        # w -> z along the straight segment
        leg2 = adaptive_gk(lambda s: (w + s * (z - w)) * np.exp(poly(w + s * (z - w))) * (z - w), 0.0, 1.0, CFG).value
        assert abs(direct - (leg1 + leg2)) <= 10 * CFG.rel_tol * max(1.0, abs(direct))


def test_tail_doubling(rng):
    from ramificant.quadrature import _power_exp

    for d in (2, 3, 4):
        p0 = disc_p0(rng, d)
        for power in range(d):
            spec = RayIntegralSpec(p0, power, 1)
            res = integrate_ray(spec, CFG)
            g = _power_exp(p0, power)
            more = adaptive_gk(lambda r: g(r + 0j), res.radius, 2 * res.radius, CFG)
            assert abs(more.value) < 10 * CFG.tail_tol * max(1.0, abs(res.value))


def test_radius_bound_holds():
    p0 = NormalizedP0(3, (0.4, -0.3j, 0.2))
    r = ray_radius(p0, 2, 1e-16)
    assert -(r**3) / 3 + 0.4 + 0.3 * r + 0.2 * r * r + 2 * math.log(r) < math.log(1e-16)


def test_tail_bound_failure():
    with pytest.raises(TailBoundFailure):
        integrate_ray(RayIntegralSpec(NormalizedP0(2, (0, 500.0)), 0, 1), CFG)


def test_tolerance_not_met_payload():
    cfg = QuadConfig(rel_tol=1e-14, abs_floor=1e-300, max_subdivisions=1)
    with pytest.raises(ToleranceNotMet) as info:
        adaptive_gk(lambda x: np.sqrt(np.abs(x - 0.3)) + 0j, 0.0, 1.0, cfg)
    err = info.value
    assert err.estimate == pytest.approx(0.5 * (2 / 3) * (0.3**1.5 + 0.7**1.5) * 2, rel=1e-2)
    assert err.error > 0 and err.nodes_used > 0


def test_ray_spec_validation():
    with pytest.raises(UsageError):
        RayIntegralSpec(NormalizedP0.zero(2), -1, 1)
    with pytest.raises(UsageError):
        RayIntegralSpec(NormalizedP0.zero(2), 0, 3)
    with pytest.raises(UsageError):
        QuadConfig(rel_tol=0)


def test_roots_of_unity():
    for d in range(1, 9):
        for l in range(1, d + 1):
            w = root_of_unity(d, l)
            assert abs(w**d - 1) < 1e-14
    assert root_of_unity(4, 2) == 1j


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_asymptotics_growth_direction(d, rng):
    from ramificant.acceptance import growth_point

    p0 = disc_p0(rng, d, 0.3)
    z = growth_point(p0)
    dp = p0.derivative()
    for j in range(d):
        f = integrate_segment(p0, j, z, CFG).value
        ratio = f * dp(z) / (z**j * cmath.exp(p0(z)))
        assert abs(ratio - 1) <= 0.05
