import math

import numpy as np
import pytest

from ramificant.exact_algebra import CPoly, UsageError
from ramificant.ode import apply_operator, build_ode, ode_residuals, q_table, wronskian_check
from ramificant.quadrature import QuadConfig, integrate_segment

from conftest import disc_p0, square


def test_degree_one():
    p = CPoly([0.2, -1.5 + 0.5j])
    ode = build_ode(p)
    assert ode.order == 1
    assert ode.b[0].allclose(-p.derivative(), atol=1e-15)


def test_z_squared():
    ode = build_ode(CPoly([0, 0, 1]))
    assert ode.b[1] == CPoly([0, -4])
    assert ode.b[0] == CPoly([-2, 0, 4])


def test_general_degree_two(rng):
    p = CPoly(square(rng, 3))
    dp, ddp = p.derivative(), p.derivative().derivative()
    ode = build_ode(p)
    assert ode.b[1].allclose(-2 * dp, atol=1e-14)
    assert ode.b[0].allclose(dp * dp - ddp, atol=1e-14)


def test_q_table_basics(rng):
    p = CPoly(square(rng, 4))
    t = q_table(p)
    dp = p.derivative()
    for n in range(4):
        assert t[(n, n)] == CPoly([1])
    assert t[(0, 1)].allclose(dp, atol=1e-15)
    assert t[(0, 2)].allclose(dp.derivative() + dp * dp, atol=1e-14)


def test_q_table_positivity(rng):
    for d in range(1, 6):
        p = CPoly(list(rng.uniform(0, 2, d + 1)))
        for poly in q_table(p).values():
            assert all(c.real >= 0 and c.imag == 0 for c in poly.coeffs)


@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_residual_random(d, rng):
    for _ in range(5):
        p = CPoly(square(rng, d) + [complex(*rng.uniform(0.5, 1.5, 2))])
        ode = build_ode(p)
        assert max(ode_residuals(ode)) <= 1e-9
        # z^d e^{P0} is not a solution
        assert apply_operator(ode, CPoly.monomial(d)).norm() > 1e-6


def test_rejects_constant():
    with pytest.raises(UsageError):
        build_ode(CPoly([3]))


def _cauchy_derivs(f, z0, order, radius=0.4, n=48):
    pts = z0 + radius * np.exp(2j * np.pi * np.arange(n) / n)
    vals = np.array([f(z) for z in pts])
    out = []
    for m in range(order + 1):
        c = np.mean(vals * np.exp(-2j * np.pi * m * np.arange(n) / n)) / radius**m
        out.append(c * math.factorial(m))
    return out


@pytest.mark.parametrize("d", [2, 3])
def test_order_d_plus_one_lift(d, rng):
    # y^(d+1) + b_{d-1} y^(d) + ... + b_0 y' annihilates 1 and every F_k
    p0 = disc_p0(rng, d)
    ode = build_ode(p0.poly())
    cfg = QuadConfig(rel_tol=1e-13)
    z0 = 0.3 - 0.2j
    for k in range(d):
        derivs = _cauchy_derivs(lambda z: integrate_segment(p0, k, z, cfg).value, z0, d + 1)
        lhs = derivs[d + 1] + sum(ode.b[j](z0) * derivs[j + 1] for j in range(d))
        scale = max(abs(derivs[d + 1]), max(abs(ode.b[j](z0) * derivs[j + 1]) for j in range(d)))
        assert abs(lhs) <= 1e-7 * scale
        assert abs(derivs[1] - z0**k * np.exp(p0(z0))) <= 1e-9


@pytest.mark.parametrize("d,c", [(1, 1), (2, 1), (3, 2), (4, 12), (5, 288)])
def test_wronskian_constants(d, c, rng):
    p = CPoly(square(rng, d) + [1.0])
    w = wronskian_check(p, [0.1, 0.5 + 0.5j, -0.3j])
    assert w["wronskian_constant"] == pytest.approx(c, rel=1e-12)
    assert w["consistent"]
    assert w["superfactorial"] == c


def test_wronskian_needs_points():
    with pytest.raises(UsageError):
        wronskian_check(CPoly([0, 1]), [0.5])


def test_json():
    data = build_ode(CPoly([0, 0, 1])).to_json()
    assert data["order"] == 2 and data["b"][1] == [[0.0, 0.0], [-4.0, 0.0]]
