import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ramificant.exact_algebra import (
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
    parse_complex,
)

X = [MultiPoly.variable(3, i) for i in range(3)]


def test_monomial_product():
    assert mp_mul(X[0], X[0]) == MultiPoly(3, {(2, 0, 0): 1})


def test_additive_inverse_is_empty():
    p = mp_add(mp_scale(X[0], 2), mp_scale(X[0], -2))
    assert p.is_zero() and len(p.terms) == 0


def test_scalar_distributes():
    p = mp_scale(X[1] + Fraction(1, 2) * X[2], 2)
    assert p == 2 * X[1] + X[2]


def test_mismatched_vars():
    with pytest.raises(UsageError):
        mp_add(X[0], MultiPoly.variable(2, 0))


def test_partials_from_known_polys():
    x0, x1 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    assert mp_partial(2 * x0 + Fraction(1, 2) * x1**2, 1) == x1
    pi3 = 3 * X[0] + 2 * X[1] * X[2] + Fraction(4, 3) * X[2] ** 3
    assert mp_partial(pi3, 2) == 2 * X[1] + 4 * X[2] ** 2
    assert mp_partial(MultiPoly.constant(3, 7), 0).is_zero()


def test_partial_index_out_of_range():
    with pytest.raises(UsageError):
        mp_partial(X[0], 3)
    with pytest.raises(UsageError):
        mp_partial(X[0], -1)


def test_string_and_json():
    x0, x1 = MultiPoly.variable(2, 0), MultiPoly.variable(2, 1)
    p = 2 * x0 + Fraction(1, 2) * x1**2
    assert str(p) == "1/2*X1^2 + 2*X0"
    data = p.to_json()
    assert data == [{"exp": [0, 2], "coef": "1/2"}, {"exp": [1, 0], "coef": "2/1"}]
    assert MultiPoly.from_json(json.loads(json.dumps(data))) == p


def test_evaluate_complex():
    p = X[0] * X[1] + Fraction(1, 2) * X[2] ** 2
    assert p(1j, 2, 2) == pytest.approx(2 + 2j)


coef = st.fractions(min_value=-5, max_value=5, max_denominator=6)
mono = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(mono, coef, max_size=5).map(lambda t: MultiPoly(3, t))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + q == q + p
    assert p * q == q * p
    assert p - p == MultiPoly.zero(3)


@settings(max_examples=60, deadline=None)
@given(polys)
def test_mixed_partials_commute(p):
    for j in range(3):
        for k in range(3):
            assert p.partial(j).partial(k) == p.partial(k).partial(j)


def test_cp_divmod_examples():
    q, r = cp_divmod(CPoly([0, 0, 0, 1]), CPoly([0, -1]))
    assert q == CPoly([0, 0, -1]) and r.is_zero()
    q, r = cp_divmod(CPoly([0, 0, 1]), CPoly([1, -1]))
    assert q == CPoly([-1, -1]) and r == CPoly([1])
    p = CPoly([1 + 2j, -3, 0.5j])
    q, r = cp_divmod(p, p)
    assert q.allclose(CPoly([1])) and r.norm() < 1e-15


def test_cp_divmod_by_zero():
    with pytest.raises(ZeroDivisionError):
        cp_divmod(CPoly([1, 2]), CPoly())


cnum = st.complex_numbers(max_magnitude=10, allow_nan=False, allow_infinity=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(cnum, min_size=1, max_size=8), st.lists(cnum, min_size=1, max_size=4))
def test_cp_divmod_round_trip(num, den):
    den[-1] = den[-1] if abs(den[-1]) > 0.5 else 1.0
    n, dd = CPoly(num), CPoly(den)
    q, r = cp_divmod(n, dd)
    assert r.degree < dd.degree or r.is_zero()
    back = q * dd + r
    scale = max(n.norm(), (q * dd).norm(), 1.0)
    assert (back - n).norm() <= 1e-12 * scale


def test_dyadic_divmod_exact():
    num = CPoly([0.5, -1.25, 3, 0.75])
    den = CPoly([0.5, -1])
    q, r = cp_divmod(num, den)
    assert q * den + r == num


def test_derivative_and_eval():
    a1, a0 = 0.3 - 0.1j, 0.2
    p = CPoly([a0, a1, -0.5])
    assert cp_derivative(p) == CPoly([a1, -1])
    assert cp_eval(CPoly([0, 0, 1]), 1 + 1j) == pytest.approx(2j)
    assert cp_derivative(CPoly([4.0])).is_zero()


def test_cpoly_json_round_trip():
    p = CPoly([1 + 2j, 0, -0.25j])
    assert CPoly.from_json(json.loads(json.dumps(p.to_json()))) == p


def test_normalized_p0():
    p = NormalizedP0(3, (0.1, 0.2j, -0.3))
    assert p.poly().coef(3) == pytest.approx(-1 / 3)
    assert p.derivative().coef(2) == -1
    assert p.exact_form_coefficients() == [0.2j, -0.6, -1]
    assert NormalizedP0.from_json(json.dumps(p.to_json())) == p
    with pytest.raises(UsageError):
        NormalizedP0(2, (0.1,))
    with pytest.raises(UsageError):
        NormalizedP0(0, ())


def test_parse_complex_rejects_nonfinite():
    assert parse_complex([1, 2]) == 1 + 2j
    with pytest.raises(UsageError):
        parse_complex([float("nan"), 0])
