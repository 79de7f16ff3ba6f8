import cmath
import json
import math

import numpy as np
import pytest

from ramificant.exact_algebra import NormalizedP0, UsageError
from ramificant.periods import (
    PeriodMatrix,
    SingularMatrix,
    jacobian_check,
    period_matrix,
    ramificant_det,
    recover_coefficients,
    row_identity_residual,
    separation_check,
    verify_identity,
)

from conftest import disc_p0

S = math.sqrt(math.pi / 2)


def test_matrix_examples():
    assert np.allclose(period_matrix(NormalizedP0.zero(1)).entries, [[1]], atol=1e-13)
    m = period_matrix(NormalizedP0.zero(2))
    assert np.allclose(m.entries, [[S, 1], [-S, 1]], atol=1e-12)
    assert m.omega(1, 2) == pytest.approx(-S)
    assert m.est_error > 0


def test_entries_read_only():
    m = period_matrix(NormalizedP0.zero(2))
    with pytest.raises(ValueError):
        m.entries[0, 0] = 0


def test_det_examples():
    assert ramificant_det(period_matrix(NormalizedP0.zero(1))) == pytest.approx(1)
    assert ramificant_det(period_matrix(NormalizedP0.zero(2))) == pytest.approx(2 * S, rel=1e-12)
    assert ramificant_det(np.eye(4)) == 1
    perm = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 2]])
    assert ramificant_det(perm) == pytest.approx(-2)


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_row_identity_and_nonvanishing(d, rng):
    for _ in range(3):
        p0 = disc_p0(rng, d)
        m = period_matrix(p0)
        assert row_identity_residual(m, p0) <= 10 * m.est_error
        assert abs(ramificant_det(m)) > 1e3 * m.est_error


def test_verify_identity_examples(rng):
    rep = verify_identity(NormalizedP0.zero(3))
    assert rep["ratio_numeric"] == pytest.approx(1, abs=1e-12)
    assert rep["exp_pi"] == 1 and rep["rel_err"] < 1e-12
    rep = verify_identity(NormalizedP0(1, (0.4 - 0.2j,)))
    assert rep["rel_err"] <= 1e-9
    for _ in range(3):
        assert verify_identity(disc_p0(rng, 3))["rel_err"] <= 1e-6
    assert rep["paper_constant"] == pytest.approx(1)


def test_recover_examples(rng):
    a0 = 0.3 + 0.4j
    rec = recover_coefficients(np.array([[cmath.exp(a0)]]))
    assert rec.exp_a0 == pytest.approx(cmath.exp(a0)) and rec.a == ()
    rec = recover_coefficients(period_matrix(NormalizedP0(2, (0.1, 0.3))))
    assert rec.a[0] == pytest.approx(0.3, abs=1e-9)
    assert rec.exp_a0 == pytest.approx(math.exp(0.1), rel=1e-9)
    assert rec.log_a0 == pytest.approx(0.1, abs=1e-9)
    p0 = disc_p0(rng, 3)
    rec = recover_coefficients(period_matrix(p0))
    assert max(abs(x - y) for x, y in zip(rec.a, p0.a[1:])) <= 1e-6
    assert rec.residual <= 1e-12


def test_recover_singular():
    with pytest.raises(SingularMatrix):
        recover_coefficients(np.array([[1, 2], [2, 4]], dtype=complex))
    with pytest.raises(SingularMatrix):
        recover_coefficients(np.zeros((2, 2)))


def test_jacobian_examples(rng):
    rep = jacobian_check(NormalizedP0(1, (0.2,)))
    assert rep["jacobian"][0, 0] == pytest.approx(math.exp(0.2), rel=1e-7)
    rep = jacobian_check(NormalizedP0.zero(2), 1e-4)
    assert rep["max_entry_rel_dev"] <= 1e-4
    for d in (2, 3):
        rep = jacobian_check(disc_p0(rng, d))
        assert rep["det_rel_dev"] <= 1e-3
    with pytest.raises(UsageError):
        jacobian_check(NormalizedP0.zero(2), 0.1)


def test_separation():
    m = period_matrix(NormalizedP0.zero(2))
    rep = separation_check(m)
    assert rep["min_row_gap"] == pytest.approx(2 * S, rel=1e-12)
    assert rep["separated"]
    assert separation_check(period_matrix(NormalizedP0.zero(1)))["min_row_gap"] == math.inf


def test_separation_random(rng):
    for _ in range(3):
        m = period_matrix(disc_p0(rng, 3))
        rep = separation_check(m)
        assert rep["min_row_gap"] > 10 * m.est_error


def test_json_round_trips(rng):
    m = period_matrix(disc_p0(rng, 3))
    back = PeriodMatrix.from_json(json.loads(json.dumps(m.to_json())))
    assert np.array_equal(back.entries, m.entries) and back.est_error == m.est_error
    rec = recover_coefficients(m)
    data = json.loads(json.dumps(rec.to_json()))
    assert "a0_mod_2pi_i" in data
    assert complex(*data["exp_a0"]) == rec.exp_a0


def test_thread_count_env(monkeypatch):
    from ramificant.periods import thread_count

    monkeypatch.setenv("RAMIFICANT_THREADS", "1")
    assert thread_count() == 1
    p0 = NormalizedP0(2, (0.1, 0.2j))
    serial = period_matrix(p0).entries
    monkeypatch.setenv("RAMIFICANT_THREADS", "4")
    assert np.array_equal(period_matrix(p0).entries, serial)
