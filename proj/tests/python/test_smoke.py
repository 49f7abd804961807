import numpy as np
import pytest

import peds


def test_mean_field_projector():
    om = peds.Projector.uniform_mean_field(4)
    assert om.rank == 1
    np.testing.assert_allclose(om.matrix, np.full((4, 4), 0.25))
    assert peds.idempotence_error(om.matrix) < 1e-15


def test_gram_projector_matches_numpy():
    b = np.random.default_rng(0).uniform(size=(3, 8))
    om = peds.Projector.gram(b)
    expect = b.T @ np.linalg.solve(b @ b.T, b)
    np.testing.assert_allclose(om.matrix, expect, atol=1e-12)
    with pytest.raises(peds.SingularGramError):
        peds.Projector.gram(np.ones((2, 5)))


def test_logistic_embedding_converges():
    t = peds.TargetSystem(1)
    t.add_monomial(0, 1.0, [1]).add_monomial(0, -1.0, [2])
    sys = peds.PedsSystem(t, peds.Projector.uniform_mean_field(2), alpha=1.0)
    times, xt, final = peds.integrate(sys, np.array([[0.3], [0.1]]), dt=0.01, steps=1500, record_stride=100)
    assert times[-1] == pytest.approx(15.0)
    assert abs(xt[-1, 0] - 1.0) < 1e-4
    assert np.ptp(final) < 1e-4


def test_jacobian_spectrum():
    sys = peds.PedsSystem(peds.potential2d_gradient(), peds.Projector.uniform_mean_field(3), alpha=0.3)
    rep = peds.jacobian(sys, np.array([0.0, 1.0]))
    assert rep["classification"] == "Stable"
    eig = sorted(e.real for e in rep["eigenvalues"])
    v = np.exp(-0.25)
    np.testing.assert_allclose(eig, sorted([-2 * v, -v] + [-0.3] * 4), atol=1e-10)
    fd = peds.jacobian_fd(sys, sys.uniform_state(np.array([0.0, 1.0])))
    np.testing.assert_allclose(fd, rep["matrix"], atol=1e-6)


def test_scenario_and_verify():
    res = peds.run_scenario("potential2d", {"n": "10"})
    assert res["exit_code"] == 0
    assert all(c["status"] == "PASS" for c in res["checks"])
    names = {c["name"] for c in peds.verify()}
    assert "projector.idempotence" in names
    with pytest.raises(peds.ConfigError):
        peds.run_scenario("potential2d", {"colour": "red"})
