import math

import numpy as np
import pytest

import srgrobust as sr


def first_order(k=1.0):
    return sr.StateSpace(np.array([[-1.0]]), np.array([[1.0]]), np.array([[k]]), np.array([[0.0]]))


def test_disc_verdict_half_identity():
    g = 0.5 * np.eye(2, dtype=complex)
    assert sr.mrn_check_named(g, "disc", gamma=1.0)["holds"]
    assert not sr.mrn_check_named(g, "disc", gamma=3.0)["holds"]


def test_unknown_shape_raises():
    with pytest.raises(sr.InputError):
        sr.mrn_check_named(np.eye(2, dtype=complex), "blob")


def test_dw_sample_shape_and_paraboloid():
    g = np.array([[1.0, 2.0j], [0.5, -1.0]])
    cloud = sr.dw_sample(g, n_random=0, n_directions=256, seed=3)
    assert cloud.shape == (256, 3)
    assert np.all(cloud[:, 2] >= cloud[:, 0] ** 2 + cloud[:, 1] ** 2 - 1e-9)


def test_hinf_first_order():
    assert sr.hinf_norm(first_order()) == pytest.approx(1.0, abs=1e-5)


def test_rs_disc():
    assert sr.rs_check_named(first_order(0.5), "disc", gamma=1.0, grid="log:1e-2:1e2:40")["robustly_stable"]


def test_profile_round_trip():
    p = sr.compute_profile(first_order(), n_theta=4, n_gamma=4, err=1e-2, threads=1)
    assert len(p.slices) == 4
    assert p.hinf == pytest.approx(1.0, abs=1e-5)
    for s in p.slices:
        assert all(0.0 <= f <= math.pi for f in s.phi)
    q = sr.profile_from_csv(p.to_csv())
    assert p.same_surface(q)
    assert p.same_surface(sr.profile_from_json(p.to_json()))
