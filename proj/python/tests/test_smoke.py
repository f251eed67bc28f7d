import json
import math

import numpy as np
import pytest

import axeuler


def test_h_closed_matches_quadrature():
    for s in (0.0, 0.01, 0.5, 0.9):
        assert axeuler.h_closed(s) == pytest.approx(axeuler.h_quad(s, 64), rel=1e-12, abs=1e-15)
    assert axeuler.h_closed(0.5) == pytest.approx(0.9388841, rel=1e-7)
    with pytest.raises(ValueError):
        axeuler.h_closed(1.0)


def test_g_kernel():
    assert axeuler.g_kernel(1, 0, 2, 0) == pytest.approx(1 / math.sqrt(5), rel=1e-15)


def test_indicator_quasinorm():
    assert axeuler.lorentz_quasinorm([1.0, 1.0], [1.0, 3.0], 2.0, 1.0) == pytest.approx(4.0, rel=1e-12)
    weak = axeuler.lorentz_quasinorm([1.0], [4.0], 2.0, math.inf)
    assert weak == pytest.approx(2.0, rel=1e-12)


def test_grid_and_fields():
    g = axeuler.CylGrid(3.0, -3.0, 3.0, 64, 64)
    assert g.nr == 64 and g.hr == pytest.approx(3 / 64)
    w = axeuler.gaussian_vorticity(g)
    assert w.shape == (64, 64)
    assert np.allclose(w, -w[:, ::-1], atol=1e-15)
    with pytest.raises(ValueError):
        axeuler.field_quasinorm(g, w[:, :10], 2.0, 1.0)


def test_reconstruction_close_to_closed_form():
    g = axeuler.CylGrid(3.0, -3.0, 3.0, 64, 64)
    w = axeuler.gaussian_vorticity(g)
    targets = np.array([[0.5, 0.3], [1.0, -0.6], [1.7, 0.2]])
    ur, uz = axeuler.reconstruct(g, w, targets, epsilon=max(g.hr, g.hz))
    exact = np.array([axeuler.gaussian_velocity(r, z) for r, z in targets])
    scale = np.abs(exact).max()
    assert np.abs(np.array(ur) - exact[:, 0]).max() / scale < 0.15
    assert np.abs(np.array(uz) - exact[:, 1]).max() / scale < 0.15


def test_decay_check_passes_on_gaussian():
    g = axeuler.CylGrid(6.0, -6.0, 6.0, 48, 96)
    report = axeuler.decay_check(g, axeuler.gaussian_vorticity(g))
    assert report["passed"]
    assert math.isfinite(report["l21"])


def test_simulation_conserves_l21():
    g = axeuler.CylGrid(2.5, -2.0, 2.0, 12, 20)
    rows = axeuler.simulate("single-ring", g, dt=0.1, t_end=0.3, envelope_constant=0.16)
    assert len(rows) == 4
    assert all(r["l21"] == rows[0]["l21"] for r in rows)
    with pytest.raises(ValueError):
        axeuler.simulate("no-such-preset", g, dt=0.1, t_end=0.3)


def test_verify_json():
    report = json.loads(axeuler.verify("kernel-identity", resolution=64, corpus_size=1, corpus_resolution=16))
    assert len(report["checks"]) == 1
    assert report["passed"]
    assert report["checks"][0]["status"] == "pass"
