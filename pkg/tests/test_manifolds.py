"""Model geometries: round sphere, Euclidean curvature fields, and the
admissibility bookkeeping of peak configurations."""

import math

import numpy as np
import pytest

from peakforge import (CURVATURE_FAMILIES, EuclideanModel, ModelConfigError,
                       PeakConfiguration, SphereModel, admissibility_report,
                       euclidean_model, model_from_config)


def random_sphere_points(model, rng, count):
    pts = rng.standard_normal((count, model.ambient_dim))
    return model.R * pts / np.linalg.norm(pts, axis=1, keepdims=True)


# --------------------------------------------------------------------- sphere

def test_sphere_distance_axioms():
    model = SphereModel(n=3, R=1.7)
    rng = np.random.default_rng(5)
    xs = random_sphere_points(model, rng, 300)
    for x, y, z in zip(xs[:100], xs[100:200], xs[200:]):
        dxy = model.distance(x, y)
        assert dxy == model.distance(y, x)
        assert 0.0 <= dxy <= math.pi * model.R + 1e-12
        assert model.distance(x, z) <= dxy + model.distance(y, z) + 1e-12
    x = xs[0]
    assert model.distance(x, x) == 0.0
    assert model.distance(x, -x) == pytest.approx(math.pi * model.R, rel=1e-14)


def test_sphere_distance_stable_near_coincidence():
    model = SphereModel(n=2, R=1.0)
    x = np.array([0.0, 0.0, 1.0])
    y = np.array([1e-9, 0.0, 1.0])
    y /= np.linalg.norm(y)
    d = model.distance(x, y)
    assert d == pytest.approx(1e-9, rel=1e-6)


def test_tangent_basis_orthonormal():
    model = SphereModel(n=3, R=2.0)
    rng = np.random.default_rng(6)
    for x in random_sphere_points(model, rng, 10):
        B = model.tangent_basis(x)
        assert B.shape == (3, 4)
        assert np.allclose(B @ B.T, np.eye(3), atol=1e-12)
        assert np.allclose(B @ (x / np.linalg.norm(x)), 0.0, atol=1e-12)


def test_offset_point_is_exponential_map():
    model = SphereModel(n=2, R=1.0)
    rng = np.random.default_rng(8)
    for x in random_sphere_points(model, rng, 5):
        B = model.tangent_basis(x)
        v = B[0]
        for t in (0.3, 1.0, 2.5):
            y = model.offset_point(x, t * v)
            assert np.linalg.norm(y) == pytest.approx(model.R, rel=1e-14)
            assert model.distance(x, y) == pytest.approx(t, rel=1e-12)


def test_offset_point_validation():
    model = SphereModel(n=2, R=1.0)
    x = np.array([0.0, 0.0, 1.0])
    v = model.tangent_basis(x)[0]
    with pytest.raises(ValueError):
        model.offset_point(x, math.pi * v)        # cut locus
    with pytest.raises(ValueError):
        model.offset_point(x, x)                  # not tangent


def test_sphere_validate_point():
    model = SphereModel(n=2, R=1.0)
    with pytest.raises(ValueError):
        model.validate_point(np.array([1.0, 0.0]))       # wrong ambient dim
    with pytest.raises(ValueError):
        model.validate_point(np.array([0.0, 0.0, 1.2]))  # off the sphere


def test_sphere_curvature():
    assert SphereModel(n=2, R=1.0).scalar_curvature(
        np.array([0.0, 0.0, 1.0])) == pytest.approx(2.0)
    assert SphereModel(n=3, R=2.0).scalar_curvature(
        np.array([0.0, 0.0, 0.0, 2.0])) == pytest.approx(6.0 / 4.0)


# ------------------------------------------------------------------ euclidean

def test_curvature_families():
    assert set(CURVATURE_FAMILIES) == {"constant", "quadratic", "double_well"}
    flat = euclidean_model(2, family="constant", s0=3.0)
    assert flat.scalar_curvature(np.array([5.0, -2.0])) == 3.0

    well = euclidean_model(2, family="quadratic", s0=6.0,
                           x0=np.array([1.0, 0.0]))
    assert well.scalar_curvature(np.array([1.0, 0.0])) == pytest.approx(6.0)
    assert well.scalar_curvature(np.array([1.0, 2.0])) == pytest.approx(10.0)

    ring = euclidean_model(2, family="double_well", s0=1.0,
                           x0=np.zeros(2), d=1.5)
    # minima on the circle |x| = d, local maximum at the origin
    assert ring.scalar_curvature(np.array([1.5, 0.0])) == pytest.approx(1.0)
    assert ring.scalar_curvature(np.zeros(2)) == pytest.approx(1.0 + 1.5 ** 4)


def test_euclidean_geometry():
    model = euclidean_model(3, family="constant", s0=0.0)
    x, y = np.array([1.0, 0.0, 0.0]), np.array([1.0, 3.0, 4.0])
    assert model.distance(x, y) == pytest.approx(5.0)
    assert np.array_equal(model.tangent_basis(x), np.eye(3))
    assert np.allclose(model.offset_point(x, y - x), y)
    assert model.injectivity_radius == math.inf


# --------------------------------------------------------------------- config

def test_model_from_config():
    sphere = model_from_config({"model": "sphere", "n": 3, "R": 2.0})
    assert isinstance(sphere, SphereModel)
    assert sphere.n == 3 and sphere.R == 2.0

    euc = model_from_config({"model": "euclidean", "n": 2,
                             "curvature": "quadratic", "s0": 6.0,
                             "x0": [0.5, -0.5]})
    assert isinstance(euc, EuclideanModel)
    assert euc.scalar_curvature(np.array([0.5, -0.5])) == pytest.approx(6.0)

    ring = model_from_config({"model": "euclidean", "n": 2,
                              "curvature": "double_well", "s0": 1.0,
                              "x0": [0.0, 0.0], "d": 2.0})
    assert ring.scalar_curvature(np.array([2.0, 0.0])) == pytest.approx(1.0)


def test_model_from_config_errors():
    with pytest.raises(ModelConfigError):
        model_from_config({"model": "torus", "n": 2})
    with pytest.raises(ModelConfigError):
        model_from_config({"model": "sphere"})                   # missing n
    with pytest.raises(ModelConfigError):
        model_from_config({"model": "euclidean", "n": 2,
                           "curvature": "cubic"})


# -------------------------------------------------------------- admissibility

def test_peak_configuration_validation():
    center = np.zeros(2)
    pts = (np.array([0.1, 0.0]), np.array([-0.1, 0.0]))
    cfg = PeakConfiguration(eps=0.05, rho=1.0, center=center, points=pts)
    assert cfg.k0 == 2
    with pytest.raises(ValueError):
        PeakConfiguration(eps=0.0, rho=1.0, center=center, points=pts)
    with pytest.raises(ValueError):
        PeakConfiguration(eps=1.5, rho=1.0, center=center, points=pts)
    with pytest.raises(ValueError):
        PeakConfiguration(eps=0.05, rho=-1.0, center=center, points=pts)
    with pytest.raises(ValueError):
        PeakConfiguration(eps=0.05, rho=1.0, center=center, points=())


def test_admissibility_report_hand_computed():
    model = euclidean_model(2, family="constant", s0=0.0)
    center = np.zeros(2)
    pts = (np.array([0.35, 0.0]), np.array([-0.35, 0.0]))
    cfg = PeakConfiguration(eps=0.1, rho=0.5, center=center, points=pts)
    rep = admissibility_report(cfg, model, lambda r: math.exp(-r))
    # ordered pairs: both (1,2) and (2,1) contribute e^{-d/eps}
    expected = 2.0 * math.exp(-0.7 / 0.1)
    assert rep.interaction_sum == pytest.approx(expected, rel=1e-12)
    assert rep.max_center_distance == pytest.approx(0.35)
    assert rep.budget == pytest.approx(0.1 ** 2)
    assert rep.admissible
    # shrink the admissible radius below the peak distance
    tight = PeakConfiguration(eps=0.1, rho=0.1, center=center, points=pts)
    assert not admissibility_report(tight, model, lambda r: math.exp(-r)).admissible
