"""Profile assembly against the closed-form one-dimensional soliton,
plus internal consistency of the stored grid and quadrature."""

import math

import numpy as np
import pytest

from peakforge import (Dimensions, RadialIntegrand, ShootingConfig,
                       TailFitError, compute_beta, eval_du, eval_u, fit_tail,
                       ground_state_profile, load_profile, profile_residual,
                       radial_integral, save_profile)

SQRT2 = math.sqrt(2.0)


# ------------------------------------------------------------- soliton oracle

def test_soliton_profile_pointwise(soliton13):
    # n=1, p=4: u(r) = sqrt(2) sech(r), starting height sqrt(2)
    prof = soliton13
    assert prof.alpha0 == pytest.approx(SQRT2, abs=1e-12)
    r = prof.grid
    assert np.max(np.abs(prof.u - SQRT2 / np.cosh(r))) < 1e-9
    assert np.max(np.abs(prof.du + SQRT2 * np.tanh(r) / np.cosh(r))) < 1e-9


def test_soliton_tail_constant(soliton13):
    # sech(r) -> 2 e^{-r}, so the decay-law constant is 2 sqrt(2)
    assert soliton13.tail_c == pytest.approx(2.0 * SQRT2, rel=1e-5)


def test_soliton_eval_off_grid(soliton13):
    # piecewise-cubic interpolation on an h = 0.02 grid carries an
    # error floor of u''''(0) h^4 / 384 ~ 3e-9 near the origin
    rng = np.random.default_rng(7)
    for r in rng.uniform(0.0, 25.0, size=40):
        assert eval_u(soliton13, r) == pytest.approx(SQRT2 / math.cosh(r),
                                                     abs=1e-8)
    # beyond the stored grid the decay law takes over
    assert eval_u(soliton13, 40.0) == pytest.approx(SQRT2 / math.cosh(40.0),
                                                    rel=1e-5)


# --------------------------------------------------------- stored-grid checks

def test_profile_positive_and_monotone(profile22, profile34):
    for prof in (profile22, profile34):
        assert prof.u[-1] > 0.0
        assert np.all(np.diff(prof.u) < 0.0)
        assert np.all(prof.du[1:] < 0.0)


def test_equation_residual(profile22, profile34):
    # finite-difference defect of the stored pair (u, u') against the
    # equation; largest near the origin where the 1/r term amplifies
    for prof in (profile22, profile34):
        assert profile_residual(prof) < 2e-5
        assert profile_residual(prof, r_min=3.0) < 1e-7


def test_eval_continuity_at_seams(profile22):
    prof = profile22
    d = 1e-9
    for seam in (prof.t0, prof.seam_radius, prof.r_end):
        lo, hi = eval_u(prof, seam - d), eval_u(prof, seam + d)
        assert abs(hi - lo) < 1e-6 * prof.alpha0
    assert eval_u(prof, 0.0) == prof.alpha0


def test_eval_derivative_consistency(profile22):
    prof = profile22
    rng = np.random.default_rng(11)
    h = 1e-6
    for r in rng.uniform(0.1, 15.0, size=30):
        fd = (eval_u(prof, r + h) - eval_u(prof, r - h)) / (2.0 * h)
        assert fd == pytest.approx(eval_du(prof, r), rel=1e-5, abs=1e-12)


def test_seam_defect_recorded(profile22):
    assert 0.0 <= profile22.seam_defect <= 1e-4
    assert profile22.seam_radius < profile22.tail_r_star


# ------------------------------------------------------------------ tail fits

def test_tail_fit_sources_agree(profile22):
    f_u = fit_tail(profile22, source="u")
    f_du = fit_tail(profile22, source="du")
    assert abs(f_u.tail_c - f_du.tail_c) / f_u.tail_c < 0.01
    assert f_u.max_rel_deviation < 0.02
    assert f_du.max_rel_deviation < 0.02


def test_tail_fit_window_validation(profile22):
    with pytest.raises(ValueError):
        fit_tail(profile22, window=(profile22.r_end - 1.0, profile22.r_end + 5.0))
    with pytest.raises(ValueError):
        fit_tail(profile22, window=(5.0, 5.05))
    with pytest.raises(ValueError):
        fit_tail(profile22, source="ddu")
    # a window in the head is not asymptotic and must be refused
    with pytest.raises(TailFitError):
        fit_tail(profile22, window=(0.5, 6.0))


# ----------------------------------------------------------------- quadrature

def test_integral_tail_certified(profile22):
    val, bound = radial_integral(profile22, RadialIntegrand(2.0, 0.0, 1.0),
                                 full_output=True)
    assert val > 0.0
    assert bound <= 1e-10 * val


def test_integrand_validation():
    with pytest.raises(ValueError):
        RadialIntegrand(-1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        RadialIntegrand(0.0, 0.0, 2.0)   # needs at least one decaying factor


def test_beta_stable_under_grid_refinement(profile22):
    # same pipeline at half the lattice spacing: the O(h^4) quadrature
    # and the stitch must agree to 1e-7 relative
    fine = ground_state_profile(Dimensions(n=2, m=2),
                                ShootingConfig(grid_step=0.01))
    b_coarse = compute_beta(profile22)[2]
    b_fine = compute_beta(fine)[2]
    assert abs(b_coarse - b_fine) / abs(b_coarse) < 1e-7


# ------------------------------------------------------------------ save/load

def test_save_load_roundtrip(tmp_path, profile22):
    path = tmp_path / "p22.csv"
    save_profile(profile22, path)
    assert (tmp_path / "p22.json").exists()
    back = load_profile(path)
    assert np.array_equal(back.grid, profile22.grid)
    assert np.array_equal(back.u, profile22.u)
    assert np.array_equal(back.du, profile22.du)
    assert back.alpha0 == profile22.alpha0
    assert back.tail_c == pytest.approx(profile22.tail_c, rel=1e-12)
    for r in (0.05, 1.7, 8.33, 20.0, 35.0):
        assert eval_u(back, r) == eval_u(profile22, r)


def test_negative_radius_rejected(profile22):
    with pytest.raises(ValueError):
        eval_u(profile22, -0.5)
