"""Constants pipeline: geometric prefactors, reference rows, and the
independent planar route to the interaction constant."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import planar_gamma_oracle
from peakforge import (DEFAULT_ROWS, REFERENCE_TABLE, Dimensions,
                       RadialIntegrand, beta_table, compute_gamma,
                       ground_state_constants, radial_integral, sphere_volume)

SQRT2 = math.sqrt(2.0)


# -------------------------------------------------------------- sphere_volume

def test_sphere_volume_closed_forms():
    assert sphere_volume(1) == pytest.approx(2.0)
    assert sphere_volume(2) == pytest.approx(2.0 * math.pi)
    assert sphere_volume(3) == pytest.approx(4.0 * math.pi)
    assert sphere_volume(4) == pytest.approx(2.0 * math.pi ** 2)
    with pytest.raises(ValueError):
        sphere_volume(0)


def test_sphere_volume_recursion():
    # V(n) = V(n-1) * int_0^pi sin^{n-2} t dt, the slice decomposition
    for n in range(2, 9):
        slab, _ = quad(lambda t: math.sin(t) ** (n - 2), 0.0, math.pi)
        assert sphere_volume(n) == pytest.approx(sphere_volume(n - 1) * slab,
                                                 rel=1e-12)


# ------------------------------------------------------------- reference rows

def test_default_rows_shape():
    assert len(DEFAULT_ROWS) == 20
    assert set(DEFAULT_ROWS) == set(REFERENCE_TABLE)
    assert DEFAULT_ROWS[0] == (2, 2)
    assert DEFAULT_ROWS[-1] == (6, 3)
    assert all(beta < 0.0 for _, _, beta in REFERENCE_TABLE.values())


@pytest.mark.parametrize("key", [(2, 2), (3, 4)])
def test_constants_match_reference(key, constants22, constants34):
    c = {(2, 2): constants22, (3, 4): constants34}[key]
    ref1, ref2, ref_beta = REFERENCE_TABLE[key]
    assert c.beta_term1 == pytest.approx(ref1, rel=1e-3)
    assert c.beta_term2 == pytest.approx(ref2, rel=1e-3)
    assert c.beta == pytest.approx(ref_beta, rel=1e-3)
    assert c.beta < 0.0
    assert c.gamma > 0.0
    assert c.alpha > 0.0


def test_energy_equals_level(constants22, constants34):
    for c in (constants22, constants34):
        assert abs(c.alpha - c.m_E) <= 1e-6 * abs(c.alpha)


def test_nehari_identity(profile22):
    dims = profile22.dims
    V = sphere_volume(dims.n)
    grad2 = V * radial_integral(profile22, RadialIntegrand(0.0, 2.0, dims.n - 1))
    mass2 = V * radial_integral(profile22, RadialIntegrand(2.0, 0.0, dims.n - 1))
    power = V * radial_integral(profile22, RadialIntegrand(dims.p, 0.0, dims.n - 1))
    assert abs(grad2 + mass2 - power) <= 1e-6 * power


# ---------------------------------------------------------------- interaction

def test_gamma_direction_validation(profile22):
    with pytest.raises(ValueError):
        compute_gamma(profile22, np.array([1.0, 0.0, 0.0]))   # wrong space
    with pytest.raises(ValueError):
        compute_gamma(profile22, np.array([0.7, 0.7]))        # not unit


def test_gamma_direction_independent(profile22, constants22):
    rng = np.random.default_rng(3)
    for _ in range(3):
        b = rng.standard_normal(2)
        b /= np.linalg.norm(b)
        g = compute_gamma(profile22, b)
        assert abs(g - constants22.gamma) <= 1e-12 * constants22.gamma


def test_gamma_against_planar_oracle(profile22, constants22):
    oracle = planar_gamma_oracle(profile22)
    assert abs(constants22.gamma - oracle) <= 1e-6 * oracle


# ------------------------------------------------------------- soliton oracle

def test_soliton_constants(soliton13):
    # closed forms for n=1, p=4: energy level 4/3, interaction 4 sqrt(2)
    dims = Dimensions(n=1, m=3)
    c = ground_state_constants(dims, profile=soliton13)
    assert c.m_E == pytest.approx(4.0 / 3.0, rel=1e-9)
    assert c.alpha == pytest.approx(4.0 / 3.0, rel=1e-9)
    assert c.gamma == pytest.approx(4.0 * SQRT2, rel=1e-9)


# ------------------------------------------------------------------ the table

def test_beta_table_row_gating():
    rows = beta_table([(1, 2), (2, 2)])
    assert rows[0].constants is None
    assert "dimension" in rows[0].error
    assert rows[1].error is None
    assert rows[1].constants.beta == pytest.approx(-0.38089, rel=1e-3)
