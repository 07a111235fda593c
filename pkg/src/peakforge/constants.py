"""Dimensional constants built from a ground-state profile.

Everything the concentration analysis needs from the profile enters
through a handful of integrals over R^n:

* ``beta``  - the curvature response c_N int U^2 - (1/(n(n+2))) int |grad U|^2 |z|^2,
  reported together with its two terms;
* ``alpha`` - the energy of the ground state, (1/2) int |grad U|^2 + (1/2) int U^2
  - (1/p) int U^p;
* ``gamma`` - the interaction strength int U^{p-1} e^{<b, z>} dz for any unit b
  (independent of the direction by radial symmetry);
* ``m_E``  - the mountain-pass level (p-2)/(2p) int U^p, which equals alpha.

:func:`beta_table` evaluates the full pipeline over a list of (m, n)
rows; :data:`REFERENCE_TABLE` bundles regression values (5 significant
digits) for the 20 rows the table defaults to.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import gamma as gamma_fn

from .dimensions import Dimensions
from .profile import RadialIntegrand, RadialProfile, eval_u, radial_integral
from .shooting import ShootingConfig, ground_state_profile


def sphere_volume(n: int) -> float:
    """Surface measure of the unit (n-1)-sphere in R^n, 2 pi^{n/2} / Gamma(n/2).

    n = 1 gives 2, the counting measure of the two endpoints of an
    interval, which is exactly what the radial reduction of a 1-d
    integral needs.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return 2.0 * math.pi ** (n / 2.0) / gamma_fn(n / 2.0)


@dataclass(frozen=True)
class GroundStateConstants:
    """All scalar constants derived from one (m, n) ground state."""

    dims: Dimensions
    alpha0: float
    tail_c: float
    beta_term1: float
    beta_term2: float
    beta: float
    alpha: float
    gamma: float
    m_E: float


def compute_beta(profile: RadialProfile) -> tuple[float, float, float]:
    """Curvature-response constant and its two terms.

    Returns (term1, term2, beta) with
    term1 = c_N V_{n-1} int u^2 r^{n-1} dr,
    term2 = V_{n-1}/(n(n+2)) int u'^2 r^{n+1} dr,
    beta = term1 - term2.
    """
    dims = profile.dims
    V = sphere_volume(dims.n)
    term1 = dims.c_N * V * radial_integral(profile, RadialIntegrand(2.0, 0.0, dims.n - 1))
    term2 = V / (dims.n * (dims.n + 2.0)) * radial_integral(
        profile, RadialIntegrand(0.0, 2.0, dims.n + 1))
    return term1, term2, term1 - term2


def compute_alpha_energy(profile: RadialProfile) -> float:
    """Energy of the ground state at the limit exponent."""
    dims = profile.dims
    V = sphere_volume(dims.n)
    grad2 = V * radial_integral(profile, RadialIntegrand(0.0, 2.0, dims.n - 1))
    mass2 = V * radial_integral(profile, RadialIntegrand(2.0, 0.0, dims.n - 1))
    power = V * radial_integral(profile, RadialIntegrand(dims.p, 0.0, dims.n - 1))
    return 0.5 * grad2 + 0.5 * mass2 - power / dims.p


def compute_mE(profile: RadialProfile) -> float:
    """Mountain-pass level (p-2)/(2p) ||U||_p^p; equals the energy."""
    dims = profile.dims
    V = sphere_volume(dims.n)
    power = V * radial_integral(profile, RadialIntegrand(dims.p, 0.0, dims.n - 1))
    return (dims.p - 2.0) / (2.0 * dims.p) * power


def _angular_kernel(r: float, n: int) -> float:
    """int_0^pi e^{r cos t} sin^{n-2} t dt by adaptive quadrature."""
    val, _ = quad(lambda t: math.exp(r * math.cos(t)) * math.sin(t) ** (n - 2),
                  0.0, math.pi, limit=200, epsabs=0.0, epsrel=1e-12)
    return val


def compute_gamma(profile: RadialProfile, b) -> float:
    """Interaction constant int U^{p-1} e^{<b, z>} dz for a unit vector b.

    Radial symmetry makes the value independent of the direction, so
    after validating b the integral is reduced to polar coordinates
    aligned with it:

        gamma = V_{n-2} int_0^inf u^{p-1} r^{n-1}
                [int_0^pi e^{r cos t} sin^{n-2} t dt] dr

    (for n = 1 the angular factor degenerates to e^r + e^{-r}). The b
    argument exists so callers can probe that independence.
    """
    dims = profile.dims
    b = np.asarray(b, dtype=float)
    if b.shape != (dims.n,):
        raise ValueError(f"b must be a vector in R^{dims.n}, got shape {b.shape}")
    if abs(np.linalg.norm(b) - 1.0) > 1e-12:
        raise ValueError("b must be a unit vector")
    p, n = dims.p, dims.n
    # outer cut where u^{p-1} e^r has decayed to nothing: the radial
    # decay e^{-(p-1)r} beats the kernel growth e^{+r} by e^{-(p-2)r}
    r_cut = max(50.0 / (p - 2.0) + 5.0 * n, profile.r_end + 5.0)

    if n == 1:
        def f(r):
            return eval_u(profile, r) ** (p - 1.0) * (math.exp(r) + math.exp(-r))
        pref = 1.0
    else:
        def f(r):
            return (eval_u(profile, r) ** (p - 1.0) * r ** (n - 1.0)
                    * _angular_kernel(r, n))
        pref = sphere_volume(n - 1)
    pieces = [0.0, profile.r_end, r_cut]
    total = 0.0
    for lo, hi in zip(pieces[:-1], pieces[1:]):
        val, _ = quad(f, lo, hi, limit=400, epsabs=0.0, epsrel=1e-11)
        total += val
    return pref * total


def ground_state_constants(dims: Dimensions,
                           config: Optional[ShootingConfig] = None,
                           profile: Optional[RadialProfile] = None) -> GroundStateConstants:
    """Full constants pipeline for one (m, n)."""
    if profile is None:
        profile = ground_state_profile(dims, config)
    term1, term2, beta = compute_beta(profile)
    alpha = compute_alpha_energy(profile)
    b1 = np.zeros(dims.n)
    b1[0] = 1.0
    gam = compute_gamma(profile, b1)
    m_E = compute_mE(profile)
    return GroundStateConstants(
        dims=dims, alpha0=float(profile.alpha0), tail_c=float(profile.tail_c),
        beta_term1=float(term1), beta_term2=float(term2), beta=float(beta),
        alpha=float(alpha), gamma=float(gam), m_E=float(m_E),
    )


#: the 20 default (m, n) rows, in table order
DEFAULT_ROWS: tuple[tuple[int, int], ...] = tuple(
    (m, n) for m, n_max in ((2, 7), (3, 6), (4, 5), (5, 4), (6, 3))
    for n in range(2, n_max + 1)
)

#: regression reference values {(m, n): (term1, term2, beta)}, 5 significant digits
REFERENCE_TABLE: dict[tuple[int, int], tuple[float, float, float]] = {
    (2, 2): (1.9502, 2.331, -0.38089),
    (2, 3): (11.959, 13.259, -1.2999),
    (2, 4): (81.771, 87.5, -5.7285),
    (2, 5): (617.47, 647.82, -30.353),
    (2, 6): (5083.3, 5268.8, -185.5),
    (2, 7): (45119.0, 46391.0, -1272.4),
    (3, 2): (3.9303, 4.4149, -0.48461),
    (3, 3): (26.196, 28.329, -2.1329),
    (3, 4): (194.26, 205.59, -11.324),
    (3, 5): (1577.6, 1647.1, -69.453),
    (3, 6): (13854.0, 14332.0, -478.38),
    (4, 2): (6.2006, 6.7579, -0.55731),
    (4, 3): (45.28, 48.231, -2.9513),
    (4, 4): (363.46, 381.54, -18.085),
    (4, 5): (3162.7, 3287.2, -124.58),
    (5, 2): (8.6442, 9.2554, -0.61113),
    (5, 3): (68.674, 72.419, -3.7455),
    (5, 4): (592.7, 618.4, -25.692),
    (6, 2): (11.199, 11.851, -0.65243),
    (6, 3): (95.938, 100.42, -4.4788),
}


@dataclass(frozen=True)
class TableRow:
    m: int
    n: int
    constants: Optional[GroundStateConstants]
    error: Optional[str] = None


def beta_table(rows: Optional[Sequence[tuple[int, int]]] = None,
               config: Optional[ShootingConfig] = None) -> list[TableRow]:
    """Run the constants pipeline over a list of (m, n) rows.

    Defaults to :data:`DEFAULT_ROWS`. Requested rows must satisfy
    n + m >= 4; a row that fails numerically is reported with its
    error message rather than aborting the rest.
    """
    if rows is None:
        rows = DEFAULT_ROWS
    out = []
    for m, n in rows:
        if n + m < 4:
            out.append(TableRow(m=m, n=n, constants=None,
                                error=f"total dimension {n + m} < 4"))
            continue
        try:
            consts = ground_state_constants(Dimensions(n=n, m=m), config)
        except Exception as exc:  # report per-row, keep going
            out.append(TableRow(m=m, n=n, constants=None, error=str(exc)))
            continue
        out.append(TableRow(m=m, n=n, constants=consts))
    return out
