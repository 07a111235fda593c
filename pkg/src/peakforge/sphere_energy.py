"""Direct quadrature of the single-peak energy on the round sphere.

The concentrated ansatz W places the rescaled profile u(rho/eps) at a
pole of S^n_R, cut off at geodesic radius r by a C^2 bump chi. Its
conformal energy is the one-dimensional integral

    J_eps(W) = eps^{-n} V_{n-1} int_0^r [ eps^2/2 (d_rho W)^2
               + (eps^2 c_N s + 1)/2 W^2 - W^p/p ] (R sin(rho/R))^{n-1} drho

with s = n(n-1)/R^2 the scalar curvature. Substituting rho = eps z
turns it into an O(1) integral this module evaluates adaptively. Two
checks matter downstream:

* expanding in eps gives J_eps(W) = alpha + (beta/2) s eps^2 + o(eps^2),
  so the slope of J against eps^2 measures beta independently of the
  constants pipeline (:func:`curvature_slope_check`);
* replacing sin(rho/R) -> rho and s -> 0 gives the flat-space energy,
  which is eps-independent up to cutoff dust (:func:`flat_peak_energy`),
  the quadrature face of the scaling invariance of the problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad

from .constants import sphere_volume
from .profile import RadialProfile, eval_du, eval_u


@dataclass(frozen=True)
class CutoffSpec:
    """C^2 radial cutoff: 1 on [0, r/2], 0 beyond r, a smoothstep between.

    kind "quintic" is the C^2 polynomial 1 - s^3(10 - 15s + 6s^2);
    kind "septic" the C^3 one 1 - s^4(35 - 84s + 70s^2 - 20s^3).
    """

    r: float = 1.4
    kind: str = "quintic"

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("cutoff radius must be positive")
        if self.kind not in ("quintic", "septic"):
            raise ValueError(f"unknown cutoff kind {self.kind!r}")


def cutoff_chi(spec: CutoffSpec, rho):
    """Evaluate the cutoff (vectorized)."""
    rho = np.asarray(rho, dtype=float)
    s = np.clip((rho - spec.r / 2.0) / (spec.r / 2.0), 0.0, 1.0)
    if spec.kind == "quintic":
        val = 1.0 - s ** 3 * (10.0 - 15.0 * s + 6.0 * s * s)
    else:
        val = 1.0 - s ** 4 * (35.0 - 84.0 * s + 70.0 * s * s - 20.0 * s ** 3)
    return val if val.ndim else float(val)


def cutoff_dchi(spec: CutoffSpec, rho):
    """Derivative of the cutoff with respect to rho (vectorized)."""
    rho = np.asarray(rho, dtype=float)
    s = np.clip((rho - spec.r / 2.0) / (spec.r / 2.0), 0.0, 1.0)
    if spec.kind == "quintic":
        core = 30.0 * s * s - 60.0 * s ** 3 + 30.0 * s ** 4
    else:
        core = 140.0 * s ** 3 - 420.0 * s ** 4 + 420.0 * s ** 5 - 140.0 * s ** 6
    val = -core / (spec.r / 2.0)
    return val if val.ndim else float(val)


def _peak_energy(profile: RadialProfile, eps: float, spec: CutoffSpec,
                 R: Optional[float], quad_epsrel: float = 1e-11) -> float:
    """Shared quadrature; R=None means the flat model (sin -> rho, s -> 0)."""
    dims = profile.dims
    n, p, cN = dims.n, dims.p, dims.c_N
    if R is not None:
        s_curv = n * (n - 1.0) / (R * R)
        if spec.r >= math.pi * R / 2.0:
            raise ValueError("cutoff radius must stay below pi R / 2")
    else:
        s_curv = 0.0
    mass_coef = 0.5 * (1.0 + eps * eps * cN * s_curv)

    def integrand(z):
        rho = eps * z
        u = eval_u(profile, z)
        w = u * cutoff_chi(spec, rho)
        dw = eval_du(profile, z) * cutoff_chi(spec, rho) + eps * u * cutoff_dchi(spec, rho)
        geom = 1.0
        if R is not None and z > 0.0:
            geom = (math.sin(rho / R) / (rho / R)) ** (n - 1.0)
        return (0.5 * dw * dw + mass_coef * w * w - w ** p / p) * z ** (n - 1.0) * geom

    z_edge = spec.r / (2.0 * eps)
    val, _ = quad(integrand, 0.0, spec.r / eps, points=[z_edge],
                  limit=600, epsabs=1e-300, epsrel=quad_epsrel)
    return sphere_volume(n) * val


def single_peak_energy(profile: RadialProfile, eps: float, R: float = 1.0,
                       spec: Optional[CutoffSpec] = None,
                       quad_epsrel: float = 1e-11) -> float:
    """J_eps of the cutoff peak ansatz at a pole of S^n_R."""
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must be in (0, 1)")
    return _peak_energy(profile, eps, spec or CutoffSpec(), R, quad_epsrel)


def flat_peak_energy(profile: RadialProfile, eps: float,
                     spec: Optional[CutoffSpec] = None,
                     quad_epsrel: float = 1e-11) -> float:
    """Euclidean-limit energy of the same ansatz.

    Equals the ground-state energy up to cutoff corrections of size
    ~u(r/(2 eps))^2, hence eps-independent to high accuracy for small
    eps: the quadrature face of the eps-scaling invariance (the
    rescaled norm, and with it the mountain-pass level, does not see
    eps at all).
    """
    if not (0.0 < eps < 1.0):
        raise ValueError("eps must be in (0, 1)")
    return _peak_energy(profile, eps, spec or CutoffSpec(), None, quad_epsrel)


@dataclass(frozen=True)
class SlopeCheck:
    """Outcome of fitting (J_eps - alpha) against eps^2."""

    slope: float
    target: float              # (beta/2) n(n-1)/R^2
    rel_error: float
    eps_ladder: tuple[float, ...]
    energies: tuple[float, ...]


def curvature_slope_check(profile: RadialProfile, alpha: float, beta: float,
                          R: float = 1.0, eps_ladder=(0.05, 0.02, 0.01),
                          spec: Optional[CutoffSpec] = None,
                          quad_epsrel: float = 1e-11) -> SlopeCheck:
    """Fit the eps^2 coefficient of J_eps(W) and compare with beta.

    The expansion predicts slope (beta/2) s with s = n(n-1)/R^2; alpha
    and beta come from the constants pipeline, making this an
    independent consistency check of both quadratures.
    """
    n = profile.dims.n
    energies = tuple(single_peak_energy(profile, e, R, spec, quad_epsrel)
                     for e in eps_ladder)
    x = np.array([e * e for e in eps_ladder])
    y = np.array(energies) - alpha
    slope = float(np.polyfit(x, y, 1)[0])
    target = 0.5 * beta * n * (n - 1.0) / (R * R)
    rel = abs(slope - target) / abs(target)
    return SlopeCheck(slope=slope, target=target, rel_error=rel,
                      eps_ladder=tuple(eps_ladder), energies=energies)
