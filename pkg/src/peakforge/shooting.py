"""Shooting solver for the radial ground-state profile.

The profile u(r) solves the radial reduction of the limit equation
-lap(U) + U = U^(p-1) on R^n:

    u'' + (n-1)/r u' - u + max(u, 0)^(p-1) = 0,   u(0) = alpha, u'(0) = 0

Only one starting height alpha0 > 1 produces the decaying ground
state; every other shot either crosses zero with negative slope
(alpha too high) or turns back up before reaching zero (alpha too
low). That dichotomy drives a bisection on alpha.

The workflow is

  1. :func:`classify_shot` integrates one trajectory to its first
     qualitative event,
  2. :func:`find_alpha0` bisects a (turned-up, crossed) bracket down
     to machine width,
  3. :func:`integrate_profile` rebuilds the trajectory at alpha0 and
     completes the exponentially decaying tail by a backward pass,
     returning a :class:`~peakforge.profile.RadialProfile`.

The backward pass exists because forward shooting cannot reach the
deep tail: the linearized equation has an e^{+r} mode, so even a
machine-perfect bracket corrupts the solution beyond r ~ 17. Decay is
*attracting* when integrated right-to-left, which makes the tail easy
to recover to full relative accuracy once its amplitude is matched to
the forward solution at a moderate radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .dimensions import Dimensions
from . import profile as _profile


class BracketingError(RuntimeError):
    """Raised when no (turned-up, crossed) bracket can be established."""


class IntegrationError(RuntimeError):
    """Raised when a trajectory cannot be integrated to a usable state."""


class ShotKind(Enum):
    CROSSED = "crossed"        # u hit 0 with u' < 0: alpha too high
    TURNED_UP = "turned_up"    # u' reached 0 while 0 < u < 1: alpha too low
    UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class ShotOutcome:
    """Qualitative fate of a single shot and where it was decided."""

    kind: ShotKind
    event_radius: float


@dataclass(frozen=True)
class ShootingConfig:
    """Numerical knobs for the shooting pipeline.

    The defaults are deliberately tight: the bracket must be resolved
    to machine precision for the forward trajectory to stay clean out
    to the matching radius of the backward tail pass.
    """

    alpha_lo: float = 1.0 + 1e-6
    alpha_hi: float = 8.0
    bisect_tol: float = 1e-15      # relative bracket width to stop at
    r_max: float = 60.0
    t0: float = 1e-6               # series start radius
    ode_rel_tol: float = 1e-12
    ode_abs_tol: float = 1e-18
    grid_step: float = 0.02        # lattice spacing of the stored profile
    match_floor: float = 1e-4      # forward pass stops at u = match_floor*alpha0
    profile_floor: float = 1e-12   # stored tail ends at u ~ profile_floor*alpha0
    tail_runin: float = 10.0       # backward seeding margin beyond the floor radius

    def __post_init__(self):
        if self.bisect_tol <= 0 or self.bisect_tol > 1e-6:
            raise ValueError("bisect_tol must be in (0, 1e-6]")
        if not (0 < self.t0 < 1e-2):
            raise ValueError("t0 must be a small positive radius")
        if self.r_max <= 10.0:
            raise ValueError("r_max too small to classify shots")
        if not (self.profile_floor < self.match_floor < 1e-2):
            raise ValueError("need profile_floor < match_floor < 1e-2")


def ode_rhs(t, y, dims: Dimensions):
    """Right-hand side of the first-order system (u, u')."""
    u, du = y
    return (du, u - max(u, 0.0) ** (dims.p - 1.0) - (dims.n - 1.0) * du / t)


def _series_start(alpha: float, dims: Dimensions, t0: float):
    """Second-order Taylor values at the series start radius t0.

    Near r = 0 the radial Laplacian forces u''(0) = (alpha - alpha^(p-1))/n,
    so u(t0) = alpha + (alpha - alpha^(p-1)) t0^2/(2n) + O(t0^4).
    """
    g = alpha - alpha ** (dims.p - 1.0)
    return alpha + g * t0 * t0 / (2.0 * dims.n), g * t0 / dims.n


def classify_shot(alpha: float, dims: Dimensions,
                  config: Optional[ShootingConfig] = None) -> ShotOutcome:
    """Integrate one shot until its fate is decided.

    Parameters
    ----------
    alpha : float
        Starting height u(0). Any alpha <= 1 cannot decay (the
        trajectory starts at or below the rest height with
        non-negative curvature) and is reported TURNED_UP at radius 0
        without integrating.
    dims : Dimensions
    config : ShootingConfig, optional

    Returns
    -------
    ShotOutcome
        CROSSED if u reached 0 with u' < 0, TURNED_UP if u' reached 0
        while 0 < u < 1, UNDETERMINED if neither happened by r_max.
    """
    cfg = config or ShootingConfig()
    if alpha <= 1.0:
        return ShotOutcome(ShotKind.TURNED_UP, 0.0)

    y0 = _series_start(alpha, dims, cfg.t0)

    def crossed(t, y, *_):
        return y[0]
    crossed.terminal = True
    crossed.direction = -1.0

    def turned(t, y, *_):
        return y[1]
    turned.terminal = True
    turned.direction = 1.0

    sol = solve_ivp(ode_rhs, (cfg.t0, cfg.r_max), y0, args=(dims,),
                    method="DOP853", events=(crossed, turned),
                    rtol=cfg.ode_rel_tol, atol=cfg.ode_abs_tol)
    if not sol.success:
        raise IntegrationError(f"integrator failed at alpha={alpha}: {sol.message}")
    if sol.t_events[0].size:
        return ShotOutcome(ShotKind.CROSSED, float(sol.t_events[0][0]))
    if sol.t_events[1].size:
        r_ev = float(sol.t_events[1][0])
        u_ev = float(sol.sol(r_ev)[0]) if sol.sol is not None else float(sol.y[0, -1])
        # A slope zero with u >= 1 cannot occur along a descending shot;
        # treat it as undecidable rather than guessing.
        if 0.0 < u_ev < 1.0:
            return ShotOutcome(ShotKind.TURNED_UP, r_ev)
        return ShotOutcome(ShotKind.UNDETERMINED, r_ev)
    return ShotOutcome(ShotKind.UNDETERMINED, cfg.r_max)


def find_alpha0(dims: Dimensions,
                config: Optional[ShootingConfig] = None) -> tuple[float, float]:
    """Bisect for the unique decaying starting height alpha0.

    The seed bracket is expanded geometrically upward until the high
    end crosses; the low end 1 + 1e-6 always turns up (just above the
    rest height the trajectory oscillates back). Bisection then keeps
    the invariant (low: TURNED_UP, high: CROSSED) until the relative
    width reaches ``config.bisect_tol``.

    Returns
    -------
    (alpha0, width) : tuple of float
        Bracket midpoint and final relative bracket width.

    Raises
    ------
    BracketingError
        If no crossing shot can be found below an amplitude of 1e9,
        or if the seed low end fails to turn up.
    """
    cfg = config or ShootingConfig()
    lo, hi = cfg.alpha_lo, cfg.alpha_hi

    if classify_shot(lo, dims, cfg).kind is not ShotKind.TURNED_UP:
        # Shrink toward the rest height; everything in (1, 1+1e-6]
        # should turn up, so one retry is plenty.
        lo = 1.0 + (lo - 1.0) / 1024.0
        if classify_shot(lo, dims, cfg).kind is not ShotKind.TURNED_UP:
            raise BracketingError(f"low seed alpha={lo} does not turn up for {dims}")
    while classify_shot(hi, dims, cfg).kind is not ShotKind.CROSSED:
        hi *= 2.0
        if hi > 1e9:
            raise BracketingError(f"no crossing shot found below alpha=1e9 for {dims}")

    while (hi - lo) / hi > cfg.bisect_tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break  # interval no longer splittable in floating point
        kind = classify_shot(mid, dims, cfg).kind
        if kind is ShotKind.CROSSED:
            hi = mid
        elif kind is ShotKind.TURNED_UP:
            lo = mid
        else:
            break  # below classification resolution; midpoint is as good as it gets
    return 0.5 * (lo + hi), (hi - lo) / hi


def _forward_pass(alpha0: float, dims: Dimensions, cfg: ShootingConfig):
    """Integrate the near-critical shot down to the matching height."""
    y0 = _series_start(alpha0, dims, cfg.t0)
    u_match = cfg.match_floor * alpha0

    def reached_floor(t, y, *_):
        return y[0] - u_match
    reached_floor.terminal = True
    reached_floor.direction = -1.0

    def upturn(t, y, *_):
        return y[1]
    upturn.terminal = True
    upturn.direction = 1.0

    sol = solve_ivp(ode_rhs, (cfg.t0, cfg.r_max), y0, args=(dims,),
                    method="DOP853", events=(reached_floor, upturn),
                    dense_output=True, rtol=cfg.ode_rel_tol, atol=cfg.ode_abs_tol)
    if not sol.success:
        raise IntegrationError(f"profile integration failed: {sol.message}")
    if not sol.t_events[0].size:
        raise IntegrationError(
            "shot deviated before reaching the matching height "
            f"(u = {cfg.match_floor:g}*alpha0); the bracket is too loose - "
            "tighten bisect_tol"
        )
    return sol, float(sol.t_events[0][0])


def _backward_tail(dims: Dimensions, cfg: ShootingConfig, c_seed: float,
                   r_match: float, u_match: float, r_far: float):
    """Recover the decaying tail by right-to-left integration.

    Seeds the asymptote c e^{-r} r^{-(n-1)/2} well beyond the floor
    radius and integrates the full equation backward; the run-in damps
    whatever the seed got wrong. The amplitude c is then fixed by
    matching u at r_match. The map c -> u(r_match) is linear up to the
    (small) tail nonlinearity, so a few rescale-and-repeat rounds
    converge to machine precision.
    """
    k = (dims.n - 1.0) / 2.0
    r_seed = r_far + cfg.tail_runin
    c = c_seed
    bsol = None
    for _ in range(12):
        u_seed = c * math.exp(-r_seed) * r_seed ** (-k)
        du_seed = -u_seed * (1.0 + k / r_seed)
        bsol = solve_ivp(ode_rhs, (r_seed, r_match), (u_seed, du_seed),
                         args=(dims,), method="DOP853", dense_output=True,
                         rtol=cfg.ode_rel_tol, atol=1e-30)
        if not bsol.success:
            raise IntegrationError(f"backward tail integration failed: {bsol.message}")
        ratio = u_match / float(bsol.sol(r_match)[0])
        c *= ratio
        if abs(ratio - 1.0) < 1e-13:
            break
    return bsol, c


def integrate_profile(alpha0: float, dims: Dimensions,
                      config: Optional[ShootingConfig] = None) -> "_profile.RadialProfile":
    """Build the full ground-state profile at a resolved alpha0.

    The stored grid is the series start t0 followed by a uniform
    lattice of spacing ``config.grid_step`` down to the radius where
    the tail reaches ``profile_floor * alpha0``. Forward values fill
    the lattice up to the matching radius; the backward tail pass
    fills the rest. u is strictly positive and strictly decreasing on
    the whole grid.

    Returns
    -------
    RadialProfile

    Raises
    ------
    IntegrationError
        If the forward shot deviates (turns up or crosses) before the
        matching height, which means the bracket was too loose.
    """
    cfg = config or ShootingConfig()
    sol, r_stop = _forward_pass(alpha0, dims, cfg)
    k = (dims.n - 1.0) / 2.0

    # Snap the matching radius onto the lattice so the merged grid
    # stays uniform across the seam.
    step = cfg.grid_step
    r_match = math.floor(r_stop / step) * step
    if r_match <= cfg.t0:
        raise IntegrationError("matching radius collapsed onto the series start")
    u_match, du_match = (float(v) for v in sol.sol(r_match))

    # Seed amplitude from the end of the forward span, then locate the
    # floor radius for that amplitude.
    rr = np.linspace(max(r_match - 2.0, 1.0), r_match, 41)
    c_seed = float(np.mean(sol.sol(rr)[0] * rr ** k * np.exp(rr)))
    u_floor = cfg.profile_floor * alpha0

    def asym(r):
        return c_seed * math.exp(-r) * r ** (-k) - u_floor

    r_far = r_match + 1.0
    while asym(r_far) > 0.0:
        r_far += 1.0
        if r_far > 400.0:
            raise IntegrationError("tail floor radius ran away; profile_floor too deep")
    r_far = math.ceil(r_far / step) * step

    bsol, c_matched = _backward_tail(dims, cfg, c_seed, r_match, u_match, r_far)
    scale = u_match / float(bsol.sol(r_match)[0])
    du_b = float(bsol.sol(r_match)[1]) * scale
    seam_defect = abs(du_b - du_match) / abs(du_match)
    if seam_defect > 1e-4:
        raise IntegrationError(
            f"tail seam slope mismatch {seam_defect:.2e} at r={r_match:.2f}; "
            "bracket too loose - tighten bisect_tol"
        )

    lattice = np.arange(step, r_far + step / 2.0, step)
    fwd = lattice[lattice <= r_match]
    bwd = lattice[lattice > r_match]
    yf = sol.sol(fwd)
    yb = bsol.sol(bwd) * scale
    u0, du0 = _series_start(alpha0, dims, cfg.t0)
    grid = np.concatenate(([cfg.t0], fwd, bwd))
    u = np.concatenate(([u0], yf[0], yb[0]))
    du = np.concatenate(([du0], yf[1], yb[1]))

    if not (np.all(u > 0.0) and np.all(du < 0.0)):
        raise IntegrationError(
            "profile lost positivity or monotonicity; bracket too loose - "
            "tighten bisect_tol"
        )

    return _profile.assemble_profile(
        dims=dims, alpha0=alpha0, grid=grid, u=u, du=du,
        seam_radius=r_match, seam_defect=seam_defect, config=cfg,
    )


def ground_state_profile(dims: Dimensions,
                         config: Optional[ShootingConfig] = None) -> "_profile.RadialProfile":
    """Convenience: bisect alpha0 and build the profile in one call."""
    cfg = config or ShootingConfig()
    alpha0, _width = find_alpha0(dims, cfg)
    return integrate_profile(alpha0, dims, cfg)
