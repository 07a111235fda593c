"""Storage, evaluation and integration of radial ground-state profiles.

A :class:`RadialProfile` holds (r, u, u') samples on a grid that is
uniform except for the series-start node, together with the fitted
tail constant of the decay law

    u(r) ~ c r^{-(n-1)/2} e^{-r},    r -> infinity,

which also governs |u'| with the same constant. Evaluation is total
on r >= 0: a Taylor series below the first node, a C^1 cubic Hermite
interpolant on the grid (built from the exact stored derivatives, so
it is monotone wherever the data is), and the decay law beyond the
grid with the amplitude pinned to the last grid sample so the switch
is exactly continuous.

Radial integrals of u^a |u'|^b r^w are computed by a corrected
trapezoid rule that uses the exact nodal derivatives of the integrand
(available because u'' comes from the equation itself), giving O(h^4)
composite accuracy, plus an analytic bound on the truncated tail.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.interpolate import CubicHermiteSpline
from scipy.special import gammaincc, gamma as gamma_fn

from .dimensions import Dimensions


class TailFitError(RuntimeError):
    """Raised when the requested window is not in the asymptotic regime."""


#: largest admissible in-window deviation of the rescaled tail at build time
TAIL_DEVIATION_LIMIT = 0.02
#: fit_tail refuses windows with deviation beyond this
TAIL_FIT_LIMIT = 0.05
#: budget for the subleading 1/r drift when choosing the default window
_TAIL_DRIFT_BUDGET = 0.025


@dataclass(frozen=True)
class TailFit:
    tail_c: float
    max_rel_deviation: float
    window: tuple[float, float]
    source: str = "u"


@dataclass(frozen=True)
class RadialIntegrand:
    """Parameters of the integrand u^a |u'|^b r^w.

    Powers must be non-negative with a + b >= 1 (so the integrand
    decays), and w >= 0 (keeps the corrected trapezoid honest near the
    origin; the weights used in practice are r^(n-1) and r^(n+1)).
    """

    u_power: float
    du_power: float
    r_weight: float

    def __post_init__(self):
        if self.u_power < 0 or self.du_power < 0:
            raise ValueError("powers of u and u' must be non-negative")
        if self.u_power + self.du_power < 1.0:
            raise ValueError("need u_power + du_power >= 1 for a decaying integrand")
        if self.r_weight < 0:
            raise ValueError("r_weight must be non-negative")


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Radial ground state u(r) with its decay-law fit.

    Attributes
    ----------
    dims : Dimensions
    alpha0 : float
        Starting height u(0).
    grid, u, du : ndarray
        Sample radii (strictly increasing, first node at the series
        start t0), u values (positive, strictly decreasing) and u'
        values (negative).
    tail_c : float
        Window-mean of u r^{(n-1)/2} e^r, the decay-law constant.
    tail_r_star : float
        Start of the fit window; the rescaled tail stays within
        :data:`TAIL_DEVIATION_LIMIT` of tail_c from here to the grid end.
    tail_deviation : float
        Largest relative deviation actually measured on that window.
    seam_radius, seam_defect : float
        Where the forward and backward passes meet, and the relative
        slope mismatch there (a direct error gauge for the stitch).
    """

    dims: Dimensions
    alpha0: float
    grid: np.ndarray
    u: np.ndarray
    du: np.ndarray
    tail_c: float
    tail_r_star: float
    tail_deviation: float
    seam_radius: Optional[float] = None
    seam_defect: Optional[float] = None
    _spline_u: CubicHermiteSpline = field(repr=False, default=None)
    _spline_du: CubicHermiteSpline = field(repr=False, default=None)
    _tail_amp_u: float = field(repr=False, default=0.0)
    _tail_amp_du: float = field(repr=False, default=0.0)

    @property
    def t0(self) -> float:
        return float(self.grid[0])

    @property
    def r_end(self) -> float:
        return float(self.grid[-1])

    def curvature(self) -> np.ndarray:
        """u'' on the grid, straight from the equation."""
        p, n = self.dims.p, self.dims.n
        return self.u - np.maximum(self.u, 0.0) ** (p - 1.0) - (n - 1.0) * self.du / self.grid


def _decay_exponent(n: int) -> float:
    """Algebraic decay power (n-1)/2 of the tail law."""
    return (n - 1.0) / 2.0


def _subleading_coefficient(n: int) -> float:
    """Coefficient of the 1/r correction to the rescaled tail.

    The rescaled profile u r^{(n-1)/2} e^r approaches its limit like
    1 + a/r with a = (4 nu^2 - 1)/8, nu = n/2 - 1; the drift this
    causes across a window decides how far out the window must sit.
    """
    nu = n / 2.0 - 1.0
    return (4.0 * nu * nu - 1.0) / 8.0


def default_tail_window(dims: Dimensions, alpha0: float, grid: np.ndarray,
                        u: np.ndarray) -> tuple[float, float]:
    """Window [r1, grid end] on which the decay law is fit.

    r1 is the outermost of: radius 10, the radius where u falls to
    1e-6 alpha0, and the radius keeping the subleading drift
    |a| (1/r1 - 1/r_end) within budget. A minimum of ~20 lattice
    cells is always retained.
    """
    r_end = float(grid[-1])
    idx = np.searchsorted(u[::-1], 1e-6 * alpha0)
    r_small = float(grid[len(u) - 1 - idx]) if 0 < idx < len(u) else 10.0
    r1 = max(10.0, r_small)
    a = abs(_subleading_coefficient(dims.n))
    if a > 1e-12:
        r_drift = 1.0 / (1.0 / r_end + _TAIL_DRIFT_BUDGET / a)
        r1 = max(r1, r_drift)
    step = float(grid[-1] - grid[-2])
    r1 = min(r1, r_end - 20.0 * step)
    return r1, r_end


def _window_slice(profile_grid: np.ndarray, window: tuple[float, float]) -> slice:
    i0 = int(np.searchsorted(profile_grid, window[0] - 1e-12))
    i1 = int(np.searchsorted(profile_grid, window[1] + 1e-12))
    return slice(i0, i1)


def fit_tail(profile: RadialProfile, window: Optional[tuple[float, float]] = None,
             source: str = "u") -> TailFit:
    """Fit the decay-law constant on a window of the stored grid.

    Parameters
    ----------
    profile : RadialProfile
    window : (float, float), optional
        Radii delimiting the fit; defaults to the window chosen at
        build time. Must lie inside the grid and contain at least 8
        samples.
    source : {"u", "du"}
        Fit u r^{(n-1)/2} e^r directly, or |u'| divided by the exact
        derivative factor (1 + (n-1)/(2r)) of the tail model, which
        estimates the same constant (the naive |u'| rescaling carries
        an (n-1)/(2r) bias that never falls below 1% at reachable
        radii).

    Returns
    -------
    TailFit

    Raises
    ------
    TailFitError
        If the in-window deviation exceeds 5%: the window is not in
        the asymptotic regime.
    """
    if window is None:
        window = (profile.tail_r_star, profile.r_end)
    lo, hi = float(window[0]), float(window[1])
    if lo >= hi or lo < profile.t0 or hi > profile.r_end + 1e-12:
        raise ValueError(f"window ({lo}, {hi}) not inside the grid")
    sel = _window_slice(profile.grid, (lo, hi))
    r = profile.grid[sel]
    if r.size < 8:
        raise ValueError("window contains fewer than 8 grid points")
    k = _decay_exponent(profile.dims.n)
    if source == "u":
        phi = profile.u[sel] * r ** k * np.exp(r)
    elif source == "du":
        phi = np.abs(profile.du[sel]) * r ** k * np.exp(r) / (1.0 + k / r)
    else:
        raise ValueError(f"unknown source {source!r}")
    c = float(np.mean(phi))
    dev = float(np.max(np.abs(phi - c)) / c)
    if dev > TAIL_FIT_LIMIT:
        raise TailFitError(
            f"rescaled tail deviates {dev:.1%} on ({lo:.2f}, {hi:.2f}); "
            "window is not in the asymptotic regime"
        )
    return TailFit(tail_c=c, max_rel_deviation=dev, window=(lo, hi), source=source)


def assemble_profile(dims: Dimensions, alpha0: float, grid: np.ndarray,
                     u: np.ndarray, du: np.ndarray, seam_radius: Optional[float],
                     seam_defect: Optional[float], config=None) -> RadialProfile:
    """Wrap raw samples into a RadialProfile (fits the tail, builds
    the interpolants, enforces the invariants). Used by the shooting
    pipeline and the CSV loader rather than called directly."""
    grid = np.asarray(grid, dtype=float)
    u = np.asarray(u, dtype=float)
    du = np.asarray(du, dtype=float)
    if not (np.all(np.diff(grid) > 0) and np.all(u > 0) and np.all(du < 0)):
        raise ValueError("profile samples must have increasing r, u > 0, u' < 0")
    for arr in (grid, u, du):
        arr.setflags(write=False)

    p, n = dims.p, dims.n
    ddu = u - np.maximum(u, 0.0) ** (p - 1.0) - (n - 1.0) * du / grid
    spline_u = CubicHermiteSpline(grid, u, du)
    spline_du = CubicHermiteSpline(grid, du, ddu)

    window = default_tail_window(dims, alpha0, grid, u)
    k = _decay_exponent(n)
    sel = _window_slice(grid, window)
    phi = u[sel] * grid[sel] ** k * np.exp(grid[sel])
    tail_c = float(np.mean(phi))
    tail_dev = float(np.max(np.abs(phi - tail_c)) / tail_c)
    if tail_dev > TAIL_DEVIATION_LIMIT:
        raise TailFitError(
            f"tail deviation {tail_dev:.1%} exceeds {TAIL_DEVIATION_LIMIT:.0%} "
            f"on the build window ({window[0]:.2f}, {window[1]:.2f})"
        )

    r_end = float(grid[-1])
    return RadialProfile(
        dims=dims, alpha0=float(alpha0), grid=grid, u=u, du=du,
        tail_c=tail_c, tail_r_star=float(window[0]), tail_deviation=tail_dev,
        seam_radius=seam_radius, seam_defect=seam_defect,
        _spline_u=spline_u, _spline_du=spline_du,
        _tail_amp_u=float(u[-1] * r_end ** k * math.exp(r_end)),
        _tail_amp_du=float(-du[-1] * r_end ** k * math.exp(r_end)),
    )


def eval_u(profile: RadialProfile, r) -> np.ndarray | float:
    """Evaluate u at any r >= 0 (scalar or array).

    Series below the first grid node (u(0) = alpha0 exactly), Hermite
    interpolant on the grid, decay law beyond it with the amplitude
    matched to the last sample.
    """
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radius must be non-negative")
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    out = np.empty_like(r_arr)
    dims, a0 = profile.dims, profile.alpha0
    lo = r_arr < profile.t0
    hi = r_arr > profile.r_end
    mid = ~(lo | hi)
    if np.any(lo):
        g = a0 - a0 ** (dims.p - 1.0)
        out[lo] = a0 + g * r_arr[lo] ** 2 / (2.0 * dims.n)
    if np.any(mid):
        out[mid] = profile._spline_u(r_arr[mid])
    if np.any(hi):
        k = _decay_exponent(dims.n)
        rh = r_arr[hi]
        out[hi] = profile._tail_amp_u * np.exp(-rh) * rh ** (-k)
    return float(out[0]) if scalar else out


def eval_du(profile: RadialProfile, r) -> np.ndarray | float:
    """Evaluate u' at any r >= 0 (scalar or array)."""
    r_arr = np.asarray(r, dtype=float)
    if np.any(r_arr < 0):
        raise ValueError("radius must be non-negative")
    scalar = r_arr.ndim == 0
    r_arr = np.atleast_1d(r_arr)
    out = np.empty_like(r_arr)
    dims, a0 = profile.dims, profile.alpha0
    lo = r_arr < profile.t0
    hi = r_arr > profile.r_end
    mid = ~(lo | hi)
    if np.any(lo):
        g = a0 - a0 ** (dims.p - 1.0)
        out[lo] = g * r_arr[lo] / dims.n
    if np.any(mid):
        out[mid] = profile._spline_du(r_arr[mid])
    if np.any(hi):
        k = _decay_exponent(dims.n)
        rh = r_arr[hi]
        out[hi] = -profile._tail_amp_du * np.exp(-rh) * rh ** (-k)
    return float(out[0]) if scalar else out


def _tail_bound(profile: RadialProfile, integrand: RadialIntegrand) -> float:
    """Upper bound on the integral beyond the grid end.

    Uses u <= 1.05 c e^{-r} r^{-k} and |u'| <= that times (1 + k/r),
    reducing to int_R^inf r^q e^{-s r} dr which is an upper incomplete
    gamma (or a monotone bound when q <= 0)."""
    a, b, w = integrand.u_power, integrand.du_power, integrand.r_weight
    k = _decay_exponent(profile.dims.n)
    R = profile.r_end
    s = a + b
    q = w - s * k
    amp = (1.05 * profile.tail_c) ** s * (1.0 + k / R) ** b
    if q <= 0.0:
        return amp * R ** q * math.exp(-s * R) / s
    return amp * s ** (-(q + 1.0)) * gamma_fn(q + 1.0) * float(gammaincc(q + 1.0, s * R))


def radial_integral(profile: RadialProfile, integrand: RadialIntegrand,
                    full_output: bool = False):
    """Integrate u^a |u'|^b r^w over (0, infinity).

    The grid part uses a corrected trapezoid rule with the exact nodal
    derivative of the integrand (u'' is available from the equation),
    an O(h^4) composite scheme. The part beyond the grid is bounded
    analytically and must stay below 1e-10 of the total.

    Parameters
    ----------
    profile : RadialProfile
    integrand : RadialIntegrand
    full_output : bool
        If true, return (value, tail_bound).

    Raises
    ------
    ValueError
        If the truncated tail cannot be certified negligible.
    """
    a, b, w = integrand.u_power, integrand.du_power, integrand.r_weight
    r, u, du = profile.grid, profile.u, profile.du
    ddu = profile.curvature()
    adu = -du  # |u'|, positive
    f = u ** a * adu ** b * r ** w
    # d/dr of f, term by term; u > 0 and u' < 0 keep every ratio finite
    dlog = np.zeros_like(f)
    if a:
        dlog += a * du / u
    if b:
        dlog += b * ddu / du
    if w:
        dlog += w / r
    df = f * dlog
    h = np.diff(r)
    grid_part = float(np.sum(h / 2.0 * (f[:-1] + f[1:]) + h * h / 12.0 * (df[:-1] - df[1:])))
    # below the series-start node: f ~ f(t0) (r/t0)^{w+b}, a sliver
    head = f[0] * r[0] / (w + b + 1.0)
    total = grid_part + head
    bound = _tail_bound(profile, integrand)
    if not bound <= 1e-10 * abs(total):
        raise ValueError(
            f"tail bound {bound:.2e} is not negligible against {total:.6e}; "
            "deepen the profile floor"
        )
    if full_output:
        return total, bound
    return total


def profile_residual(profile: RadialProfile, r_min: float = 0.1,
                     r_margin: float = 0.5) -> float:
    """Max defect of the equation on the uniform interior grid.

    u'' is reconstructed from the stored u' by a five-point
    fourth-order difference and substituted into the equation; the
    result measures profile quality independently of the integrator's
    own error control.
    """
    r, u, du = profile.grid[1:], profile.u[1:], profile.du[1:]  # uniform lattice part
    h = r[1] - r[0]
    i = slice(2, -2)
    ddu_fd = (-du[4:] + 8.0 * du[3:-1] - 8.0 * du[1:-3] + du[:-4]) / (12.0 * h)
    p, n = profile.dims.p, profile.dims.n
    res = ddu_fd + (n - 1.0) / r[i] * du[i] - u[i] + np.maximum(u[i], 0.0) ** (p - 1.0)
    keep = (r[i] >= r_min) & (r[i] <= r[-1] - r_margin)
    return float(np.max(np.abs(res[keep])))


def save_profile(profile: RadialProfile, csv_path) -> Path:
    """Write the grid to CSV (columns r,u,du) with a JSON sidecar
    holding {n, m, p, alpha0, tail_c, tail_r_star}. Returns the
    sidecar path."""
    csv_path = Path(csv_path)
    with open(csv_path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["r", "u", "du"])
        for r, u, du in zip(profile.grid, profile.u, profile.du):
            writer.writerow([repr(float(r)), repr(float(u)), repr(float(du))])
    header = {
        "n": profile.dims.n,
        "m": profile.dims.m,
        "p": profile.dims.p,
        "alpha0": profile.alpha0,
        "tail_c": profile.tail_c,
        "tail_r_star": profile.tail_r_star,
    }
    json_path = csv_path.with_suffix(".json")
    with open(json_path, "w", newline="") as fh:
        json.dump(header, fh, indent=2)
        fh.write("\n")
    return json_path


def load_profile(csv_path) -> RadialProfile:
    """Rebuild a profile from :func:`save_profile` output."""
    csv_path = Path(csv_path)
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        names = next(reader)
        if names != ["r", "u", "du"]:
            raise ValueError(f"unexpected CSV columns {names}")
        rows = np.array([[float(v) for v in row] for row in reader])
    with open(csv_path.with_suffix(".json")) as fh:
        header = json.load(fh)
    dims = Dimensions(n=int(header["n"]), m=int(header["m"]))
    return assemble_profile(dims, float(header["alpha0"]),
                            rows[:, 0], rows[:, 1], rows[:, 2],
                            seam_radius=None, seam_defect=None)
