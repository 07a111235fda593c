"""Reduced energy of multi-peak configurations and its maximization.

To second order in the concentration parameter eps, the energy of a
k0-peak configuration xi = (xi_1, ..., xi_k0) splits into a constant,
a curvature term and a pairwise interaction penalty:

    E(xi) = k0 alpha + (beta/2) eps^2 sum_i s(xi_i)
            - (gamma/2) sum_{i != j} u(d(xi_i, xi_j)/eps)

with alpha, beta, gamma the profile constants, s the scalar
curvature and d the model distance. Since beta < 0 in every computed
dimension pair, maximizers sit where curvature is smallest while the
interaction keeps distinct peaks a logarithmic-in-eps distance apart.

:func:`optimize_peaks` maximizes E over the admissible set by a
deterministic multi-start coordinate pattern search. Candidates that
violate admissibility are simply rejected, so the returned
configuration is always admissible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .constants import GroundStateConstants
from .manifolds import AdmissibilityReport, PeakConfiguration, admissibility_report
from .profile import RadialProfile, eval_u


class NoAdmissibleStartError(RuntimeError):
    """Raised when every multi-start seed violates admissibility."""


@dataclass(frozen=True)
class ReducedEnergyReport:
    """Value and decomposition of the reduced energy at one configuration."""

    value: float
    leading_term: float       # k0 * alpha
    curvature_term: float     # (beta/2) eps^2 sum_i s(xi_i)
    interaction_term: float   # -(gamma/2) sum_{i != j} u(d_ij/eps)
    admissibility: AdmissibilityReport


@dataclass(frozen=True)
class OptimizerConfig:
    """Knobs of the multi-start pattern search."""

    n_starts: int = 6
    max_sweeps: int = 400
    step_init_factor: float = 0.25   # initial step as a fraction of sqrt(eps)
    step_min: float = 1e-5
    shrink: float = 0.5
    seed: int = 0
    tie_tol: float = 1e-14


def _u_of_r(profile: RadialProfile) -> Callable[[float], float]:
    return lambda r: float(eval_u(profile, r))


def reduced_energy(config: PeakConfiguration, model,
                   constants: GroundStateConstants,
                   profile: RadialProfile) -> ReducedEnergyReport:
    """Evaluate the second-order reduced energy of a configuration."""
    u = _u_of_r(profile)
    report = admissibility_report(config, model, u)
    k0 = config.k0
    curv = sum(model.scalar_curvature(p) for p in config.points)
    leading = k0 * constants.alpha
    curvature_term = 0.5 * constants.beta * config.eps ** 2 * curv
    interaction_term = -0.5 * constants.gamma * report.interaction_sum
    return ReducedEnergyReport(
        value=leading + curvature_term + interaction_term,
        leading_term=leading, curvature_term=curvature_term,
        interaction_term=interaction_term, admissibility=report,
    )


def seed_peaks(model, center, eps: float, offsets: Sequence, rho: float) -> PeakConfiguration:
    """Spread k0 peaks around a center at tangent offsets scaled by sqrt(eps).

    ``offsets`` are coefficient vectors in R^n against the model's
    tangent basis at the center; peak i sits at
    exp_center(sqrt(eps) * offsets[i]). Offsets must be pairwise
    distinct (coincident peaks have divergent interaction).
    """
    center = model.validate_point(center)
    offs = [np.asarray(o, dtype=float) for o in offsets]
    for i in range(len(offs)):
        for j in range(i + 1, len(offs)):
            if np.linalg.norm(offs[i] - offs[j]) < 1e-12:
                raise ValueError(f"offsets {i} and {j} coincide")
    basis = model.tangent_basis(center)
    pts = []
    for o in offs:
        if o.shape != (model.n,):
            raise ValueError(f"offsets must be vectors in R^{model.n}")
        pts.append(model.offset_point(center, math.sqrt(eps) * (o @ basis)))
    return PeakConfiguration(eps=eps, rho=rho, center=center, points=tuple(pts))


def _min_pairwise(model, points) -> float:
    if len(points) < 2:
        return math.inf
    return min(model.distance(points[i], points[j])
               for i in range(len(points)) for j in range(i + 1, len(points)))


def _start_offsets(k0: int, n: int, rng: np.random.Generator, jitter: float):
    """Distinct unit-ish directions: coordinate vectors, their
    negatives, then random ones; optionally jittered."""
    dirs = []
    eye = np.eye(n)
    for i in range(min(k0, n)):
        dirs.append(eye[i].copy())
    for i in range(min(max(k0 - n, 0), n)):
        dirs.append(-eye[i].copy())
    while len(dirs) < k0:
        v = rng.standard_normal(n)
        dirs.append(v / np.linalg.norm(v))
    if jitter > 0.0:
        dirs = [d + jitter * rng.standard_normal(n) for d in dirs]
    if k0 == 1:
        dirs = [np.zeros(n)] if jitter == 0.0 else dirs
    return dirs


def optimize_peaks(model, constants: GroundStateConstants, profile: RadialProfile,
                   k0: int, eps: float, rho: float, center,
                   opt: Optional[OptimizerConfig] = None
                   ) -> tuple[PeakConfiguration, ReducedEnergyReport]:
    """Maximize the reduced energy over admissible k0-peak configurations.

    Multi-start: seeds at sqrt(eps) x {0.5, 1, 2} x unit directions
    around the center plus seeded random jitters. Each start runs a
    coordinate pattern search (try +/- step along every tangent basis
    direction of every peak, take the best improvement, halve the step
    when none) with inadmissible candidates rejected outright.

    Returns the best (configuration, report); near-ties within
    ``opt.tie_tol`` prefer the larger minimum pairwise distance.

    Raises
    ------
    NoAdmissibleStartError
        If no start seed is admissible.
    """
    opt = opt or OptimizerConfig()
    center = model.validate_point(center)
    rng = np.random.default_rng(opt.seed)

    def energy(points) -> Optional[ReducedEnergyReport]:
        cfg = PeakConfiguration(eps=eps, rho=rho, center=center, points=tuple(points))
        rep = reduced_energy(cfg, model, constants, profile)
        return rep if rep.admissibility.admissible else None

    # ladder of scale factors, then jittered replicas
    seeds = []
    for scale in (0.5, 1.0, 2.0):
        seeds.append([scale * d for d in _start_offsets(k0, model.n, rng, 0.0)])
    while len(seeds) < max(opt.n_starts, 3):
        scale = float(rng.choice([0.5, 1.0, 2.0]))
        seeds.append([scale * d for d in _start_offsets(k0, model.n, rng, 0.3)])

    best: Optional[tuple[PeakConfiguration, ReducedEnergyReport]] = None
    any_admissible = False
    for offsets in seeds:
        try:
            cfg0 = seed_peaks(model, center, eps, offsets, rho)
        except ValueError:
            continue
        rep0 = energy(cfg0.points)
        if rep0 is None:
            continue
        any_admissible = True
        points = [p.copy() for p in cfg0.points]
        value = rep0.value
        step = opt.step_init_factor * math.sqrt(eps)
        sweeps = 0
        while step >= opt.step_min and sweeps < opt.max_sweeps:
            sweeps += 1
            best_move = None
            for i in range(k0):
                basis = model.tangent_basis(points[i])
                for direction in basis:
                    for sign in (1.0, -1.0):
                        trial = list(points)
                        try:
                            trial[i] = model.offset_point(points[i], sign * step * direction)
                        except ValueError:
                            continue
                        rep = energy(trial)
                        if rep is not None and rep.value > value + 1e-16 * abs(value):
                            if best_move is None or rep.value > best_move[0].value:
                                best_move = (rep, trial)
            if best_move is None:
                step *= opt.shrink
            else:
                value = best_move[0].value
                points = best_move[1]
        final_rep = energy(points)
        if final_rep is None:
            continue
        cand = (PeakConfiguration(eps=eps, rho=rho, center=center,
                                  points=tuple(points)), final_rep)
        if best is None:
            best = cand
        else:
            dv = cand[1].value - best[1].value
            if dv > opt.tie_tol:
                best = cand
            elif abs(dv) <= opt.tie_tol:
                if _min_pairwise(model, cand[0].points) > _min_pairwise(model, best[0].points):
                    best = cand
    if not any_admissible:
        raise NoAdmissibleStartError(
            f"no admissible start among {len(seeds)} seeds (k0={k0}, eps={eps}, rho={rho})")
    assert best is not None
    return best
