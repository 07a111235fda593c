"""Geometric backends the peak landscape runs on.

Two model families cover what the reduced energy needs, which is very
little: scalar curvature at a point, geodesic distance, and an
exponential-map step from a point along a tangent direction.

* :class:`SphereModel` - the round n-sphere of radius R embedded in
  R^{n+1}; curvature n(n-1)/R^2 everywhere, distances by arc length.
* :class:`EuclideanModel` - flat R^n carrying a synthetic curvature
  field from a registered family (constant / quadratic well / double
  well), for experiments where the curvature landscape is prescribed
  rather than derived from a metric.

Models are config-file friendly: :func:`model_from_config` accepts
dicts like {"model": "sphere", "n": 3, "R": 1.0} or
{"model": "euclidean", "n": 2, "curvature": "quadratic", "s0": 6.0,
"x0": [0, 0]}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np


class ModelConfigError(ValueError):
    """Raised for malformed model configuration dicts."""


def _unit(x: np.ndarray) -> np.ndarray:
    return x / np.linalg.norm(x)


@dataclass(frozen=True)
class SphereModel:
    """Round sphere S^n_R as the set |x| = R in R^{n+1}."""

    n: int
    R: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("sphere dimension must be >= 1")
        if self.R <= 0:
            raise ValueError("sphere radius must be positive")

    @property
    def ambient_dim(self) -> int:
        return self.n + 1

    @property
    def injectivity_radius(self) -> float:
        return np.pi * self.R

    def validate_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.ambient_dim,):
            raise ValueError(f"point must live in R^{self.ambient_dim}")
        if abs(np.linalg.norm(x) - self.R) > 1e-9 * self.R:
            raise ValueError("point is not on the sphere")
        return x

    def scalar_curvature(self, x) -> float:
        self.validate_point(x)
        return self.n * (self.n - 1.0) / (self.R * self.R)

    def distance(self, x, y) -> float:
        """Arc length R theta via the numerically stable half-angle form."""
        xu = _unit(self.validate_point(x))
        yu = _unit(self.validate_point(y))
        theta = 2.0 * np.arctan2(np.linalg.norm(xu - yu), np.linalg.norm(xu + yu))
        return self.R * theta

    def tangent_basis(self, x) -> np.ndarray:
        """Orthonormal basis of the tangent space at x, shape (n, n+1).

        Built by reflecting the coordinate frame with the Householder
        map sending e_{n+1} to x/R, so the basis is deterministic and
        varies continuously except at the antipode of e_{n+1}.
        """
        xu = _unit(self.validate_point(x))
        e_last = np.zeros(self.ambient_dim)
        e_last[-1] = 1.0
        v = xu - e_last
        nv = np.linalg.norm(v)
        if nv < 1e-14:
            return np.eye(self.ambient_dim)[:-1]
        v /= nv
        basis = np.eye(self.ambient_dim)[:-1] - 2.0 * np.outer(
            np.eye(self.ambient_dim)[:-1] @ v, v)
        return basis

    def offset_point(self, x, v) -> np.ndarray:
        """Exponential map: walk geodesic length |v| from x along the
        ambient tangent vector v (must be orthogonal to x)."""
        x = self.validate_point(x)
        v = np.asarray(v, dtype=float)
        if v.shape != (self.ambient_dim,):
            raise ValueError(f"tangent vector must live in R^{self.ambient_dim}")
        if abs(float(v @ x)) > 1e-9 * self.R * max(np.linalg.norm(v), 1.0):
            raise ValueError("tangent vector is not orthogonal to the base point")
        L = float(np.linalg.norm(v))
        if L == 0.0:
            return x.copy()
        if L >= self.injectivity_radius:
            raise ValueError(f"step length {L:.3g} reaches the cut locus")
        t = L / self.R
        out = np.cos(t) * x + np.sin(t) * self.R * (v / L)
        return self.R * _unit(out)  # scrub accumulated norm drift


CurvatureField = Callable[[np.ndarray], float]


def _constant_field(s0: float, x0: np.ndarray) -> CurvatureField:
    return lambda x: s0


def _quadratic_field(s0: float, x0: np.ndarray) -> CurvatureField:
    """Isolated curvature minimum s0 at x0, growing like |x - x0|^2."""
    return lambda x: s0 + float(np.sum((np.asarray(x, dtype=float) - x0) ** 2))


def _double_well_field(s0: float, x0: np.ndarray, d: float = 1.0) -> CurvatureField:
    """Ring of minima at |x - x0| = d with a local maximum at x0."""
    def field(x):
        q = float(np.sum((np.asarray(x, dtype=float) - x0) ** 2))
        return s0 + (q - d * d) ** 2
    return field


CURVATURE_FAMILIES = {
    "constant": _constant_field,
    "quadratic": _quadratic_field,
    "double_well": _double_well_field,
}


@dataclass(frozen=True, eq=False)
class EuclideanModel:
    """Flat R^n with a synthetic scalar-curvature field."""

    n: int
    field: CurvatureField
    family: str = "constant"
    s0: float = 0.0
    x0: Optional[np.ndarray] = None

    @property
    def ambient_dim(self) -> int:
        return self.n

    @property
    def injectivity_radius(self) -> float:
        return np.inf

    def validate_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"point must live in R^{self.n}")
        return x

    def scalar_curvature(self, x) -> float:
        return float(self.field(self.validate_point(x)))

    def distance(self, x, y) -> float:
        return float(np.linalg.norm(self.validate_point(x) - self.validate_point(y)))

    def tangent_basis(self, x) -> np.ndarray:
        self.validate_point(x)
        return np.eye(self.n)

    def offset_point(self, x, v) -> np.ndarray:
        x = self.validate_point(x)
        v = np.asarray(v, dtype=float)
        if v.shape != (self.n,):
            raise ValueError(f"tangent vector must live in R^{self.n}")
        return x + v


def euclidean_model(n: int, family: str = "constant", s0: float = 0.0,
                    x0=None, **params) -> EuclideanModel:
    """Build a flat model with a registered curvature family."""
    if family not in CURVATURE_FAMILIES:
        raise ModelConfigError(
            f"unknown curvature family {family!r}; "
            f"registered: {sorted(CURVATURE_FAMILIES)}")
    x0 = np.zeros(n) if x0 is None else np.array(x0, dtype=float)
    if x0.shape != (n,):
        raise ModelConfigError(f"x0 must be a point in R^{n}")
    x0.setflags(write=False)
    field = CURVATURE_FAMILIES[family](s0, x0, **params)
    return EuclideanModel(n=n, field=field, family=family, s0=s0, x0=x0)


def model_from_config(config: dict):
    """Instantiate a model from a plain config dict (see module docstring)."""
    if not isinstance(config, dict) or "model" not in config:
        raise ModelConfigError("config must be a dict with a 'model' key")
    kind = config["model"]
    try:
        if kind == "sphere":
            return SphereModel(n=int(config["n"]), R=float(config.get("R", 1.0)))
        if kind == "euclidean":
            extra = {k: config[k] for k in ("d",) if k in config}
            return euclidean_model(
                n=int(config["n"]),
                family=config.get("curvature", "constant"),
                s0=float(config.get("s0", 0.0)),
                x0=config.get("x0"),
                **extra,
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelConfigError(f"bad {kind!r} config: {exc}") from exc
    raise ModelConfigError(f"unknown model kind {kind!r}")


@dataclass(frozen=True, eq=False)
class PeakConfiguration:
    """k0 candidate peak locations around a center, at concentration eps.

    Admissibility (checked by :func:`admissibility_report`) demands
    every peak within distance rho of the center and the ordered-pair
    interaction sum  sum_{i != j} u(d(xi_i, xi_j)/eps)  below eps^2.
    """

    eps: float
    rho: float
    center: np.ndarray
    points: tuple[np.ndarray, ...]

    def __post_init__(self):
        if not (0.0 < self.eps < 1.0):
            raise ValueError("eps must be in (0, 1)")
        if self.rho <= 0.0:
            raise ValueError("rho must be positive")
        if len(self.points) < 1:
            raise ValueError("need at least one peak")

    @property
    def k0(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    max_center_distance: float
    interaction_sum: float
    budget: float  # eps^2


def admissibility_report(config: PeakConfiguration, model,
                         u_of_r: Callable[[float], float]) -> AdmissibilityReport:
    """Check the admissibility constraints of a peak configuration.

    ``u_of_r`` is the profile evaluator used for the interaction sum
    (pass ``lambda r: eval_u(profile, r)``).
    """
    pts = [model.validate_point(p) for p in config.points]
    center = model.validate_point(config.center)
    d_center = max(model.distance(center, p) for p in pts)
    inter = 0.0
    for i in range(len(pts)):
        for j in range(len(pts)):
            if i != j:
                inter += float(u_of_r(model.distance(pts[i], pts[j]) / config.eps))
    budget = config.eps * config.eps
    ok = (d_center < config.rho) and (inter < budget)
    return AdmissibilityReport(admissible=bool(ok), max_center_distance=float(d_center),
                               interaction_sum=float(inter), budget=float(budget))
