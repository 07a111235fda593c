"""Command-line front end.

Subcommands:

* ``ground-state``  solve one (n, m) profile; writes an r,u,du CSV and
  a JSON sidecar of scalars next to it.
* ``beta-table``    run the constants pipeline over (m, n) rows; CSV
  (columns m,n,term1,term2,beta,alpha,gamma,mE) or JSON.
* ``verify``        re-run a built-in verification suite and write a
  JSON report; exit 0 only if every check passes.
* ``optimize``      maximize the reduced peak-interaction energy for a
  model described by a JSON config file.

Every run that writes an output file also writes
``<out>.manifest.json`` with the command, parameters, tolerances,
package version and wall time. Output bodies are deterministic:
repeating a command byte-reproduces them (only the manifest's
wall_time_s differs).

Environment overrides, echoed in the manifest (explicit flags win):

* ``PEAKFORGE_ODE_TOL``     relative tolerance of the ODE integrator
* ``PEAKFORGE_BISECT_TOL``  relative bracket width of the bisection
* ``PEAKFORGE_RMAX``        outer classification radius
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .constants import (DEFAULT_ROWS, REFERENCE_TABLE, beta_table,
                        compute_gamma, ground_state_constants, sphere_volume)
from .dimensions import Dimensions
from .landscape import NoAdmissibleStartError, OptimizerConfig, optimize_peaks
from .manifolds import ModelConfigError, SphereModel, model_from_config
from .profile import RadialIntegrand, radial_integral, save_profile
from .shooting import (BracketingError, IntegrationError, ShootingConfig,
                       ground_state_profile)
from .sphere_energy import curvature_slope_check

_ENV_VARS = {
    "PEAKFORGE_ODE_TOL": "ode_rel_tol",
    "PEAKFORGE_BISECT_TOL": "bisect_tol",
    "PEAKFORGE_RMAX": "r_max",
}


def _resolve_config(tol=None, rmax=None):
    """ShootingConfig from defaults, environment, then explicit flags."""
    kwargs = {}
    env_overrides = {}
    for var, field in _ENV_VARS.items():
        raw = os.environ.get(var)
        if raw is None:
            continue
        try:
            kwargs[field] = float(raw)
        except ValueError:
            raise ValueError(f"{var} must be a float, got {raw!r}")
        env_overrides[var] = raw
    if tol is not None:
        kwargs["bisect_tol"] = tol
    if rmax is not None:
        kwargs["r_max"] = rmax
    return ShootingConfig(**kwargs), env_overrides


def _write_manifest(out_path, command, parameters, config: ShootingConfig,
                    env_overrides, wall_time):
    manifest = {
        "command": command,
        "parameters": parameters,
        "tolerances": {
            "bisect_tol": config.bisect_tol,
            "ode_rel_tol": config.ode_rel_tol,
            "ode_abs_tol": config.ode_abs_tol,
            "r_max": config.r_max,
            "grid_step": config.grid_step,
        },
        "env_overrides": env_overrides,
        "version": __version__,
        "wall_time_s": round(wall_time, 3),
    }
    path = Path(str(out_path) + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2) + "\n")
    return path


def _emit(text: str, out):
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _parse_rows(text: str):
    """'m,n;m,n' -> [(m, n), ...]"""
    rows = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = part.split(",")
        if len(bits) != 2:
            raise ValueError(f"row {part!r} is not of the form m,n")
        rows.append((int(bits[0]), int(bits[1])))
    if not rows:
        raise ValueError("no rows given")
    return rows


def _fail(msg: str, code: int) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return code


# ---------------------------------------------------------------- ground-state

def _cmd_ground_state(args) -> int:
    try:
        dims = Dimensions(n=args.n, m=args.m)
    except (TypeError, ValueError) as exc:
        return _fail(str(exc), 2)
    if dims.N > 9:
        print(f"warning: n+m = {dims.N} is outside the bundled reference "
              "range n+m <= 9; no regression values cover this row",
              file=sys.stderr)
    try:
        config, env = _resolve_config(args.tol, args.rmax)
    except ValueError as exc:
        return _fail(str(exc), 2)
    start = time.perf_counter()
    try:
        profile = ground_state_profile(dims, config)
    except (BracketingError, IntegrationError) as exc:
        return _fail(str(exc), 3)
    save_profile(profile, args.out)
    wall = time.perf_counter() - start
    _write_manifest(args.out, "ground-state",
                    {"n": args.n, "m": args.m, "out": str(args.out)},
                    config, env, wall)
    print(f"n={dims.n} m={dims.m} p={dims.p:.6f} alpha0={profile.alpha0:.12f} "
          f"-> {args.out}", file=sys.stderr)
    return 0


# ------------------------------------------------------------------ beta-table

def _table_payload(rows, config):
    table = beta_table(rows, config)
    ok, failed = [], []
    for row in table:
        if row.error is not None:
            failed.append({"m": row.m, "n": row.n, "error": row.error})
        else:
            c = row.constants
            ok.append({"m": row.m, "n": row.n,
                       "term1": float(c.beta_term1), "term2": float(c.beta_term2),
                       "beta": float(c.beta), "alpha": float(c.alpha),
                       "gamma": float(c.gamma), "mE": float(c.m_E)})
    return ok, failed


def _cmd_beta_table(args) -> int:
    if args.rows is not None:
        try:
            rows = _parse_rows(args.rows)
        except ValueError as exc:
            return _fail(str(exc), 2)
    else:
        rows = list(DEFAULT_ROWS)
    try:
        config, env = _resolve_config(args.tol, args.rmax)
    except ValueError as exc:
        return _fail(str(exc), 2)
    start = time.perf_counter()
    ok, failed = _table_payload(rows, config)
    wall = time.perf_counter() - start
    for rec in failed:
        print(f"row (m={rec['m']}, n={rec['n']}) failed: {rec['error']}",
              file=sys.stderr)
    if not ok:
        return _fail("every requested row failed", 3)
    if args.format == "csv":
        # CSV is the display artifact: 5 significant digits, matching the
        # bundled reference style; JSON carries full double precision.
        lines = ["m,n,term1,term2,beta,alpha,gamma,mE"]
        for rec in ok:
            lines.append(",".join(
                [str(rec["m"]), str(rec["n"])]
                + [f"{rec[k]:.5g}" for k in
                   ("term1", "term2", "beta", "alpha", "gamma", "mE")]))
        body = "\n".join(lines) + "\n"
    else:
        body = json.dumps({"rows": ok, "failed": failed}, indent=2) + "\n"
    _emit(body, args.out)
    if args.out is not None:
        _write_manifest(args.out, "beta-table",
                        {"rows": [list(r) for r in rows],
                         "format": args.format, "out": str(args.out)},
                        config, env, wall)
    return 0


# ---------------------------------------------------------------------- verify

def _suite_table1(rows, config):
    checks = []
    for row in beta_table(rows, config):
        name = f"table1[m={row.m},n={row.n}]"
        ref = REFERENCE_TABLE.get((row.m, row.n))
        if row.error is not None:
            checks.append({"name": name, "passed": False, "error": row.error})
            continue
        if ref is None:
            checks.append({"name": name, "passed": False,
                           "error": "no reference value for this row"})
            continue
        c = row.constants
        rel = [abs(c.beta_term1 - ref[0]) / abs(ref[0]),
               abs(c.beta_term2 - ref[1]) / abs(ref[1]),
               abs(c.beta - ref[2]) / abs(ref[2])]
        checks.append({"name": name, "passed": bool(max(rel) <= 0.01),
                       "rel_term1": rel[0], "rel_term2": rel[1],
                       "rel_beta": rel[2], "tolerance": 0.01})
    return checks


def _suite_identities(rows, config):
    checks = []
    rng = np.random.default_rng(1871)
    for m, n in rows:
        name = f"identities[m={m},n={n}]"
        try:
            dims = Dimensions(n=n, m=m)
            profile = ground_state_profile(dims, config)
        except Exception as exc:
            checks.append({"name": name, "passed": False, "error": str(exc)})
            continue
        V = sphere_volume(n)
        p = dims.p
        grad2 = V * radial_integral(profile, RadialIntegrand(0.0, 2.0, n - 1))
        mass2 = V * radial_integral(profile, RadialIntegrand(2.0, 0.0, n - 1))
        power = V * radial_integral(profile, RadialIntegrand(p, 0.0, n - 1))
        nehari = abs(grad2 + mass2 - power) / power
        pohozaev = abs((n - 2.0) / 2.0 * grad2 + n / 2.0 * mass2
                       - n / p * power) / (n / p * power)
        alpha = 0.5 * grad2 + 0.5 * mass2 - power / p
        m_e = (p - 2.0) / (2.0 * p) * power
        level = abs(alpha - m_e) / abs(alpha)
        e1 = np.zeros(n)
        e1[0] = 1.0
        g_ref = compute_gamma(profile, e1)
        iso = 0.0
        for _ in range(2):
            v = rng.standard_normal(n)
            iso = max(iso, abs(compute_gamma(profile, v / np.linalg.norm(v))
                               - g_ref) / g_ref)
        checks.append({"name": name,
                       "passed": bool(max(nehari, pohozaev, level) <= 1e-6
                                      and iso <= 1e-8),
                       "nehari_rel": nehari, "pohozaev_rel": pohozaev,
                       "level_rel": level, "gamma_isotropy_rel": iso,
                       "tolerance": 1e-6, "isotropy_tolerance": 1e-8})
    return checks


def _suite_expansion(rows, config):
    checks = []
    for m, n in rows:
        name = f"expansion[m={m},n={n}]"
        try:
            dims = Dimensions(n=n, m=m)
            profile = ground_state_profile(dims, config)
            consts = ground_state_constants(dims, config, profile=profile)
            res = curvature_slope_check(profile, consts.alpha, consts.beta)
        except Exception as exc:
            checks.append({"name": name, "passed": False, "error": str(exc)})
            continue
        checks.append({"name": name, "passed": bool(res.rel_error <= 0.05),
                       "slope": res.slope, "target": res.target,
                       "rel_error": res.rel_error, "tolerance": 0.05,
                       "eps_ladder": list(res.eps_ladder)})
    return checks


_SUITES = {
    "table1": (_suite_table1, None),           # None -> DEFAULT_ROWS
    "identities": (_suite_identities, None),
    "expansion": (_suite_expansion, ((2, 2), (3, 4))),
}


def _cmd_verify(args) -> int:
    runner, default_rows = _SUITES[args.suite]
    if args.rows is not None:
        try:
            rows = _parse_rows(args.rows)
        except ValueError as exc:
            return _fail(str(exc), 2)
    else:
        rows = list(DEFAULT_ROWS) if default_rows is None else list(default_rows)
    try:
        config, env = _resolve_config(args.tol, args.rmax)
    except ValueError as exc:
        return _fail(str(exc), 2)
    start = time.perf_counter()
    checks = runner(rows, config)
    wall = time.perf_counter() - start
    passed = all(c["passed"] for c in checks)
    report = {"suite": args.suite, "rows": [list(r) for r in rows],
              "checks": checks, "passed": passed}
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    if args.out is not None:
        _write_manifest(args.out, "verify",
                        {"suite": args.suite,
                         "rows": [list(r) for r in rows],
                         "out": str(args.out)},
                        config, env, wall)
    for c in checks:
        tag = "pass" if c["passed"] else "FAIL"
        print(f"[{tag}] {c['name']}", file=sys.stderr)
    return 0 if passed else 1


# -------------------------------------------------------------------- optimize

def _default_center(model):
    """Pole of the sphere; the field's base point (or origin) in R^n."""
    if isinstance(model, SphereModel):
        center = np.zeros(model.ambient_dim)
        center[-1] = model.R
        return center
    if getattr(model, "x0", None) is not None:
        return np.asarray(model.x0, dtype=float)
    return np.zeros(model.n)


def _cmd_optimize(args) -> int:
    try:
        raw = json.loads(Path(args.model).read_text())
    except OSError as exc:
        return _fail(f"cannot read model config: {exc}", 2)
    except json.JSONDecodeError as exc:
        return _fail(f"model config is not valid JSON: {exc}", 2)
    try:
        model = model_from_config(raw)
    except ModelConfigError as exc:
        return _fail(str(exc), 2)
    if model.n != args.n:
        return _fail(f"model dimension n={model.n} does not match --n {args.n}", 2)
    if args.k0 < 1:
        return _fail("--k0 must be >= 1", 2)
    if not (0.0 < args.eps < 1.0):
        return _fail("--eps must be in (0, 1)", 2)
    if args.rho <= 0.0:
        return _fail("--rho must be positive", 2)
    try:
        dims = Dimensions(n=args.n, m=args.m)
    except (TypeError, ValueError) as exc:
        return _fail(str(exc), 2)
    try:
        config, env = _resolve_config(args.tol, args.rmax)
    except ValueError as exc:
        return _fail(str(exc), 2)
    start = time.perf_counter()
    try:
        profile = ground_state_profile(dims, config)
        consts = ground_state_constants(dims, config, profile=profile)
    except (BracketingError, IntegrationError) as exc:
        return _fail(str(exc), 3)
    center = _default_center(model)
    opt = OptimizerConfig(seed=args.seed)
    try:
        best_cfg, report = optimize_peaks(model, consts, profile,
                                          k0=args.k0, eps=args.eps,
                                          rho=args.rho, center=center, opt=opt)
    except NoAdmissibleStartError as exc:
        return _fail(str(exc), 3)
    wall = time.perf_counter() - start
    adm = report.admissibility
    payload = {
        "model": raw,
        "n": args.n, "m": args.m,
        "k0": args.k0, "eps": args.eps, "rho": args.rho, "seed": args.seed,
        "center": [float(v) for v in center],
        "points": [[float(v) for v in pt] for pt in best_cfg.points],
        "energy": report.value,
        "leading_term": report.leading_term,
        "curvature_term": report.curvature_term,
        "interaction_term": report.interaction_term,
        "admissible": adm.admissible,
        "max_center_distance": adm.max_center_distance,
        "interaction_sum": adm.interaction_sum,
        "interaction_budget": adm.budget,
    }
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    if args.out is not None:
        _write_manifest(args.out, "optimize",
                        {"model": str(args.model), "n": args.n, "m": args.m,
                         "k0": args.k0, "eps": args.eps, "rho": args.rho,
                         "seed": args.seed, "out": str(args.out)},
                        config, env, wall)
    return 0


# ----------------------------------------------------------------------- main

def _add_common(p):
    p.add_argument("--tol", type=float, default=None,
                   help="relative bracket tolerance of the bisection")
    p.add_argument("--rmax", type=float, default=None,
                   help="outer classification radius")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peakforge",
        description="ground-state profiles and peak-concentration constants")
    parser.add_argument("--version", action="version",
                        version=f"peakforge {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ground-state", help="solve one (n, m) radial profile")
    p.add_argument("--n", type=int, required=True, help="curved factor dimension")
    p.add_argument("--m", type=int, required=True, help="flat factor dimension")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--rmax", type=float, default=None)
    p.add_argument("--out", required=True,
                   help="CSV path; a .json sidecar lands next to it")
    p.set_defaults(func=_cmd_ground_state)

    p = sub.add_parser("beta-table", help="constants over (m, n) rows")
    p.add_argument("--rows", default=None,
                   help="semicolon list 'm,n;m,n' (default: the 20 bundled rows)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    _add_common(p)
    p.set_defaults(func=_cmd_beta_table)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=tuple(_SUITES), required=True)
    p.add_argument("--rows", default=None,
                   help="restrict to 'm,n;m,n' rows (table1/identities suites)")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("optimize", help="maximize the reduced peak energy")
    p.add_argument("--model", required=True, help="model config JSON file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--k0", type=int, required=True, help="number of peaks")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--rho", type=float, required=True,
                   help="admissible radius around the center")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=_cmd_optimize)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)
