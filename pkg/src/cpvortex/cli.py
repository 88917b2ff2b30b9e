"""Command line interface: simulate, verify, tabulate.

Exit codes: 0 success, 1 failed verification, 2 unreadable or invalid
configuration, 3 collision during integration (the step index is
reported), 4 numeric or domain failure.

Default check tolerances can be loosened or tightened for exploratory runs
through the environment variable CPVORTEX_TOL_SCALE (a positive float
multiplier; non-normative, the shipped defaults are the contract).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time

import numpy as np

from . import dynamics, greens, momentum, verify
from .errors import (
    CollisionError,
    ConfigurationError,
    CpvortexError,
    DomainError,
    NumericError,
    OracleError,
    SingularityError,
)
from .geom import ProjectivePoint
from .su3flag import FlagCoords

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_PARSE = 2
EXIT_COLLISION = 3
EXIT_NUMERIC = 4


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


# ---------------------------------------------------------------------------
# configuration parsing


def _parse_position(manifold: str, n: int, raw, index: int):
    if manifold == "plane":
        if not (isinstance(raw, (list, tuple)) and len(raw) == 2):
            raise ConfigurationError(f"vortex {index}: planar position must be [re, im], got {raw!r}")
        return complex(float(raw[0]), float(raw[1]))
    if not (isinstance(raw, (list, tuple)) and len(raw) == n + 1):
        raise ConfigurationError(
            f"vortex {index}: CP^{n} position needs {n + 1} homogeneous [re, im] pairs, got {raw!r}"
        )
    coords = []
    for pair in raw:
        if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
            raise ConfigurationError(f"vortex {index}: each coordinate must be [re, im], got {pair!r}")
        coords.append(complex(float(pair[0]), float(pair[1])))
    return ProjectivePoint(np.array(coords))


def load_config(path: str):
    """Read a JSON run configuration; raises ConfigurationError on any defect."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config {path!r} is not valid JSON: line {exc.lineno}: {exc.msg}") from exc

    try:
        manifold = doc["manifold"]
        if manifold not in ("plane", "cpn"):
            raise ConfigurationError(f"manifold must be 'plane' or 'cpn', got {manifold!r}")
        n = int(doc.get("n", 0))
        if manifold == "cpn" and n < 1:
            raise ConfigurationError("cpn runs need a field 'n' >= 1")
        vortices = doc["vortices"]
        if not isinstance(vortices, list) or not vortices:
            raise ConfigurationError("'vortices' must be a nonempty list")
        positions, strengths = [], []
        for i, entry in enumerate(vortices):
            positions.append(_parse_position(manifold, n, entry["position"], i))
            strengths.append(float(entry["strength"]))
        if manifold == "plane":
            system = dynamics.VortexSystem.plane(positions, strengths)
        else:
            system = dynamics.VortexSystem.cpn(positions, strengths)

        integ = doc["integrator"]
        method = integ.get("method", "rk4")
        dt = float(integ["dt"])
        if "steps" in integ:
            steps = int(integ["steps"])
        elif "t_end" in integ:
            steps = int(round(float(integ["t_end"]) / dt))
        else:
            raise ConfigurationError("integrator needs 'steps' or 't_end'")
        outputs = doc.get("outputs", {})
        return {
            "system": system,
            "method": method,
            "dt": dt,
            "steps": steps,
            "trajectory_path": outputs.get("trajectory_path"),
            "monitor_path": outputs.get("monitor_path"),
            "seed": int(doc.get("seed", 0)),
        }
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"config field error: {exc!r}") from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
    except (ConfigurationError, CpvortexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    t0 = time.perf_counter()
    try:
        traj = dynamics.integrate(cfg["system"], cfg["dt"], cfg["steps"], method=cfg["method"])
    except CollisionError as exc:
        print(f"error: collision at step {exc.step_index}: {exc}", file=sys.stderr)
        return EXIT_COLLISION
    except (NumericError, DomainError, OracleError, ConfigurationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    wall = time.perf_counter() - t0

    if cfg["trajectory_path"]:
        with open(cfg["trajectory_path"], "w", encoding="utf-8") as fh:
            dynamics.write_trajectory_csv(traj, fh)
    if cfg["monitor_path"]:
        with open(cfg["monitor_path"], "w", encoding="utf-8") as fh:
            fh.write("t,H,momentum_norm,min_dist\n")
            for t, row in zip(traj.times, traj.monitors):
                fh.write(",".join([_fmt(t)] + [_fmt(v) for v in row]) + "\n")

    h = traj.monitors[:, 0]
    mom = traj.monitors[:, 1]
    print("summary:")
    print(f"  steps_recorded: {traj.times.size - 1}")
    print(f"  final_time: {_fmt(traj.times[-1])}")
    print(f"  energy_drift: {_fmt(np.max(np.abs(h - h[0])))}")
    print(f"  momentum_norm_drift: {_fmt(np.max(np.abs(mom - mom[0])))}")
    print(f"  min_separation: {_fmt(np.min(traj.monitors[:, 2]))}")
    period = _estimated_pair_period(traj)
    if period is not None:
        print(f"  estimated_period: {_fmt(period)}")
    print(f"  wall_time_s: {wall:.3f}")
    return EXIT_OK


def _estimated_pair_period(traj) -> float | None:
    """Rotation period of a planar two-vortex run from the swept pair angle."""
    if traj.states[0].manifold != "plane" or traj.states[0].size != 2 or traj.times.size < 3:
        return None
    angle = 0.0
    prev = traj.states[0].positions[0] - traj.states[0].positions[1]
    for s in traj.states[1:]:
        cur = s.positions[0] - s.positions[1]
        step = cur / prev
        angle += math.atan2(step.imag, step.real)
        prev = cur
    if abs(angle) < 1e-12:
        return None
    return float(traj.times[-1] * (2.0 * math.pi / abs(angle)))


def cmd_verify(args) -> int:
    tol_scale = float(os.environ.get("CPVORTEX_TOL_SCALE", "1.0"))
    if tol_scale <= 0.0:
        print("error: CPVORTEX_TOL_SCALE must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        results = verify.run_suite(args.suite, seed=args.seed, tol_scale=tol_scale)
    except KeyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    failed = False
    for res in results:
        print(res.line())
        if res.gating and not res.passed:
            failed = True
    print(f"{'FAILED' if failed else 'OK'}: {sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_VERIFY_FAIL if failed else EXIT_OK


def cmd_tabulate_greens(args) -> int:
    try:
        if args.samples < 1:
            raise DomainError("need at least one sample")
        rs = np.linspace(args.rmin, args.rmax, args.samples)
        rows = [(r, greens.greens_cpn(args.n, r), greens.greens_cpn_derivative(args.n, r)) for r in rs]
    except (DomainError, SingularityError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print("r,G,phi_prime")
    for r, g, dg in rows:
        print(",".join(_fmt(v) for v in (r, g, dg)))
    return EXIT_OK


def cmd_tabulate_momentum(args) -> int:
    try:
        z = FlagCoords(complex(args.z1), complex(args.z2), complex(args.z3))
        m = momentum.momentum_flag(z).matrix
    except (DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    print(f"momentum value at z1={z.z1}, z2={z.z2}, z3={z.z3}:")
    for row in m:
        print("  [" + "  ".join(f"{v.real:+.12f}{v.imag:+.12f}j" for v in row) + "]")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpvortex", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a vortex simulation from a JSON config")
    p_sim.add_argument("config", help="path to the JSON run configuration")
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("suite", choices=sorted(verify.SUITES) + ["all"])
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.set_defaults(func=cmd_verify)

    p_tab = sub.add_parser("tabulate", help="emit tabulated values as CSV / text")
    tab_sub = p_tab.add_subparsers(dest="what", required=True)

    p_g = tab_sub.add_parser("greens", help="CSV of r, G(r), phi'(r) on CP^n")
    p_g.add_argument("--n", type=int, required=True)
    p_g.add_argument("--samples", type=int, default=10)
    p_g.add_argument("--rmin", type=float, default=0.1)
    p_g.add_argument("--rmax", type=float, default=math.pi / 2)
    p_g.set_defaults(func=cmd_tabulate_greens)

    p_m = tab_sub.add_parser("momentum", help="flag momentum matrix at (z1, z2, z3)")
    p_m.add_argument("--z1", default="0", help="complex literal, e.g. '0.5+0.3j'")
    p_m.add_argument("--z2", default="0")
    p_m.add_argument("--z3", default="0")
    p_m.set_defaults(func=cmd_tabulate_momentum)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CpvortexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
