"""Command line front end.

Subcommands cover the analyses end to end: throughput evaluation,
boundary sweeps, maximal convex subsets, utility maximization over a
mesh, Monte Carlo simulation, and property-verification sweeps.  Data
goes to stdout (or --out) as JSON or CSV; diagnostics go to stderr.
Exit codes: 0 ok, 2 input error, 3 precondition violated, 4 infeasible,
5 property failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys

import numpy as np

from .errors import DomainError, InfeasibleError, PreconditionError, WlanRRError
from .mesh import assemble_polytope, symmetric_operating_points
from .model import (
    WlanConfig,
    idle_probability,
    tau_to_x,
    throughput,
    validate_burst_vector,
    x_denominator,
)
from .num import paper_example, solve_num
from .region import (
    boundary_points_for_directions,
    boundary_scale,
    grid_directions,
    in_rate_region,
    sample_directions,
    tangent_normal,
)
from .scenario import Scenario, load_scenario
from .sim import SimConfig, analytic_throughput, compare_to_model, simulate
from .subsets import (
    convexity_margin_sweep,
    maximal_convex_subset,
    post_inequality_check,
    sample_post_inputs,
    subset_sample_points,
)
from .utilities import UtilityFunction

log = logging.getLogger("wlanrr")

_EXIT_INPUT = 2
_EXIT_PRECONDITION = 3
_EXIT_INFEASIBLE = 4
_EXIT_PROPERTY = 5


# -- formatting ---------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.10g" % float(v)
    return str(v)


def _jsonable(obj):
    """Round floats to 10 significant digits; non-finite becomes null."""
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return float("%.10g" % v) if math.isfinite(v) else None
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _json_text(data) -> str:
    return json.dumps(_jsonable(data), sort_keys=True) + "\n"


def _expand(key, value):
    """(key, vector) -> 1-based suffixed columns; scalars pass through."""
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        return [(f"{key}{i + 1}", v) for i, v in enumerate(value)]
    return [(key, value)]


def _csv_text(data) -> str:
    lines = ["# schema=1"]
    if isinstance(data, list):  # tabular: one CSV row per dict
        if data:
            header = [col for k, v in data[0].items() for col, _ in _expand(k, v)]
            lines.append(",".join(header))
            for row in data:
                cells = [_fmt(v) for k, val in row.items() for _, v in _expand(k, val)]
                lines.append(",".join(cells))
        else:
            lines.append("")
    else:  # flat dict: key,value rows, nested keys dotted, sorted
        lines.append("key,value")

        def walk(prefix, obj, acc):
            if isinstance(obj, dict):
                for k in obj:
                    walk(f"{prefix}.{k}" if prefix else str(k), obj[k], acc)
            else:
                for col, v in _expand(prefix, obj):
                    acc.append((col, v))

        acc = []
        walk("", data, acc)
        for col, v in sorted(acc):
            lines.append(f"{col},{_fmt(v)}")
    return "\r\n".join(lines) + "\r\n"


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        log.info("wrote %d bytes to %s", len(text), out)
    else:
        sys.stdout.write(text)


# -- shared helpers -----------------------------------------------------------

def _parse_vector(text: str, name: str) -> np.ndarray:
    try:
        vals = [float(tok) for tok in text.split(",")]
    except ValueError:
        raise DomainError(f"--{name}: expected comma-separated numbers, got {text!r}")
    if not vals:
        raise DomainError(f"--{name}: empty vector")
    return np.array(vals)


def _load_scenario(ns, need: str = None) -> Scenario:
    if ns.scenario is None:
        if need:
            raise DomainError(f"this command needs --scenario with a {need!r} section")
        return Scenario()
    sc = load_scenario(ns.scenario)
    log.info("loaded scenario %s", ns.scenario)
    if need == "wlan" and sc.wlan is None:
        raise DomainError("scenario must define 'wlan' for this command")
    if need == "mesh" and sc.mesh is None:
        raise DomainError("scenario must define 'mesh' for this command")
    return sc


def _seed(ns, sc: Scenario) -> int:
    return ns.seed if ns.seed is not None else sc.seed


# -- subcommands --------------------------------------------------------------

def cmd_throughput(ns):
    sc = _load_scenario(ns, need="wlan")
    cfg = sc.wlan
    if (ns.x is None) == (ns.tau is None):
        raise DomainError("provide exactly one of --x or --tau")
    if ns.tau is not None:
        x = tau_to_x(_parse_vector(ns.tau, "tau"))
    else:
        x = _parse_vector(ns.x, "x")
    N = cfg.N_max if ns.N is None else validate_burst_vector(_parse_vector(ns.N, "N"), cfg)
    s = throughput(x, N, cfg)
    data = {
        "s": s,
        "X": x_denominator(x, N, cfg),
        "P_idle": idle_probability(x),
    }
    return data, 0


def _boundary_rows(pts):
    return [
        {"y": bp.direction, "x": bp.x_star, "s": bp.s_star,
         "b": bp.normal_b, "alpha": bp.normal_b / bp.rhs}
        for bp in pts
    ]


def cmd_boundary(ns):
    sc = _load_scenario(ns, need="wlan")
    cfg = sc.wlan
    if cfg.n == 1:
        raise PreconditionError("boundary unattainable: a single station never reaches h(x)=1 for a > 0")
    if ns.direction is not None:
        pts = [boundary_scale(_parse_vector(ns.direction, "direction"), cfg)]
    elif ns.grid is not None:
        if cfg.n != 2:
            raise DomainError("--grid is only defined for n=2 scenarios")
        if ns.grid < 1:
            raise DomainError("--grid must be >= 1")
        pts = boundary_points_for_directions(grid_directions(ns.grid), cfg)
    else:
        K = ns.samples if ns.samples is not None else 100
        if K < 1:
            raise DomainError("--samples must be >= 1")
        pts = boundary_points_for_directions(sample_directions(cfg.n, K, _seed(ns, sc)), cfg)
    log.info("computed %d boundary points", len(pts))
    return _boundary_rows(pts), 0


def cmd_subset(ns):
    sc = _load_scenario(ns, need="wlan")
    cfg = sc.wlan
    if ns.x is not None:
        x_star = _parse_vector(ns.x, "x")
        b, rhs = tangent_normal(x_star, cfg)
        s_star = throughput(x_star, cfg.N_max, cfg)
    else:
        y = _parse_vector(ns.direction, "direction") if ns.direction is not None \
            else np.full(cfg.n, 1.0 / cfg.n)
        bp = boundary_scale(y, cfg)
        x_star, s_star, b, rhs = bp.x_star, bp.s_star, bp.normal_b, bp.rhs
    subset = maximal_convex_subset(x_star, cfg)
    data = {"x_star": x_star, "s_star": s_star, "b": b, "rhs": rhs,
            "alpha": subset.alpha}
    if ns.samples is not None:
        if ns.samples < 1:
            raise DomainError("--samples must be >= 1")
        pts = subset_sample_points(subset, ns.samples, _seed(ns, sc))
        verdicts = [in_rate_region(p, cfg, sc.membership_tol)[0] for p in pts]
        inside = sum(v in ("inside", "boundary") for v in verdicts)
        data["samples"] = ns.samples
        data["contained"] = inside
        data["all_contained"] = inside == ns.samples
    return data, 0


def cmd_num(ns):
    if ns.paper_example is not None:
        res = paper_example(ns.paper_example)
        data = {"utility": res.utility, "x2_star": res.x2_star,
                "rates": res.rates, "objective": res.objective}
        return data, 0
    sc = _load_scenario(ns, need="mesh")
    mesh = sc.mesh
    utilities = list(sc.utilities) if sc.utilities is not None \
        else [UtilityFunction.log()] * mesh.n_flows
    ops = symmetric_operating_points(mesh)
    sol = solve_num(assemble_polytope(mesh, ops), utilities)
    data = {
        "flows": list(mesh.flows),
        "rates": sol.rates,
        "objective": sol.objective,
        "slacks": sol.slacks,
        "kkt_residual": sol.kkt_residual,
        "gap": sol.gap,
    }
    return data, 0


def cmd_simulate(ns):
    sc = _load_scenario(ns, need="wlan")
    cfg = sc.wlan
    if ns.tau is None:
        raise DomainError("--tau is required")
    tau = _parse_vector(ns.tau, "tau")
    N = None if ns.N is None else _parse_vector(ns.N, "N")
    sim_cfg = SimConfig(wlan=cfg, tau=tau, N=N, slots=ns.slots, seed=_seed(ns, sc))
    res = simulate(sim_cfg)
    z = compare_to_model(sim_cfg, res)
    data = {
        "throughput": res.throughput,
        "stderr": res.stderr,
        "analytic": analytic_throughput(sim_cfg),
        "z": z,
        "elapsed": res.elapsed,
        "slots": res.slots,
        "idle_slots": res.idle_slots,
        "collision_slots": res.collision_slots,
        "success_slots": res.success_slots,
    }
    return data, 0


def _verify_convexity(sc, K, seed):
    cfg = sc.wlan if sc.wlan is not None else WlanConfig(n=3, a=1.0 / 9.0)
    margins = convexity_margin_sweep(cfg, K, seed)
    bad = int(np.count_nonzero(margins <= 0))
    report = {
        "suite": "convexity",
        "n": cfg.n,
        "a": cfg.a,
        "samples": K,
        "failures": bad,
        "worst_margin": float(margins.min()),
        "pass": bad == 0,
    }
    if bad:
        i = int(np.argmin(margins))
        report["witness"] = {"pair_index": i, "margin": float(margins[i]), "seed": seed}
    return report


def _verify_post(sc, K, seed):
    sizes = [sc.wlan.n] if sc.wlan is not None else list(range(2, 9))
    per = max(K // len(sizes), 1)
    worst = -np.inf
    failures = 0
    witness = None
    total = 0
    for n in sizes:
        r, z = sample_post_inputs(n, per, seed + n)
        for k in range(len(r)):
            val = post_inequality_check(r[k], z[k])
            total += 1
            if val > worst:
                worst = val
            if val >= 0:
                failures += 1
                if witness is None:
                    witness = {"n": n, "r": r[k], "z": z[k], "value": val}
    report = {
        "suite": "post",
        "sizes": sizes,
        "samples": total,
        "failures": failures,
        "worst_value": worst,
        "pass": failures == 0,
    }
    if witness is not None:
        report["witness"] = witness
    return report


def _verify_simulate(sc, K, seed, slots):
    cfg = sc.wlan if sc.wlan is not None else WlanConfig(n=2, a=1.0 / 9.0)
    rng = np.random.default_rng(seed)
    max_abs_z = 0.0
    failures = 0
    witness = None
    for k in range(K):
        tau = rng.uniform(0.05, 0.45, size=cfg.n)
        N = rng.integers(cfg.N_lo, cfg.N_hi, endpoint=True)
        sub_seed = int(rng.integers(2**32))
        sim_cfg = SimConfig(wlan=cfg, tau=tau, N=N, slots=slots, seed=sub_seed)
        z = compare_to_model(sim_cfg)
        worst = float(np.max(np.abs(z)))
        max_abs_z = max(max_abs_z, worst)
        if worst > 3.0:
            failures += 1
            if witness is None:
                witness = {"config_index": k, "tau": tau, "N": N,
                           "seed": sub_seed, "z": z}
        log.debug("simulate config %d: max |z| = %.3f", k, worst)
    report = {
        "suite": "simulate",
        "n": cfg.n,
        "a": cfg.a,
        "samples": K,
        "slots": slots,
        "failures": failures,
        "max_abs_z": max_abs_z,
        "pass": failures == 0,
    }
    if witness is not None:
        report["witness"] = witness
    return report


def cmd_verify(ns):
    sc = _load_scenario(ns)
    seed = _seed(ns, sc)
    if ns.suite == "convexity":
        K = ns.samples if ns.samples is not None else 1000
        report = _verify_convexity(sc, K, seed)
    elif ns.suite == "post":
        K = ns.samples if ns.samples is not None else 1000
        report = _verify_post(sc, K, seed)
    else:
        K = ns.samples if ns.samples is not None else 5
        report = _verify_simulate(sc, K, seed, ns.slots)
    return report, 0 if report["pass"] else _EXIT_PROPERTY


# -- parsing and entry --------------------------------------------------------

def _add_common(sp):
    sp.add_argument("--scenario", metavar="PATH", help="scenario JSON file")
    sp.add_argument("--seed", type=int, metavar="U64",
                    help="RNG seed (overrides the scenario's)")
    sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    sp.add_argument("--format", choices=("json", "csv"), default=None,
                    help="output format (default: json; boundary defaults to csv)")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="wlanrr",
        description="Throughput rate regions of 802.11 WLANs: boundaries, "
                    "convex subsets, utility-optimal rates, simulation.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    sp = sub.add_parser("throughput", help="per-station saturation throughput",
                        description="Evaluate per-station throughput at given "
                                    "attempt rates --x (or probabilities --tau) "
                                    "and optional bursts --N.")
    _add_common(sp)
    sp.add_argument("--x", help="comma-separated attempt rates x_i >= 0")
    sp.add_argument("--tau", help="comma-separated attempt probabilities in [0,1)")
    sp.add_argument("--N", help="comma-separated burst sizes within the scenario bounds")
    sp.set_defaults(func=cmd_throughput)

    sp = sub.add_parser(
        "boundary", help="rate-region boundary sweep",
        description="Emit boundary points; CSV columns are y1..yn (direction), "
                    "x1..xn (attempt rates), s1..sn (throughputs), b1..bn "
                    "(tangent normal), alpha1..alphan (subset coefficients).")
    _add_common(sp)
    sp.add_argument("--direction", help="single throughput-space direction y (comma-separated)")
    sp.add_argument("--grid", type=int, metavar="K", help="uniform direction grid (n=2 only)")
    sp.add_argument("--samples", type=int, metavar="K", help="random directions (default 100)")
    sp.set_defaults(func=cmd_boundary)

    sp = sub.add_parser("subset", help="maximal convex subset at a boundary point",
                        description="Tangent hyperplane and subset coefficients at "
                                    "a boundary point chosen by --direction or --x; "
                                    "--samples additionally checks random subset "
                                    "points for region membership.")
    _add_common(sp)
    sp.add_argument("--direction", help="throughput-space direction y (comma-separated)")
    sp.add_argument("--x", help="explicit boundary attempt vector (comma-separated)")
    sp.add_argument("--samples", type=int, metavar="K",
                    help="verify K random subset points stay in the region")
    sp.set_defaults(func=cmd_subset)

    sp = sub.add_parser("num", help="utility-optimal rates over a mesh",
                        description="Maximize summed utilities over the clique "
                                    "polytope of a mesh scenario, or reproduce "
                                    "the built-in example with --paper-example.")
    _add_common(sp)
    sp.add_argument("--paper-example", choices=("log", "u1", "u2"), dest="paper_example",
                    help="run the built-in four-clique, three-flow example")
    sp.set_defaults(func=cmd_num)

    sp = sub.add_parser("simulate", help="slot-level Monte Carlo run",
                        description="Simulate the slotted MAC and compare against "
                                    "the analytic model (z-scores).")
    _add_common(sp)
    sp.add_argument("--tau", help="comma-separated attempt probabilities in [0,1)")
    sp.add_argument("--N", help="comma-separated burst sizes")
    sp.add_argument("--slots", type=int, default=10**6, help="MAC slots (default 1e6)")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("verify", help="property-verification sweeps",
                        description="Run a named property suite and report "
                                    "pass/fail counts; exits 5 on any failure.")
    _add_common(sp)
    sp.add_argument("--suite", choices=("convexity", "post", "simulate"), required=True)
    sp.add_argument("--samples", type=int, metavar="K",
                    help="sweep size (defaults: convexity/post 1000, simulate 5)")
    sp.add_argument("--slots", type=int, default=200000,
                    help="slots per simulate-suite run (default 2e5)")
    sp.set_defaults(func=cmd_verify)

    return p


def _setup_logging():
    wanted = os.environ.get("WLANRR_LOG", "error").strip().lower()
    level = {"error": logging.ERROR, "info": logging.INFO,
             "debug": logging.DEBUG}.get(wanted, logging.ERROR)
    logging.basicConfig(stream=sys.stderr, level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    log.setLevel(level)


def main(argv=None) -> int:
    _setup_logging()
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else int(e.code)
    try:
        data, code = ns.func(ns)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return _EXIT_INPUT
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return _EXIT_PRECONDITION
    except InfeasibleError as e:
        print(f"error: {e}", file=sys.stderr)
        return _EXIT_INFEASIBLE
    except WlanRRError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    fmt = ns.format or ("csv" if ns.command == "boundary" else "json")
    text = _csv_text(data) if fmt == "csv" else _json_text(data)
    _emit(text, ns.out)
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
