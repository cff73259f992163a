"""Acceptance sweep.

Each test checks one headline guarantee end to end and prints a single
PASS/FAIL line with the measured numbers (visible under pytest -s or on
failure).  Tolerances and runtime budgets are hard-coded on purpose; do
not loosen them to make a red test green.
"""

import json
import time

import numpy as np

from wlanrr import (
    SimConfig,
    UtilityFunction,
    WlanConfig,
    boundary_h,
    boundary_scale,
    compare_to_model,
    complement_convexity_margin,
    convexity_margin_sweep,
    in_rate_region,
    is_log_domain_concave,
    maximal_convex_subset,
    orthogonality_check,
    post_inequality_check,
    sample_directions,
    sample_post_inputs,
    subset_contains,
    subset_sample_points,
    tau_form_residual,
)
from wlanrr.cli import main as cli_main
from wlanrr.region import boundary_points_for_directions


def _report(tag: str, ok: bool, detail: str):
    line = f"{'PASS' if ok else 'FAIL'} [{tag}] {detail}"
    print(line)
    assert ok, line


def test_1_builtin_example_optima(capsys):
    targets = {"log": 0.2094, "u1": 0.3767, "u2": 0.3516}
    got = {}
    worst_dt = 0.0
    for utility, target in targets.items():
        t0 = time.perf_counter()
        code = cli_main(["num", "--paper-example", utility])
        dt = time.perf_counter() - t0
        out = capsys.readouterr().out
        assert code == 0
        got[utility] = json.loads(out)["x2_star"]
        worst_dt = max(worst_dt, dt)
    errs = {u: abs(got[u] - targets[u]) for u in targets}
    ok = all(e <= 2e-3 for e in errs.values()) and worst_dt < 5.0
    with capsys.disabled():
        _report("1/9 example optima",
                ok,
                f"x2*={ {u: round(v, 6) for u, v in got.items()} } "
                f"max err {max(errs.values()):.2e} (tol 2e-3), "
                f"slowest call {worst_dt:.2f}s (limit 5s)")


def test_2_boundary_solver_identities():
    t0 = time.perf_counter()
    worst_h = 0.0
    worst_tau = 0.0
    count = 0
    for n in (2, 3, 4, 5):
        for a in (1 / 9, 0.5, 1.0):
            cfg = WlanConfig(n=n, a=a)
            dirs = sample_directions(n, 1000, seed=100 * n + int(10 * a))
            for bp in boundary_points_for_directions(dirs, cfg):
                worst_h = max(worst_h, abs(boundary_h(bp.x_star, cfg) - 1.0))
                worst_tau = max(worst_tau, abs(tau_form_residual(bp.x_star, cfg)))
                count += 1
    dt = time.perf_counter() - t0
    ok = worst_h <= 1e-10 and worst_tau <= 1e-10 and dt < 10.0
    _report("2/9 boundary identities",
            ok,
            f"{count} points, worst |h-1| {worst_h:.2e}, "
            f"worst tau residual {worst_tau:.2e} (tol 1e-10), {dt:.2f}s (limit 10s)")


def test_3_two_station_closed_form():
    worst = 0.0
    for a in (1 / 9, 0.5, 1.0):
        cfg = WlanConfig(n=2, a=a)
        dirs = sample_directions(2, 1000, seed=int(1000 * a))
        for bp in boundary_points_for_directions(dirs, cfg):
            worst = max(worst, abs(bp.x_star[0] * bp.x_star[1] - a))
    ok = worst <= 1e-9
    _report("3/9 two-station product rule", ok,
            f"3000 points, worst |x1*x2 - a| {worst:.2e} (tol 1e-9)")


def test_4_tangent_plane_consistency():
    worst_plane = 0.0
    worst_orth = 0.0
    count = 0
    for n, a in ((2, 1 / 9), (2, 0.5), (3, 1 / 9), (3, 0.5), (4, 1 / 9), (4, 0.5)):
        cfg = WlanConfig(n=n, a=a)
        dirs = sample_directions(n, 17, seed=n + int(100 * a))
        for bp in boundary_points_for_directions(dirs, cfg):
            if count == 100:
                break
            rel = abs(bp.normal_b @ bp.s_star - bp.rhs) / bp.rhs
            worst_plane = max(worst_plane, rel)
            worst_orth = max(worst_orth,
                             float(np.max(np.abs(orthogonality_check(bp.x_star, cfg)))))
            count += 1
    ok = count == 100 and worst_plane <= 1e-9 and worst_orth <= 1e-5
    _report("4/9 tangent planes", ok,
            f"{count} points, worst containment residual {worst_plane:.2e} "
            f"(tol 1e-9), worst orthogonality {worst_orth:.2e} (tol 1e-5)")


def test_5_complement_convexity_margins():
    t0 = time.perf_counter()
    worst = np.inf
    total = 0
    for n in (2, 3, 4, 5):
        for a in (1 / 9, 0.5, 1.0):
            cfg = WlanConfig(n=n, a=a)
            margins = convexity_margin_sweep(cfg, 10**4, seed=7 * n + int(10 * a))
            worst = min(worst, float(margins.min()))
            total += len(margins)
    cfg = WlanConfig(n=3, a=1 / 9)
    bp = boundary_scale(np.full(3, 1 / 3), cfg)
    coincident = complement_convexity_margin(bp.x_star, bp.x_star, cfg)
    dt = time.perf_counter() - t0
    ok = worst > 0 and abs(coincident) <= 1e-12 and dt < 60.0
    _report("5/9 convexity margins", ok,
            f"{total} pairs, smallest margin {worst:.3e} (> 0 required), "
            f"coincident pair {coincident:.1e}, {dt:.2f}s (limit 60s)")


def test_6_subset_membership():
    checked = 0
    violations = 0
    escape_ok = True
    for n in (2, 3, 4):
        for a in (1 / 9, 0.5):
            cfg = WlanConfig(n=n, a=a)
            y = sample_directions(n, 1, seed=11 * n + int(10 * a))[0]
            bp = boundary_scale(y, cfg)
            subset = maximal_convex_subset(bp.x_star, cfg)
            pts = subset_sample_points(subset, 1000, seed=n)
            for p in pts:
                verdict, _ = in_rate_region(p, cfg)
                checked += 1
                if verdict not in ("inside", "boundary"):
                    violations += 1
            for eps in (0.01, 0.05):
                bumped = (1.0 + eps) * bp.s_star
                if subset_contains(bumped, subset) or \
                        in_rate_region(bumped, cfg)[0] != "outside":
                    escape_ok = False
    ok = violations == 0 and escape_ok
    _report("6/9 subset membership", ok,
            f"{checked} sampled points, {violations} region violations; "
            f"scaled-up vertices rejected: {escape_ok}")


def test_7_pairwise_product_inequality():
    total = 0
    worst = -np.inf
    for n in range(2, 9):
        r, z = sample_post_inputs(n, 1600, seed=n)
        for k in range(len(r)):
            val = post_inequality_check(r[k], z[k])
            worst = max(worst, val)
            total += 1
    ok = total >= 10**4 and worst < 0
    _report("7/9 pairwise product inequality", ok,
            f"{total} nondegenerate pairs (n=2..8), largest value {worst:.3e} "
            f"(< 0 required)")


def test_8_simulator_model_agreement():
    t0 = time.perf_counter()
    rng = np.random.default_rng(7)
    pairs = 0
    failures = 0
    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 5))
        a = float(rng.uniform(0.05, 1.0))
        L = rng.uniform(0.5, 2.0, n)
        wlan = WlanConfig(n=n, a=a, L=L,
                          N_lo=np.ones(n, dtype=int), N_hi=np.full(n, 4))
        tau = rng.uniform(0.05, 0.45, n)
        N = rng.integers(1, 5, n)
        sub_seed = int(rng.integers(2**32))
        z = compare_to_model(SimConfig(wlan, tau, N=N, slots=10**6, seed=sub_seed))
        pairs += n
        failures += int(np.count_nonzero(np.abs(z) > 3.0))
        worst = max(worst, float(np.max(np.abs(z))))
    dt = time.perf_counter() - t0
    rate = 1.0 - failures / pairs
    ok = rate >= 0.95 and dt < 60.0
    _report("8/9 simulator agreement", ok,
            f"{pairs} station pairs over 20 configs, {100 * rate:.1f}% within "
            f"|z|<=3 (need 95%), max |z| {worst:.3f}, {dt:.1f}s (limit 60s)")


def test_9_concavity_classification():
    expect = {1.0: True, 2.0: True, 5.0: True, 0.5: False}
    got = {alpha: is_log_domain_concave(UtilityFunction.iso_elastic(alpha))
           for alpha in expect}
    log_ok = is_log_domain_concave(UtilityFunction.log())
    ok = got == expect and log_ok
    _report("9/9 concavity classification", ok,
            f"iso-elastic alpha->concave map {got} (log: {log_ok})")
