"""Utility maximization over clique rate polytopes.

The inner problem (fixed per-clique operating points) is a small dense
convex program: maximize sum_f w_f U_f(s_f) subject to the per-clique
hyperplanes and s >= 0, solved with a logarithmic-barrier Newton method.
The outer problem (choosing the operating points) is only supported as
the scalar symmetric search of the built-in four-clique example; a
coarse random-direction search is exposed for experimentation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InfeasibleError, PreconditionError, WlanRRError
from .mesh import CliqueRecord, MeshNetwork, OperatingPointSet, assemble_polytope
from .region import boundary_scale
from .utilities import UtilityFunction

# barrier schedule; the contract is the KKT residual, not the path
_T0 = 1.0
_MU = 10.0
_NEWTON_TOL = 1e-10
_MAX_OUTER = 50
_MAX_NEWTON = 200
_GAP_TOL = 1e-8


@dataclass(frozen=True)
class NumSolution:
    """Solution of one inner problem, with convergence evidence."""

    rates: np.ndarray       # flow rates, Mbps
    objective: float        # sum of weighted utilities at rates
    slacks: np.ndarray      # per-constraint rhs - coeffs.rates
    kkt_residual: float     # stationarity residual, inf-norm
    gap: float              # duality-gap surrogate m/t
    outer_iterations: int
    newton_steps: int


def _as_utility_list(utilities, n: int):
    if isinstance(utilities, UtilityFunction):
        return [utilities] * n
    out = list(utilities)
    if len(out) != n:
        raise DomainError(f"need one utility per flow ({n}), got {len(out)}")
    for u in out:
        if not isinstance(u, UtilityFunction):
            raise DomainError("utilities must be UtilityFunction instances")
    return out


def _reject_bad_utilities(utils, weights, s_max):
    """Upfront gate: each utility increasing and concave on (0, s_max_f]."""
    if not np.all(weights > 0):
        raise DomainError("weights must be positive")
    for f, (u, smax) in enumerate(zip(utils, s_max)):
        grid = np.geomspace(max(smax * 1e-6, 1e-9), smax, 64)
        if not u.in_domain(grid):
            raise PreconditionError(f"utility for flow {f} undefined on (0, {smax:g}]")
        if np.any(u.grad(grid) <= 0):
            raise PreconditionError(f"utility for flow {f} is not increasing on the feasible range")
        if np.any(u.second_derivative(grid) > 1e-12):
            raise PreconditionError(f"utility for flow {f} is not concave on the feasible range")


def _step_limit(v, dv) -> float:
    """Largest step keeping v + step*dv strictly positive (with margin)."""
    shrink = dv < 0
    if not shrink.any():
        return 1.0
    return min(1.0, 0.99 * float(np.min(-v[shrink] / dv[shrink])))


def solve_num(constraints, utilities, weights=None) -> NumSolution:
    """Maximize sum_f w_f U_f(s_f) over {coeffs.s <= rhs for each constraint, s >= 0}.

    Primal-dual Newton on the log-barrier optimality system: multipliers
    for the clique constraints and the positivity bounds are tracked as
    unknowns, the barrier parameter grows tenfold per centering round
    until the gap surrogate m/t falls below 1e-8, and the returned
    stationarity residual is evaluated directly with those multipliers.
    """
    cons = list(constraints)
    if not cons:
        raise InfeasibleError("no constraints; monotone objective is unbounded")
    n = cons[0].coeffs.shape[0]
    A = np.vstack([c.coeffs for c in cons])
    rhs = np.array([c.rhs for c in cons], dtype=float)
    if A.shape[1] != n or np.any([c.coeffs.shape[0] != n for c in cons]):
        raise DomainError("constraints disagree on the number of flows")
    if np.any(rhs <= 0):
        raise InfeasibleError("a constraint has rhs <= 0; no interior point with s >= 0")
    uncovered = np.where(A.max(axis=0) <= 0)[0]
    if uncovered.size:
        raise InfeasibleError(f"flow(s) {uncovered.tolist()} appear in no constraint; unbounded")

    utils = _as_utility_list(utilities, n)
    w = np.ones(n) if weights is None else np.atleast_1d(np.asarray(weights, dtype=float))
    if w.shape != (n,):
        raise DomainError(f"weights must have length {n}")
    with np.errstate(divide="ignore"):
        s_max = np.min(np.where(A > 0, rhs[:, None] / np.where(A > 0, A, 1.0), np.inf), axis=0)
    _reject_bad_utilities(utils, w, s_max)

    # strictly interior start: splits each clique budget across its flows
    k_per = np.maximum((A > 0).sum(axis=1), 1)
    with np.errstate(divide="ignore"):
        start_caps = np.where(A > 0, rhs[:, None] / (k_per[:, None] * np.where(A > 0, A, 1.0)), np.inf)
    s = 0.5 * start_caps.min(axis=0)

    m = len(cons) + n  # inequality count: cliques plus positivity
    t = _T0
    slack = rhs - A @ s
    lam = 1.0 / (t * slack)
    mu = 1.0 / (t * s)
    outer = 0
    newton_total = 0

    def residuals(sv, slackv, lamv, muv, tv):
        gu = np.array([u.grad(si) for u, si in zip(utils, sv)])
        r_dual = -w * gu + A.T @ lamv - muv
        r_c1 = lamv * slackv - 1.0 / tv
        r_c2 = muv * sv - 1.0 / tv
        return gu, r_dual, r_c1, r_c2

    def merit(r_dual, r_c1, r_c2):
        return math.sqrt(float(r_dual @ r_dual + r_c1 @ r_c1 + r_c2 @ r_c2))

    while True:
        for _ in range(_MAX_NEWTON):
            gu, r_dual, r_c1, r_c2 = residuals(s, slack, lam, mu, t)
            dual_scale = max(1.0, float(np.max(np.abs(w * gu))))
            centered = max(float(np.max(np.abs(r_c1))), float(np.max(np.abs(r_c2)))) <= 1e-5 / t
            if float(np.max(np.abs(r_dual))) <= min(1e-9, _NEWTON_TOL * dual_scale) and centered:
                break
            hu = np.array([u.second_derivative(si) for u, si in zip(utils, s)])
            M = (A.T * (lam / slack)) @ A
            M[np.diag_indices_from(M)] += -w * hu + mu / s
            g = -r_dual + A.T @ (r_c1 / slack) - r_c2 / s
            try:
                ds = np.linalg.solve(M, g)
            except np.linalg.LinAlgError:
                ds = np.linalg.lstsq(M, g, rcond=None)[0]
            dlam = (lam * (A @ ds) - r_c1) / slack
            dmu = -(r_c2 + mu * ds) / s
            newton_total += 1
            step = min(_step_limit(s, ds), _step_limit(slack, -(A @ ds)),
                       _step_limit(lam, dlam), _step_limit(mu, dmu))
            m0 = merit(r_dual, r_c1, r_c2)
            accepted = False
            for _ in range(40):
                s_try = s + step * ds
                lam_try = lam + step * dlam
                mu_try = mu + step * dmu
                slack_try = rhs - A @ s_try
                if np.all(s_try > 0) and np.all(slack_try > 0):
                    _, rd, rc1, rc2 = residuals(s_try, slack_try, lam_try, mu_try, t)
                    if merit(rd, rc1, rc2) <= (1.0 - 0.1 * step) * m0:
                        accepted = True
                        break
                step *= 0.5
            if not accepted:
                break
            s, lam, mu, slack = s_try, lam_try, mu_try, slack_try
        outer += 1
        if m / t <= _GAP_TOL or outer >= _MAX_OUTER:
            break
        t *= _MU

    gu = np.array([u.grad(si) for u, si in zip(utils, s)])
    kkt = float(np.max(np.abs(-w * gu + A.T @ lam - mu)))
    gap = m / t
    if gap > _GAP_TOL or kkt > 1e-8:
        raise WlanRRError(
            f"barrier solver stalled: gap={gap:.3e}, kkt={kkt:.3e}")
    obj = float(np.dot(w, [u.value(si) for u, si in zip(utils, s)]))
    return NumSolution(rates=s, objective=obj, slacks=slack, kkt_residual=kkt,
                       gap=gap, outer_iterations=outer, newton_steps=newton_total)


def golden_section_max(f, lo: float, hi: float, xtol: float = 1e-5, max_iter: int = 200):
    """Maximize a unimodal scalar function on [lo, hi]; returns (x, f(x))."""
    if not (hi > lo):
        raise DomainError("need hi > lo")
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - invphi * (hi - lo)
    x2 = lo + invphi * (hi - lo)
    f1, f2 = f(x1), f(x2)
    it = 0
    while hi - lo > xtol and it < max_iter:
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + invphi * (hi - lo)
            f2 = f(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - invphi * (hi - lo)
            f1 = f(x1)
        it += 1
    x = 0.5 * (lo + hi)
    return x, f(x)


# -- built-in four-clique, three-flow example --------------------------------

_EXAMPLE_A = 1.0 / 9.0
_EXAMPLE_RATES = (12.0, 6.0, 12.0)  # Mbps per flow


def example_mesh() -> MeshNetwork:
    """Three single-hop flows on a line, four contention cliques."""
    r1, r2, r3 = _EXAMPLE_RATES
    return MeshNetwork(
        flows=("f1", "f2", "f3"),
        cliques=(
            CliqueRecord(_EXAMPLE_A, ("f1",), (r1,), label="clique1"),
            CliqueRecord(_EXAMPLE_A, ("f1", "f2"), (r1, r2), label="clique2"),
            CliqueRecord(_EXAMPLE_A, ("f2", "f3"), (r2, r3), label="clique3"),
            CliqueRecord(_EXAMPLE_A, ("f3",), (r3,), label="clique4"),
        ),
    )


def example_operating_points(x2: float, mesh: MeshNetwork = None) -> OperatingPointSet:
    """Boundary operating points of the example for a middle-flow rate x2.

    The two-flow cliques sit on their boundaries exactly when the
    attempt rates multiply to a, so x1 = x3 = a/x2 pins everything.
    """
    if not (x2 > 0):
        raise DomainError("x2 must be positive")
    mesh = example_mesh() if mesh is None else mesh
    a = mesh.cliques[1].a
    x1 = a / x2
    return OperatingPointSet(mesh, (None, np.array([x1, x2]), np.array([x2, x1]), None))


def example_rates(x2: float) -> np.ndarray:
    """Boundary throughputs (Mbps) of the three flows at a given x2."""
    mesh = example_mesh()
    ops = example_operating_points(x2, mesh)
    s2 = ops.clique_throughputs(1)
    s3 = ops.clique_throughputs(2)
    return np.array([s2[0], s2[1], s3[1]])


_EXAMPLE_UTILITIES = {
    "log": UtilityFunction.log,
    "u1": lambda: UtilityFunction.power_risk_aversion(alpha=0.1, beta=1.0),
    "u2": lambda: UtilityFunction.power_risk_aversion(alpha=2.0, beta=1.0),
}


@dataclass(frozen=True)
class ExampleOptimum:
    utility: str
    x2_star: float
    rates: np.ndarray
    objective: float


def paper_example(utility: str = "log", x_max: float = 3.0,
                  xtol: float = 1e-5) -> ExampleOptimum:
    """Scalar outer search of the built-in example for one utility family.

    Golden-section over x2 in (0, x_max] of the summed utility of the
    boundary throughputs; utilities take Mbps arguments.
    """
    key = str(utility).lower()
    if key not in _EXAMPLE_UTILITIES:
        raise DomainError(f"utility must be one of {sorted(_EXAMPLE_UTILITIES)}, got {utility!r}")
    U = _EXAMPLE_UTILITIES[key]()

    def objective(x2):
        return float(np.sum(U.value(example_rates(x2))))

    x2_star, obj = golden_section_max(objective, 1e-4, x_max, xtol=xtol)
    return ExampleOptimum(utility=key, x2_star=x2_star,
                          rates=example_rates(x2_star), objective=obj)


def outer_search(mesh: MeshNetwork, utilities, samples: int = 32, seed=0):
    """Coarse random search over per-clique operating directions.

    Experimental and unsupported for optimality claims: draws `samples`
    direction tuples, solves the inner problem for each, and returns the
    best (solution, operating points) pair found.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    utils = _as_utility_list(utilities, mesh.n_flows)
    rng = np.random.default_rng(seed)
    best = None
    for k in range(samples):
        pts = []
        for c in mesh.cliques:
            if c.n == 1:
                pts.append(None)
                continue
            y = rng.dirichlet(np.ones(c.n))
            pts.append(boundary_scale(y, c.config()).x_star)
        ops = OperatingPointSet(mesh, tuple(pts))
        sol = solve_num(assemble_polytope(mesh, ops), utils)
        if best is None or sol.objective > best[0].objective:
            best = (sol, ops)
    return best
