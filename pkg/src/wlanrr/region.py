"""Rate-region boundary geometry.

The achievable throughput region of a clique is bounded by the surface
h(x) = 1 with

    h(x) = sum_i x_i/(1+x_i) + (1-a)/prod_j(1+x_j)

h is strictly increasing in every coordinate for a > 0, so the boundary
point along any positive direction ray is the unique root of a monotone
scalar equation and bisection is provably convergent.  Burst sizes never
enter h; they only scale the throughput image of a boundary point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .model import (
    WlanConfig,
    one_plus_x_product,
    throughput,
    validate_attempt_vector,
    x_to_tau,
)
from .tolerances import (
    BOUNDARY_SOLVE_TOL,
    MAX_BISECT_ITER,
    MEMBERSHIP_TOL,
    ON_BOUNDARY_TOL,
)


@dataclass(frozen=True)
class BoundaryPoint:
    """A boundary attempt-rate vector together with its local geometry."""

    x_star: np.ndarray      # attempt rates with h(x*) = 1
    s_star: np.ndarray      # throughputs at (x*, N_hi), bits per T_c
    lambda_star: float      # ray scale: x* = lambda* * y/(L*N_hi)
    direction: np.ndarray   # normalized direction y (sums to 1)
    normal_b: np.ndarray    # tangent-hyperplane normal
    rhs: float              # hyperplane offset 1/prod(1+x*_j)


def boundary_h(x, cfg: WlanConfig) -> float:
    """Boundary function h(x); the boundary set is {x : h(x) = 1}."""
    arr = validate_attempt_vector(x, cfg.n)
    return float((arr / (1.0 + arr)).sum()) + (1.0 - cfg.a) / one_plus_x_product(arr)


def _h_rows(x: np.ndarray, a: float) -> np.ndarray:
    """h evaluated on each row of a (K, n) matrix of attempt vectors."""
    return (x / (1.0 + x)).sum(axis=1) + (1.0 - a) / np.prod(1.0 + x, axis=1)


def _solve_lambda_rows(xbar: np.ndarray, a: float) -> np.ndarray:
    """Root lambda* of h(lambda*xbar)=1 for each row of xbar.

    Each row needs at least two positive entries (otherwise sup h = 1 is
    not attained).  Bracketing doubles lambda_hi from 1 until h > 1, then
    bisects to |h-1| <= BOUNDARY_SOLVE_TOL.
    """
    K = xbar.shape[0]
    lo = np.zeros(K)
    hi = np.ones(K)
    for _ in range(MAX_BISECT_ITER):
        need = _h_rows(hi[:, None] * xbar, a) <= 1.0
        if not need.any():
            break
        hi[need] *= 2.0
    else:
        raise PreconditionError("failed to bracket the boundary root")
    for _ in range(MAX_BISECT_ITER):
        mid = 0.5 * (lo + hi)
        h_mid = _h_rows(mid[:, None] * xbar, a)
        high = h_mid > 1.0
        hi = np.where(high, mid, hi)
        lo = np.where(high, lo, mid)
        if np.max(np.abs(h_mid - 1.0)) <= BOUNDARY_SOLVE_TOL:
            return mid
    mid = 0.5 * (lo + hi)
    return mid


def _make_boundary_point(y: np.ndarray, lam: float, cfg: WlanConfig) -> BoundaryPoint:
    xbar = y / (cfg.L * cfg.N_max)
    x_star = lam * xbar
    b, rhs = tangent_normal(x_star, cfg)
    s_star = throughput(x_star, cfg.N_max, cfg)
    return BoundaryPoint(x_star=x_star, s_star=s_star, lambda_star=float(lam),
                         direction=y, normal_b=b, rhs=rhs)


def boundary_scale(y, cfg: WlanConfig) -> BoundaryPoint:
    """Boundary point along the throughput-space direction y (all y_i > 0).

    The ray x = lambda * y/(L*N_hi) meets the boundary at a unique
    lambda* > 0; the returned point carries the throughputs at burst
    N_hi and the tangent hyperplane there.
    """
    if cfg.n == 1:
        raise PreconditionError("boundary unattainable: a single station never reaches h(x)=1 for a > 0")
    yv = np.atleast_1d(np.asarray(y, dtype=float))
    if yv.shape != (cfg.n,):
        raise DomainError(f"direction must have length n={cfg.n}, got {yv.shape}")
    if np.any(yv <= 0) or not np.all(np.isfinite(yv)):
        raise DomainError("boundary directions must be strictly positive")
    yv = yv / yv.sum()
    xbar = yv / (cfg.L * cfg.N_max)
    lam = _solve_lambda_rows(xbar[None, :], cfg.a)[0]
    return _make_boundary_point(yv, lam, cfg)


def tangent_normal(x_star, cfg: WlanConfig):
    """Normal b and offset of the tangent hyperplane {s : b.s = rhs} at x*.

    b_i = (1/(L_i N_i)) * ((N_i - 1)/prod(1+x*_j) + 1/(1+x*_i)) with
    N = N_hi; rhs = 1/prod(1+x*_j).  Requires x* on the boundary.
    """
    xs = validate_attempt_vector(x_star, cfg.n)
    h = boundary_h(xs, cfg)
    if abs(h - 1.0) > ON_BOUNDARY_TOL:
        raise PreconditionError(f"point is not on the boundary: |h(x)-1| = {abs(h - 1.0):.3e}")
    prod = one_plus_x_product(xs)
    N = cfg.N_max.astype(float)
    b = ((N - 1.0) / prod + 1.0 / (1.0 + xs)) / (cfg.L * N)
    return b, 1.0 / prod


def _throughput_jacobian_fd(x: np.ndarray, cfg: WlanConfig, rel_step: float = 1e-6) -> np.ndarray:
    """J[i,k] = ds_i/dx_k by central differences (relative step)."""
    n = cfg.n
    J = np.empty((n, n))
    for k in range(n):
        hstep = rel_step * max(abs(x[k]), 1.0)
        xp = x.copy(); xp[k] += hstep
        xm = x.copy(); xm[k] = max(xm[k] - hstep, 0.0)
        sp = throughput(xp, cfg.N_max, cfg)
        sm = throughput(xm, cfg.N_max, cfg)
        J[:, k] = (sp - sm) / (xp[k] - xm[k])
    return J


def orthogonality_check(x_star, cfg: WlanConfig) -> np.ndarray:
    """Relative residuals of sum_i b_i ds_i/dx_k = 0 at a boundary point.

    The Jacobian is estimated by central finite differences; residual k
    is normalized by sum_i |b_i * ds_i/dx_k| so a valid tangent normal
    yields entries near zero.
    """
    xs = validate_attempt_vector(x_star, cfg.n)
    b, _ = tangent_normal(xs, cfg)
    J = _throughput_jacobian_fd(xs, cfg)
    raw = b @ J
    scale = np.abs(b[:, None] * J).sum(axis=0)
    return raw / np.where(scale > 0, scale, 1.0)


def in_rate_region(s, cfg: WlanConfig, tol: float = MEMBERSHIP_TOL):
    """Classify a throughput vector as inside/boundary/outside the region.

    Returns (verdict, lam) where lam scales s onto the boundary point in
    its own direction: lam < 1 inside, ~1 boundary, > 1 outside.  The
    zero vector is inside by convention.  Directions with zero entries
    are handled by solving h over the sub-clique of active stations; a
    single active station is compared against its open supremum L_i.
    """
    sv = np.atleast_1d(np.asarray(s, dtype=float))
    if sv.shape != (cfg.n,):
        raise DomainError(f"throughput vector must have length {cfg.n}, got {sv.shape}")
    if np.any(sv < 0) or not np.all(np.isfinite(sv)):
        raise DomainError("throughputs must be finite and >= 0")
    pos = sv > 0
    if not pos.any():
        return "inside", 0.0
    if pos.sum() == 1:
        # Single active station: region is the half-open segment [0, L_i).
        i = int(np.argmax(pos))
        lam = sv[i] / cfg.L[i]
    else:
        y = sv / sv.sum()
        xbar = y / (cfg.L * cfg.N_max)
        lam_star = _solve_lambda_rows(xbar[None, :], cfg.a)[0]
        x_star = lam_star * xbar
        s_b = throughput(x_star, cfg.N_max, cfg)
        lam = sv.sum() / s_b.sum()
    if lam < 1.0 - tol:
        return "inside", float(lam)
    if lam > 1.0 + tol:
        return "outside", float(lam)
    return "boundary", float(lam)


def sample_directions(n: int, K: int, seed) -> np.ndarray:
    """K random directions on the open simplex, deterministic per seed."""
    rng = np.random.default_rng(seed)
    g = rng.standard_exponential((K, n))
    return g / g.sum(axis=1, keepdims=True)


def grid_directions(K: int) -> np.ndarray:
    """Uniform n=2 direction grid y_1 = k/(K+1), k = 1..K (endpoints open)."""
    if K < 1:
        raise DomainError("grid size must be >= 1")
    t = np.arange(1, K + 1) / (K + 1.0)
    return np.column_stack([t, 1.0 - t])


def boundary_points_for_directions(dirs: np.ndarray, cfg: WlanConfig) -> list[BoundaryPoint]:
    """Boundary points for each row of a direction matrix (vectorized solve)."""
    xbar = dirs / (cfg.L * cfg.N_max)[None, :]
    lams = _solve_lambda_rows(xbar, cfg.a)
    return [_make_boundary_point(dirs[k], lams[k], cfg) for k in range(len(lams))]


def sample_boundary(cfg: WlanConfig, K: int, seed=0) -> list[BoundaryPoint]:
    """K boundary points, directions sampled on the open simplex.

    Deterministic given the seed; n=2 uses the uniform direction grid
    y_1 = k/(K+1) instead of random draws.
    """
    if cfg.n == 1:
        raise PreconditionError("boundary unattainable: a single station never reaches h(x)=1 for a > 0")
    if K < 1:
        raise DomainError("sample count must be >= 1")
    dirs = grid_directions(K) if cfg.n == 2 else sample_directions(cfg.n, K, seed)
    return boundary_points_for_directions(dirs, cfg)


def tau_form_residual(x_star, cfg: WlanConfig) -> float:
    """Residual of the boundary identity sum tau*_i + (1-a) prod(1-tau*_i) = 1."""
    tau = x_to_tau(validate_attempt_vector(x_star, cfg.n))
    return float(tau.sum() + (1.0 - cfg.a) * np.prod(1.0 - tau) - 1.0)
