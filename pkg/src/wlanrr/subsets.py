"""Maximal convex subsets of the rate region and convexity certificates.

Every boundary point generates the largest convex subset of the region
containing it: the simplex cut out of the positive orthant by its
tangent hyperplane, rescaled so the right-hand side is 1.  The
complement of the region in the positive orthant is strictly convex,
which these routines certify numerically (pairwise tangent margins and
the quadratic-form inequality used in the proof).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .model import WlanConfig, one_plus_x_product, throughput, validate_attempt_vector
from .region import boundary_h, tangent_normal, _solve_lambda_rows
from .tolerances import ON_BOUNDARY_TOL


@dataclass(frozen=True)
class ConvexSubset:
    """Constraint sum_i alpha_i s_i <= 1 cutting the maximal convex subset."""

    alpha: np.ndarray
    origin_x_star: np.ndarray
    clique_ref: str = ""


def _require_on_boundary(x_star, cfg: WlanConfig) -> np.ndarray:
    xs = validate_attempt_vector(x_star, cfg.n)
    h = boundary_h(xs, cfg)
    if abs(h - 1.0) > ON_BOUNDARY_TOL:
        raise PreconditionError(f"point is not on the boundary: |h(x)-1| = {abs(h - 1.0):.3e}")
    return xs


def alpha_coefficients(x_star, cfg: WlanConfig) -> np.ndarray:
    """alpha_i = (N_i - 1 + prod_{j!=i}(1+x*_j)) / (L_i N_i) with N = N_hi.

    Equals b_i(x*) * prod_j(1+x*_j): the tangent hyperplane rescaled to
    right-hand side 1.
    """
    xs = _require_on_boundary(x_star, cfg)
    prod = one_plus_x_product(xs)
    N = cfg.N_max.astype(float)
    return (N - 1.0 + prod / (1.0 + xs)) / (cfg.L * N)


def maximal_convex_subset(x_star, cfg: WlanConfig) -> ConvexSubset:
    """The maximal convex subset generated by boundary point x*."""
    xs = _require_on_boundary(x_star, cfg)
    return ConvexSubset(alpha=alpha_coefficients(xs, cfg), origin_x_star=xs,
                        clique_ref=cfg.label)


def subset_contains(s, subset: ConvexSubset) -> bool:
    """True iff s >= 0 satisfies sum_i alpha_i s_i <= 1 (+1e-12 slack)."""
    sv = np.atleast_1d(np.asarray(s, dtype=float))
    if sv.shape != subset.alpha.shape:
        raise DomainError(f"throughput vector must have length {len(subset.alpha)}")
    if np.any(sv < 0):
        return False
    return float(subset.alpha @ sv) <= 1.0 + 1e-12


def symmetric_subset(cfg: WlanConfig) -> ConvexSubset:
    """Maximal convex subset at the symmetric boundary point.

    Requires homogeneous payloads and burst bounds; solves the scalar
    equation h(x*1) = 1 and applies the general coefficient formula.
    """
    if cfg.n < 2:
        raise PreconditionError("boundary unattainable: a single station never reaches h(x)=1 for a > 0")
    if np.ptp(cfg.L) != 0 or np.ptp(cfg.N_max) != 0:
        raise PreconditionError("symmetric subset requires homogeneous L and N_hi")
    lam = _solve_lambda_rows(np.ones((1, cfg.n)), cfg.a)[0]
    x_star = np.full(cfg.n, lam)
    return maximal_convex_subset(x_star, cfg)


def complement_convexity_margin(x_star, y_star, cfg: WlanConfig) -> float:
    """Excess of s(y*) over the tangent hyperplane at x* (two boundary points).

    Strict convexity of the nonachievable set means this is positive
    whenever y* != x* and zero at coincidence.
    """
    xs = _require_on_boundary(x_star, cfg)
    ys = _require_on_boundary(y_star, cfg)
    b, rhs = tangent_normal(xs, cfg)
    return float(b @ throughput(ys, cfg.N_max, cfg)) - rhs


def convexity_margin_sweep(cfg: WlanConfig, pairs: int, seed=0) -> np.ndarray:
    """Tangent margins for random boundary pairs (vectorized sweep).

    Samples 2*pairs simplex directions, lifts them to the boundary and
    returns sum_i b_i(x*) s_i(y*) - 1/prod(1+x*_j) per pair.
    """
    if cfg.n < 2:
        raise PreconditionError("boundary unattainable: a single station never reaches h(x)=1 for a > 0")
    rng = np.random.default_rng(seed)
    g = rng.standard_exponential((2 * pairs, cfg.n))
    dirs = g / g.sum(axis=1, keepdims=True)
    xbar = dirs / (cfg.L * cfg.N_max)[None, :]
    lams = _solve_lambda_rows(xbar, cfg.a)
    pts = lams[:, None] * xbar
    X = pts[:pairs]
    Y = pts[pairs:]
    prod_x = np.prod(1.0 + X, axis=1)
    N = cfg.N_max.astype(float)
    b = ((N - 1.0)[None, :] / prod_x[:, None] + 1.0 / (1.0 + X)) / (cfg.L * N)[None, :]
    denom = cfg.a + ((N - 1.0) * Y).sum(axis=1) + np.prod(1.0 + Y, axis=1) - 1.0
    s_y = N * Y * cfg.L / denom[:, None]
    return (b * s_y).sum(axis=1) - 1.0 / prod_x


def subset_sample_points(subset: ConvexSubset, K: int, seed=0) -> np.ndarray:
    """K random points of the subset: s = rho * w/alpha with w on the simplex."""
    rng = np.random.default_rng(seed)
    g = rng.standard_exponential((K, len(subset.alpha)))
    w = g / g.sum(axis=1, keepdims=True)
    rho = rng.random(K)
    return rho[:, None] * w / subset.alpha[None, :]


def post_inequality_check(r, z) -> float:
    """sum_{i<j} z_i z_j for r in [0,1]^n with sum r = n-1 and r.z = 0.

    The quadratic form is negative for nondegenerate z; degenerate
    inputs (some r_j = 1 forcing the rest of z to zero) can only reach
    zero.  Preconditions are enforced to 1e-12.
    """
    rv = np.atleast_1d(np.asarray(r, dtype=float))
    zv = np.atleast_1d(np.asarray(z, dtype=float))
    if rv.shape != zv.shape or rv.ndim != 1:
        raise DomainError("r and z must be 1-D vectors of equal length")
    n = len(rv)
    if np.any(rv < -1e-12) or np.any(rv > 1.0 + 1e-12):
        raise DomainError("entries of r must lie in [0, 1]")
    if abs(rv.sum() - (n - 1)) > 1e-12:
        raise DomainError(f"sum of r must equal n-1 = {n - 1}, got {rv.sum()!r}")
    if abs(rv @ zv) > 1e-12 * max(1.0, float(np.linalg.norm(rv) * np.linalg.norm(zv))):
        raise DomainError("z must be orthogonal to r")
    total = zv.sum()
    return 0.5 * float(total * total - zv @ zv)


def sample_post_inputs(n: int, K: int, seed=0):
    """K nondegenerate (r, z) pairs satisfying the quadratic-form preconditions.

    r = 1 - d with d ~ Dirichlet(1,...,1) keeps every r_j < 1; z is a
    standard normal projected orthogonal to r and normalized.
    """
    rng = np.random.default_rng(seed)
    d = rng.standard_exponential((K, n))
    d /= d.sum(axis=1, keepdims=True)
    r = 1.0 - d
    v = rng.standard_normal((K, n))
    coef = (r * v).sum(axis=1) / (r * r).sum(axis=1)
    z = v - coef[:, None] * r
    norms = np.linalg.norm(z, axis=1)
    keep = norms > 1e-9
    z[keep] /= norms[keep, None]
    return r[keep], z[keep]
