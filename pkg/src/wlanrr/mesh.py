"""Mesh networks of mutually contending cliques and their rate polytopes.

A mesh is a set of single-hop flows plus a list of cliques; each clique
is a contention domain where all member flows share the medium.  Fixing
a boundary operating point per clique yields one linear constraint per
clique on the flow rates (in Mbps), and the intersection is a polytope
inside the true rate region.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, PreconditionError
from .model import WlanConfig, throughput, validate_attempt_vector
from .region import boundary_h, boundary_scale
from .subsets import alpha_coefficients
from .tolerances import ON_BOUNDARY_TOL


@dataclass(frozen=True)
class CliqueRecord:
    """One contention domain: idle ratio, member flows, their link rates."""

    a: float
    flows: tuple          # ordered flow names active in this clique
    rates_mbps: np.ndarray  # peak PHY rate per member flow, Mbps
    bursts: np.ndarray = None  # TXOP frames per win, defaults to 1
    label: str = ""

    def __post_init__(self):
        flows = tuple(self.flows)
        if len(flows) == 0:
            raise DomainError("a clique needs at least one member flow")
        if len(set(flows)) != len(flows):
            raise DomainError(f"duplicate flow in clique {self.label or flows}")
        rates = np.atleast_1d(np.asarray(self.rates_mbps, dtype=float))
        if rates.shape != (len(flows),) or not np.all(rates > 0):
            raise DomainError("rates_mbps must be positive, one per member flow")
        bursts = np.ones(len(flows), dtype=int) if self.bursts is None \
            else np.atleast_1d(np.asarray(self.bursts, dtype=int))
        if bursts.shape != (len(flows),) or np.any(bursts < 1):
            raise DomainError("bursts must be integers >= 1, one per member flow")
        object.__setattr__(self, "flows", flows)
        object.__setattr__(self, "rates_mbps", rates)
        object.__setattr__(self, "bursts", bursts)

    @property
    def n(self) -> int:
        return len(self.flows)

    def config(self) -> WlanConfig:
        """WLAN view of the clique; L in Mbps so throughputs come out in Mbps."""
        return WlanConfig(n=self.n, a=self.a, L=self.rates_mbps,
                          N_lo=self.bursts, N_hi=self.bursts, label=self.label)


@dataclass(frozen=True)
class MeshNetwork:
    """Flows plus the cliques they contend in."""

    flows: tuple
    cliques: tuple

    def __post_init__(self):
        flows = tuple(self.flows)
        cliques = tuple(self.cliques)
        if len(flows) == 0:
            raise DomainError("mesh needs at least one flow")
        if len(set(flows)) != len(flows):
            raise DomainError("flow names must be unique")
        if len(cliques) == 0:
            raise DomainError("mesh needs at least one clique")
        covered = set()
        for c in cliques:
            unknown = [f for f in c.flows if f not in flows]
            if unknown:
                raise DomainError(f"clique {c.label or c.flows} references unknown flow(s) {unknown}")
            covered.update(c.flows)
        missing = [f for f in flows if f not in covered]
        if missing:
            raise DomainError(f"flow(s) {missing} belong to no clique")
        object.__setattr__(self, "flows", flows)
        object.__setattr__(self, "cliques", cliques)

    @property
    def n_flows(self) -> int:
        return len(self.flows)

    def flow_index(self, name) -> int:
        return self.flows.index(name)


@dataclass(frozen=True)
class OperatingPointSet:
    """Per-clique boundary attempt vectors; None for single-flow cliques."""

    mesh: MeshNetwork
    points: tuple

    def __post_init__(self):
        points = tuple(self.points)
        if len(points) != len(self.mesh.cliques):
            raise DomainError("need one operating point entry per clique")
        checked = []
        for c, xs in zip(self.mesh.cliques, points):
            if c.n == 1:
                if xs is not None:
                    raise PreconditionError(
                        f"clique {c.label or c.flows}: single-flow cliques have no boundary point")
                checked.append(None)
                continue
            xv = validate_attempt_vector(xs, c.n)
            h = boundary_h(xv, c.config())
            if abs(h - 1.0) > ON_BOUNDARY_TOL:
                raise PreconditionError(
                    f"clique {c.label or c.flows}: |h(x*)-1| = {abs(h - 1.0):.3e} exceeds {ON_BOUNDARY_TOL}")
            checked.append(xv)
        object.__setattr__(self, "points", tuple(checked))

    def clique_throughputs(self, k: int) -> np.ndarray:
        """Boundary throughputs (Mbps) of clique k's member flows."""
        c = self.mesh.cliques[k]
        if self.points[k] is None:
            raise PreconditionError("single-flow clique has no boundary throughput")
        cfg = c.config()
        return throughput(self.points[k], cfg.N_max, cfg)


def symmetric_operating_points(mesh: MeshNetwork) -> OperatingPointSet:
    """Boundary points in each clique's equal-throughput-share direction."""
    pts = []
    for c in mesh.cliques:
        if c.n == 1:
            pts.append(None)
        else:
            bp = boundary_scale(np.full(c.n, 1.0 / c.n), c.config())
            pts.append(bp.x_star)
    return OperatingPointSet(mesh, tuple(pts))


@dataclass(frozen=True)
class LinearConstraint:
    """coeffs . s <= rhs over the full flow-rate vector (Mbps)."""

    coeffs: np.ndarray
    rhs: float = 1.0
    label: str = ""

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coeffs, dtype=float))
        if coeffs.ndim != 1 or not np.all(np.isfinite(coeffs)) or np.any(coeffs < 0):
            raise DomainError("constraint coefficients must be finite and >= 0")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "rhs", float(self.rhs))

    def slack(self, s) -> float:
        return self.rhs - float(np.dot(self.coeffs, np.asarray(s, dtype=float)))


def assemble_polytope(mesh: MeshNetwork, ops: OperatingPointSet) -> list:
    """One constraint per clique cutting that clique's maximal convex subset.

    Multi-flow cliques contribute sum_f alpha_f s_f <= 1 with alpha from
    the tangent construction at the clique's operating point (alpha in
    1/Mbps since clique payloads are link rates in Mbps).  A single-flow
    clique degenerates to the cap s_f <= rate, i.e. coefficient 1/rate.
    """
    same = ops.mesh is mesh or (
        ops.mesh.flows == mesh.flows
        and tuple(c.flows for c in ops.mesh.cliques) == tuple(c.flows for c in mesh.cliques))
    if not same:
        raise PreconditionError("operating points were built for a different mesh")
    nf = mesh.n_flows
    out = []
    for k, c in enumerate(mesh.cliques):
        coeffs = np.zeros(nf)
        if c.n == 1:
            coeffs[mesh.flow_index(c.flows[0])] = 1.0 / c.rates_mbps[0]
        else:
            alpha = alpha_coefficients(ops.points[k], c.config())
            for f, af in zip(c.flows, alpha):
                coeffs[mesh.flow_index(f)] = af
        out.append(LinearConstraint(coeffs, 1.0, label=c.label or f"clique{k + 1}"))
    return out
