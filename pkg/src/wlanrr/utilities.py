"""Increasing concave utility families for rate allocation.

Families: log (proportional fairness), iso-elastic/CRRA, hyperbolic
absolute risk aversion, linear-exponential, and power risk aversion.
Edge parameters defined via limits are dispatched explicitly:
iso-elastic alpha=1 is log, power-risk-aversion beta=0 collapses to
iso-elastic, and its alpha=1 turns the inner power mean into log.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

_FAMILIES = ("log", "iso-elastic", "hara", "lin-exp", "power-risk-aversion")

# exp() overflows above ~709.78; clamp to -inf / finite branches explicitly
_EXP_MAX = 700.0


def _exp(z):
    z = np.asarray(z, dtype=float)
    out = np.where(z > _EXP_MAX, np.inf, np.exp(np.minimum(z, _EXP_MAX)))
    return out


@dataclass(frozen=True)
class UtilityFunction:
    """Tagged utility family with parameters; use the factory methods."""

    family: str
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 1.0
    weight: float = 1.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise DomainError(f"unknown utility family {self.family!r}")
        if self.family == "iso-elastic" and self.alpha < 0:
            raise DomainError("iso-elastic exponent must be >= 0")
        if self.family == "lin-exp" and (self.alpha < 0 or self.beta < 0):
            raise DomainError("lin-exp parameters must be >= 0")
        if self.family == "power-risk-aversion" and (self.alpha < 0 or self.beta < 0):
            raise DomainError("power-risk-aversion parameters must be >= 0")
        if self.family == "hara":
            if self.alpha == 0.0:
                raise DomainError("hara alpha=0 limit is degenerate (constant utility)")
            if self.gamma == 0.0:
                raise DomainError("hara gamma must be nonzero")
            if self.alpha / self.gamma <= 0:
                raise DomainError("hara requires alpha/gamma > 0 to be increasing")
        if not self.weight > 0:
            raise DomainError("utility weight must be positive")

    @classmethod
    def log(cls, weight=1.0):
        return cls("log", weight=weight)

    @classmethod
    def iso_elastic(cls, alpha, weight=1.0):
        return cls("iso-elastic", alpha=alpha, weight=weight)

    @classmethod
    def hara(cls, alpha, beta, gamma, weight=1.0):
        return cls("hara", alpha=alpha, beta=beta, gamma=gamma, weight=weight)

    @classmethod
    def lin_exp(cls, alpha, beta, weight=1.0):
        return cls("lin-exp", alpha=alpha, beta=beta, weight=weight)

    @classmethod
    def power_risk_aversion(cls, alpha, beta, weight=1.0):
        return cls("power-risk-aversion", alpha=alpha, beta=beta, weight=weight)

    # -- domain ------------------------------------------------------------

    def in_domain(self, x) -> bool:
        xv = np.asarray(x, dtype=float)
        if self.family == "lin-exp":
            return bool(np.all(xv >= 0))
        if self.family == "hara":
            return bool(np.all(self.beta + xv / self.gamma > 0))
        return bool(np.all(xv > 0))

    def _check_domain(self, x):
        if not self.in_domain(x):
            raise DomainError(f"argument outside the domain of the {self.family} family")

    # -- evaluation --------------------------------------------------------

    def value(self, x):
        """U(x); accepts scalars or arrays."""
        self._check_domain(x)
        xv = np.asarray(x, dtype=float)
        scalar = xv.ndim == 0
        with np.errstate(over="ignore"):  # -inf limits near 0 are intended
            out = self.weight * self._value(xv)
        return float(out) if scalar else out

    def _value(self, x):
        f = self.family
        if f == "log":
            return np.log(x)
        if f == "iso-elastic":
            if self.alpha == 1.0:
                return np.log(x)
            e = 1.0 - self.alpha
            return (np.power(x, e) - 1.0) / e
        if f == "hara":
            a, b, g = self.alpha, self.beta, self.gamma
            if a == 1.0:
                return np.log(b + x / g)
            return a / (1.0 - a) * (np.power(b + x / g, 1.0 - a) - 1.0)
        if f == "lin-exp":
            return x - self.beta * np.exp(-self.alpha * x)
        # power risk aversion
        a, b = self.alpha, self.beta
        inner = np.log(x) if a == 1.0 else (np.power(x, 1.0 - a) - 1.0) / (1.0 - a)
        if b == 0.0:
            return inner
        return (1.0 - _exp(-b * inner)) / b

    def grad(self, x):
        """dU/dx; matches central finite differences on the interior."""
        self._check_domain(x)
        xv = np.asarray(x, dtype=float)
        scalar = xv.ndim == 0
        with np.errstate(over="ignore"):
            out = self.weight * self._grad(xv)
        return float(out) if scalar else out

    def _grad(self, x):
        f = self.family
        if f == "log":
            return 1.0 / x
        if f == "iso-elastic":
            return np.power(x, -self.alpha)
        if f == "hara":
            a, b, g = self.alpha, self.beta, self.gamma
            return (a / g) * np.power(b + x / g, -a)
        if f == "lin-exp":
            return 1.0 + self.alpha * self.beta * np.exp(-self.alpha * x)
        a, b = self.alpha, self.beta
        if b == 0.0:
            return np.power(x, -a)
        inner = np.log(x) if a == 1.0 else (np.power(x, 1.0 - a) - 1.0) / (1.0 - a)
        return _exp(-b * inner) * np.power(x, -a)

    def second_derivative(self, x):
        """d2U/dx2, analytic; <= 0 everywhere for the concave members."""
        self._check_domain(x)
        xv = np.asarray(x, dtype=float)
        scalar = xv.ndim == 0
        with np.errstate(over="ignore"):
            out = self.weight * self._second(xv)
        return float(out) if scalar else out

    def _second(self, x):
        f = self.family
        if f == "log":
            return -1.0 / (x * x)
        if f == "iso-elastic":
            return -self.alpha * np.power(x, -self.alpha - 1.0)
        if f == "hara":
            a, b, g = self.alpha, self.beta, self.gamma
            return -(a * a) / (g * g) * np.power(b + x / g, -a - 1.0)
        if f == "lin-exp":
            return -self.alpha * self.alpha * self.beta * np.exp(-self.alpha * x)
        a, b = self.alpha, self.beta
        if b == 0.0:
            return -a * np.power(x, -a - 1.0)
        inner = np.log(x) if a == 1.0 else (np.power(x, 1.0 - a) - 1.0) / (1.0 - a)
        # U' = exp(-b*inner(x)) * x^-a; differentiate the product
        return -_exp(-b * inner) * np.power(x, -a - 1.0) * (a + b * np.power(x, 1.0 - a))

    def second_derivative_fd(self, x, rel_step=1e-5):
        """Central second difference, for concavity spot checks."""
        h = rel_step * max(abs(x), 1.0)
        return (self.value(x + h) - 2.0 * self.value(x) + self.value(x - h)) / (h * h)


def is_log_domain_concave(U: UtilityFunction, grid=None, tol: float = 1e-9) -> bool:
    """Whether t -> U(exp(t)) is concave on the given grid of t values.

    Tested by second differences; any strictly positive one beyond tol
    fails.  Utilities passing this gate can be optimized through the
    log-rate change of variables; the others need the convex-subset
    polytope route.
    """
    if grid is None:
        grid = np.linspace(math.log(0.05), math.log(20.0), 481)
    t = np.asarray(grid, dtype=float)
    if not U.in_domain(np.exp(t)):
        raise DomainError("grid maps outside the utility's domain")
    f = U.value(np.exp(t))
    d2 = f[2:] - 2.0 * f[1:-1] + f[:-2]
    return bool(np.all(d2 <= tol))


def utility_from_dict(d: dict) -> UtilityFunction:
    """Build a UtilityFunction from a scenario-file mapping."""
    if "family" not in d:
        raise DomainError("utility entry requires a 'family' key")
    fam = d["family"]
    kw = {k: float(v) for k, v in d.items() if k != "family"}
    allowed = {
        "log": {"weight"},
        "iso-elastic": {"alpha", "weight"},
        "hara": {"alpha", "beta", "gamma", "weight"},
        "lin-exp": {"alpha", "beta", "weight"},
        "power-risk-aversion": {"alpha", "beta", "weight"},
    }
    if fam not in allowed:
        raise DomainError(f"unknown utility family {fam!r}")
    extra = set(kw) - allowed[fam]
    if extra:
        raise DomainError(f"unknown parameter(s) for {fam}: {sorted(extra)}")
    return UtilityFunction(fam, **kw)
