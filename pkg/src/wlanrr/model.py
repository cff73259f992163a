"""Analytic saturation-throughput model for a single WLAN clique.

Time is slotted into MAC slots (idle / success / collision).  Station i
attempts with probability tau_i per slot; everything downstream works in
the transformed rate x_i = tau_i/(1-tau_i).  Collision duration T_c is
normalized to 1, the PHY idle slot lasts a = sigma/T_c, and a won
transmission opportunity carries a burst of N_i frames of L_i payload
bits each.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Switch the (1+x) product to log-space beyond these scales to dodge
# overflow; identical results at normal scales.
_LOGSPACE_N = 30
_LOGSPACE_X = 1e6


def _as_vector(v, name: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(v, dtype=float))
    if arr.ndim != 1:
        raise DomainError(f"{name} must be a 1-D vector, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class WlanConfig:
    """One WLAN clique: station count, idle-slot ratio and TXOP limits.

    L is the per-station frame payload in bits; N_lo/N_hi bound the
    admissible TXOP burst size (frames per won opportunity).
    """

    n: int
    a: float
    L: np.ndarray = None
    N_lo: np.ndarray = None
    N_hi: np.ndarray = None
    label: str = ""

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"station count must be an integer >= 1, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if not (self.a > 0) or not np.isfinite(self.a):
            raise DomainError(f"idle-slot ratio a must be finite and > 0, got {self.a}")
        L = np.ones(self.n) if self.L is None else _as_vector(self.L, "L")
        N_lo = np.ones(self.n, dtype=int) if self.N_lo is None else np.atleast_1d(np.asarray(self.N_lo, dtype=int))
        N_hi = N_lo.copy() if self.N_hi is None else np.atleast_1d(np.asarray(self.N_hi, dtype=int))
        for name, arr in (("L", L), ("N_lo", N_lo), ("N_hi", N_hi)):
            if arr.shape != (self.n,):
                raise DomainError(f"{name} must have length n={self.n}, got {arr.shape}")
        if not np.all(L > 0):
            raise DomainError("payload sizes L must all be positive")
        if np.any(N_lo < 1) or np.any(N_hi < N_lo):
            raise DomainError("burst bounds must satisfy 1 <= N_lo <= N_hi")
        object.__setattr__(self, "L", L)
        object.__setattr__(self, "N_lo", N_lo)
        object.__setattr__(self, "N_hi", N_hi)

    @property
    def N_max(self) -> np.ndarray:
        """Upper burst bounds (the boundary-achieving burst choice)."""
        return self.N_hi


def validate_attempt_vector(x, n: int = None) -> np.ndarray:
    """Check x_i >= 0 and finite; returns the vector as a float array."""
    arr = _as_vector(x, "x")
    if n is not None and arr.shape != (n,):
        raise DomainError(f"attempt vector must have length {n}, got {arr.shape}")
    if not np.all(np.isfinite(arr)) or np.any(arr < 0):
        raise DomainError("attempt rates must be finite and >= 0")
    return arr


def validate_burst_vector(N, cfg: WlanConfig) -> np.ndarray:
    """Check N_lo <= N <= N_hi against cfg; burst sizes may be real >= 1."""
    arr = _as_vector(N, "N")
    if arr.shape != (cfg.n,):
        raise DomainError(f"burst vector must have length {cfg.n}, got {arr.shape}")
    if np.any(arr < cfg.N_lo) or np.any(arr > cfg.N_hi):
        raise DomainError("burst sizes must lie within [N_lo, N_hi]")
    return arr


def tau_to_x(tau) -> np.ndarray:
    """Transform attempt probabilities tau in [0,1) to rates x = tau/(1-tau)."""
    t = _as_vector(tau, "tau")
    if np.any(t < 0) or np.any(t >= 1) or not np.all(np.isfinite(t)):
        raise DomainError("attempt probabilities must lie in [0, 1)")
    return t / (1.0 - t)


def x_to_tau(x) -> np.ndarray:
    """Inverse transform: tau = x/(1+x) in [0,1)."""
    arr = validate_attempt_vector(x)
    return arr / (1.0 + arr)


def one_plus_x_product(x: np.ndarray) -> float:
    """prod_k (1+x_k), evaluated in log-space at extreme scales."""
    if len(x) > _LOGSPACE_N or (len(x) and x.max() > _LOGSPACE_X):
        return float(np.exp(np.log1p(x).sum()))
    return float(np.prod(1.0 + x))


def idle_probability(x) -> float:
    """P_idle = 1/prod(1+x_k): probability a MAC slot is a PHY idle slot."""
    arr = validate_attempt_vector(x)
    return 1.0 / one_plus_x_product(arr)


def success_probability(i: int, x) -> float:
    """P_succ,i = x_i * P_idle for station i (1-based index)."""
    arr = validate_attempt_vector(x)
    if not 1 <= i <= len(arr):
        raise DomainError(f"station index must be in 1..{len(arr)}, got {i}")
    return arr[i - 1] / one_plus_x_product(arr)


def collision_probability(x) -> float:
    """P_coll = 1 - P_idle - sum_i P_succ,i (>= 0 for all x >= 0)."""
    arr = validate_attempt_vector(x)
    p_idle = 1.0 / one_plus_x_product(arr)
    return 1.0 - p_idle * (1.0 + arr.sum())

def x_denominator(x, N, cfg: WlanConfig) -> float:
    """X(x,N) = a + sum_k (N_k - 1) x_k + prod_k (1+x_k) - 1 (always > 0)."""
    arr = validate_attempt_vector(x, cfg.n)
    Nv = validate_burst_vector(N, cfg)
    return cfg.a + float(((Nv - 1.0) * arr).sum()) + one_plus_x_product(arr) - 1.0


def throughput(x, N, cfg: WlanConfig) -> np.ndarray:
    """Per-station mean throughput s_i = N_i x_i L_i / X(x,N), bits per T_c."""
    arr = validate_attempt_vector(x, cfg.n)
    Nv = validate_burst_vector(N, cfg)
    return Nv * arr * cfg.L / x_denominator(arr, Nv, cfg)
