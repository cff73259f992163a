"""Slot-level Monte Carlo oracle for the saturation throughput model.

Each MAC slot every station attempts independently with its probability
tau_i.  No attempt costs an idle slot (a time units), a lone attempt by
station i delivers an N_i-frame burst (N_i time units, N_i*L_i bits),
two or more attempts collide (1 time unit, nothing delivered).  The
empirical bits/time ratios are compared against the analytic model.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import WlanConfig, tau_to_x, throughput, validate_burst_vector

_MIN_BATCHES = 30


@dataclass(frozen=True)
class SimConfig:
    """One simulation run: WLAN, attempt probabilities, bursts, length, seed."""

    wlan: WlanConfig
    tau: np.ndarray
    N: np.ndarray = None
    slots: int = 10**6
    seed: int = 0
    batches: int = _MIN_BATCHES

    def __post_init__(self):
        tau = np.atleast_1d(np.asarray(self.tau, dtype=float))
        if tau.shape != (self.wlan.n,):
            raise DomainError(f"tau must have length n={self.wlan.n}")
        if np.any(tau < 0) or np.any(tau >= 1) or not np.all(np.isfinite(tau)):
            raise DomainError("attempt probabilities must satisfy 0 <= tau < 1")
        N = self.wlan.N_max if self.N is None else self.N
        N = validate_burst_vector(N, self.wlan)
        if int(self.slots) != self.slots or self.slots < 1:
            raise DomainError("slots must be an integer >= 1")
        if int(self.batches) != self.batches or self.batches < _MIN_BATCHES:
            raise DomainError(f"batches must be an integer >= {_MIN_BATCHES}")
        object.__setattr__(self, "tau", tau)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "slots", int(self.slots))
        object.__setattr__(self, "batches", int(self.batches))


@dataclass(frozen=True)
class SimResult:
    """Empirical counters and the derived throughput estimates."""

    bits: np.ndarray          # delivered bits per station
    elapsed: float            # virtual time in units of T_c
    throughput: np.ndarray    # bits / elapsed per station
    stderr: np.ndarray        # batch-means standard error per station
    idle_slots: int
    success_slots: np.ndarray  # per station
    collision_slots: int
    slots: int


def simulate(cfg: SimConfig) -> SimResult:
    """Run the slotted simulation; deterministic for a given seed."""
    n = cfg.wlan.n
    a = cfg.wlan.a
    NL = cfg.N * cfg.wlan.L

    B = min(cfg.batches, cfg.slots)
    sizes = np.full(B, cfg.slots // B, dtype=int)
    sizes[: cfg.slots % B] += 1
    streams = np.random.SeedSequence(cfg.seed).spawn(B)

    idle = 0
    coll = 0
    succ = np.zeros(n, dtype=np.int64)
    batch_ratio = np.full((B, n), np.nan)
    for b, (size, ss) in enumerate(zip(sizes, streams)):
        rng = np.random.default_rng(ss)
        attempts = rng.random((size, n)) < cfg.tau
        counts = attempts.sum(axis=1)
        idle_b = int(np.count_nonzero(counts == 0))
        coll_b = int(np.count_nonzero(counts >= 2))
        single = counts == 1
        # winner identity for the single-attempt slots
        succ_b = attempts[single].sum(axis=0).astype(np.int64)
        elapsed_b = a * idle_b + float(succ_b @ cfg.N) + coll_b
        bits_b = succ_b * NL
        idle += idle_b
        coll += coll_b
        succ += succ_b
        if elapsed_b > 0:
            batch_ratio[b] = bits_b / elapsed_b

    bits = succ * NL
    elapsed = a * idle + float(succ @ cfg.N) + coll
    thr = bits / elapsed if elapsed > 0 else np.zeros(n)
    ok = ~np.isnan(batch_ratio[:, 0])
    if int(ok.sum()) >= 2:
        stderr = np.std(batch_ratio[ok], axis=0, ddof=1) / np.sqrt(int(ok.sum()))
    else:
        stderr = np.full(n, np.inf)
    return SimResult(bits=bits.astype(float), elapsed=float(elapsed),
                     throughput=np.asarray(thr, dtype=float), stderr=stderr,
                     idle_slots=idle, success_slots=succ,
                     collision_slots=coll, slots=cfg.slots)


def analytic_throughput(cfg: SimConfig) -> np.ndarray:
    """Model value the simulation estimates (same tau, N, payloads)."""
    return throughput(tau_to_x(cfg.tau), cfg.N, cfg.wlan)


def compare_to_model(cfg: SimConfig, result: SimResult = None):
    """Per-station z-scores of the simulated throughput against the model.

    Stations with tau_i = 0 deliver exactly zero in both; reported as
    z = 0 rather than 0/0.
    """
    res = simulate(cfg) if result is None else result
    ref = analytic_throughput(cfg)
    diff = res.throughput - ref
    with np.errstate(divide="ignore", invalid="ignore"):
        z = diff / res.stderr
    exact = (cfg.tau == 0) | ((diff == 0) & (res.stderr == 0))
    return np.where(exact, 0.0, z)
