"""Exact n-step transition rows and a seeded Monte Carlo of the two-experiment urn."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

import numpy as np

from ._backend import kernels
from .chain import ChainParams, Region, coeff_pqr
from .errors import ParameterError

BLOCK = 4096
MAX_POWER = 10_000


@dataclass(frozen=True)
class UrnModel:
    """Integer urn parameters with ``alpha = 1/A``, ``beta = -1/B``, ``t = 1/T + K``.

    Only the branch ``A < B < T`` is supported.
    """

    A: int
    B: int
    T: int
    K: int

    def __post_init__(self):
        for name in ("A", "B", "T", "K"):
            v = getattr(self, name)
            if int(v) != v:
                raise ParameterError(f"{name} must be an integer")
            object.__setattr__(self, name, int(v))
        A, B, T, K = self.A, self.B, self.T, self.K
        if min(A, B, T) < 2 or K < 0:
            raise ParameterError("need A, B, T >= 2 and K >= 0")
        if A * B <= A + B:
            raise ParameterError("need AB > A + B")
        if not A < B:
            raise ParameterError("need A < B")
        if not B < T:
            raise ParameterError(
                "only the branch A < B < T is supported; T <= B (with B < AT/(A+T)) is not"
            )

    @property
    def params(self) -> ChainParams:
        p = ChainParams(1.0 / self.A, -1.0 / self.B, 1.0 / self.T + self.K)
        assert p.region is Region.A1
        return p


@dataclass(frozen=True)
class UrnState:
    """State ``n = blue - red`` with the ball counts of the placement rule."""

    n: int
    blue: int
    red: int


def placement(n: int, K: int) -> UrnState:
    """Ball counts for state ``n``: ``(n+K, K)`` if ``n >= -K`` else ``(K, K-n)``."""
    n = int(n)
    if n >= -K:
        return UrnState(n, n + K, K)
    return UrnState(n, K, K - n)


def urn_counts(n: int, urn: UrnModel) -> Tuple[int, int, int, int]:
    """Integer counts ``(X_n, Y_n, S_n, T_n)`` driving the two experiments."""
    A, B, T, K = urn.A, urn.B, urn.T, urn.K
    m = int(n) + K
    Y = B * (A * T * m + A + T)
    X = A * (B * T * (m + 1) + B - T)
    S = A * B * T * m + A * B + T * (B - A)
    Tc = A * B * (T * m + 1)
    return X, Y, S, Tc


def experiment_probabilities(n: int, urn: UrnModel) -> Tuple[float, float]:
    """``(x_n, t_n)``: probability of moving up in Experiment 1 and down in Experiment 2."""
    X, Y, S, Tc = urn_counts(n, urn)
    ax, ay, asv, at = abs(X), abs(Y), abs(S), abs(Tc)
    return ax / (ax + ay), 1.0 - asv / (asv + at)


def step_experiment1(state: UrnState, urn: UrnModel, rng: np.random.Generator) -> UrnState:
    """Draw a ball: blue (probability ``x_n``) moves to ``n + 1``, red stays."""
    X, Y, _, _ = urn_counts(state.n, urn)
    ax = float(abs(X))
    up = ax / (ax + abs(Y))
    n = state.n + 1 if rng.random() < up else state.n
    return placement(n, urn.K)


def step_experiment2(state: UrnState, urn: UrnModel, rng: np.random.Generator) -> UrnState:
    """Draw a ball: blue (probability ``s_n``) stays, red moves to ``n - 1``."""
    _, _, S, Tc = urn_counts(state.n, urn)
    asv = float(abs(S))
    stay = asv / (asv + abs(Tc))
    n = state.n if rng.random() < stay else state.n - 1
    return placement(n, urn.K)


def step_chain(state: UrnState, urn: UrnModel, rng: np.random.Generator) -> UrnState:
    """One step of the chain: Experiment 1 followed by Experiment 2."""
    return step_experiment2(step_experiment1(state, urn, rng), urn, rng)


def truncated_power(i: int, j: int, n: int, params: ChainParams) -> float:
    """Entry ``(i, j)`` of ``P**n``, exact up to rounding.

    Propagates the row vector ``e_i`` through ``n`` tridiagonal steps on a
    window wide enough that the boundary is never reached.
    """
    if n < 0:
        raise ParameterError("step count must be nonnegative")
    if n > MAX_POWER:
        raise ParameterError(f"n > {MAX_POWER} exceeds the memory guard")
    return float(transition_row(i, n, params, max(abs(i), abs(j)) + n + 1).get(j, 0.0))


def transition_row(i: int, n: int, params: ChainParams, M: int = None) -> Dict[int, float]:
    """Row ``i`` of ``P**n`` on the window ``-M..M`` as ``{state: probability}``."""
    if M is None:
        M = abs(i) + n + 1
    if M < abs(i) + n:
        raise ParameterError("window too small for an exact row")
    states = np.arange(-M, M + 1)
    coeffs = np.array([coeff_pqr(int(s), params) for s in states])
    p, r, q = coeffs[:, 0], coeffs[:, 1], coeffs[:, 2]
    v = np.zeros(2 * M + 1)
    v[i + M] = 1.0
    for _ in range(n):
        new = v * r
        new[1:] += v[:-1] * p[:-1]
        new[:-1] += v[1:] * q[1:]
        v = new
    return {int(s): float(val) for s, val in zip(states, v) if val != 0.0}


def _uniform_block(seed: int, block: int, rows: int, cols: int) -> np.ndarray:
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, int(block)])
    return np.random.Generator(np.random.Philox(ss)).random((rows, cols))


def simulate_final_states(start: int, n_steps: int, replicas: int, urn: UrnModel, seed: int) -> np.ndarray:
    """Final states of independent replicas of the urn chain.

    Replica ``r`` reads its uniforms from row ``r % 4096`` of block
    ``r // 4096``, whose stream is seeded by ``(seed, block)``.
    """
    if replicas < 1:
        raise ParameterError("replicas must be positive")
    if n_steps < 0:
        raise ParameterError("n_steps must be nonnegative")
    out = np.empty(replicas, dtype=np.int64)
    if n_steps == 0:
        out[:] = start
        return out
    for b, lo in enumerate(range(0, replicas, BLOCK)):
        rows = min(BLOCK, replicas - lo)
        u = _uniform_block(seed, b, BLOCK, 2 * n_steps)[:rows]
        out[lo : lo + rows] = kernels.simulate_urn(u, start, urn.A, urn.B, urn.T, urn.K)
    return out


def empirical_transition(start: int, n_steps: int, replicas: int, urn: UrnModel, seed: int) -> Dict[int, float]:
    """Relative frequencies of the state after ``n_steps`` chain steps."""
    final = simulate_final_states(start, n_steps, replicas, urn, seed)
    states, counts = np.unique(final, return_counts=True)
    return {int(s): float(c) / replicas for s, c in zip(states, counts)}


def total_variation(p: Dict[int, float], q: Dict[int, float]) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
