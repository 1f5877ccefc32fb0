"""Endpoint-aware quadrature on [0, 1] and the Karlin-McGregor formula."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence, Tuple

import numpy as np
from scipy.special import roots_jacobi

from .chain import ChainParams, potential
from .errors import ParameterError, QuadratureError
from .polynomials import family_jets
from .specfun import ln_gamma
from .spectral import SpectralDensity, spectral_psi

DEFAULT_NODES = 200
COND_LIMIT = 10


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for ``int_0^1 x**a (1-x)**b f(x) dx``."""

    nodes: np.ndarray
    weights: np.ndarray
    weight_exponents: Tuple[float, float]

    def integrate(self, f: Callable) -> np.ndarray:
        vals = np.asarray(f(self.nodes))
        return np.tensordot(self.weights, vals, axes=(0, 0))


def beta_function(a: float, b: float) -> float:
    la, sa = ln_gamma(a)
    lb, sb = ln_gamma(b)
    lab, sab = ln_gamma(a + b)
    return sa * sb * sab * math.exp(la + lb - lab)


@lru_cache(maxsize=256)
def _cached_rule(a_exp: float, b_exp: float, N: int):
    # scipy's weight is (1-s)^alpha (1+s)^beta on [-1, 1]; s = 2x - 1
    s, w = roots_jacobi(N, b_exp, a_exp)
    x = (1.0 + s) / 2.0
    w = w / 2.0 ** (a_exp + b_exp + 1.0)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(w))):
        raise QuadratureError("Jacobi node computation failed")
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def jacobi_rule(a_exp: float, b_exp: float, N: int) -> QuadratureRule:
    """``N``-point Gauss-Jacobi rule on [0, 1] for the weight ``x**a (1-x)**b``.

    Exact for polynomials of degree up to ``2N - 1``.
    """
    if a_exp <= -1.0 or b_exp <= -1.0:
        raise ParameterError("weight exponents must exceed -1")
    if N < 1:
        raise ParameterError("N must be positive")
    x, w = _cached_rule(float(a_exp), float(b_exp), int(N))
    total = w.sum()
    expect = beta_function(a_exp + 1.0, b_exp + 1.0)
    if abs(total - expect) > 1e-10 * expect:
        raise QuadratureError("Jacobi weights fail the Beta-function check")
    return QuadratureRule(x, w, (float(a_exp), float(b_exp)))


def integrate_density(smooth_part: Callable, exponents: Tuple[float, float], N: int) -> np.ndarray:
    """``int_0^1 x**a (1-x)**b smooth_part(x) dx`` with a single Jacobi rule."""
    rule = jacobi_rule(exponents[0], exponents[1], N)
    return rule.integrate(smooth_part)


@dataclass(frozen=True)
class MatrixRule:
    """Nodes with 2x2 weights: ``int f^T Psi g ~ sum f(x_k)^T W_k g(x_k)``."""

    nodes: np.ndarray
    weights: np.ndarray  # (K, 2, 2)

    def total(self) -> np.ndarray:
        return self.weights.sum(axis=0)


def _half_left(e, N):
    rule = jacobi_rule(e, 0.0, N)
    return rule.nodes / 2.0, rule.weights / 2.0 ** (e + 1.0)


def _half_right(f, N):
    rule = jacobi_rule(0.0, f, N)
    return 0.5 + rule.nodes / 2.0, rule.weights / 2.0 ** (f + 1.0)


def matrix_rule(density: SpectralDensity, N: int = DEFAULT_NODES) -> MatrixRule:
    """Split rule for a density: Jacobi rules on [0, 1/2] for each power of
    ``x`` and on [1/2, 1] for each power of ``1 - x``."""
    if N < 1:
        raise ParameterError("N must be positive")
    nodes, weights = [], []
    for e in density.left_exponents:
        if e <= -1.0:
            raise QuadratureError(f"density is not integrable at 0 (power {e:g})")
        x, w = _half_left(e, N)
        part = density.left_parts(x)[e]
        nodes.append(x)
        weights.append(w[:, None, None] * part)
    for f in density.right_exponents:
        x, w = _half_right(f, N)
        part = density.right_parts(x)[f]
        nodes.append(x)
        weights.append(w[:, None, None] * part)
    W = np.concatenate(weights)
    if not np.all(np.isfinite(W)):
        raise QuadratureError("non-finite density values at quadrature nodes")
    return MatrixRule(np.concatenate(nodes), W)


def integrate_matrix_density(density: SpectralDensity, N: int = DEFAULT_NODES) -> np.ndarray:
    """``int_0^1 density(x) dx`` using the split rule."""
    return matrix_rule(density, N).total()


@lru_cache(maxsize=32)
def _psi_rule(params: ChainParams, N: int) -> MatrixRule:
    return matrix_rule(spectral_psi(params), N)


def block_moment_matrix(rule: MatrixRule, params: ChainParams, n_max: int, power: int = 0) -> np.ndarray:
    """``int x**power Q_n Psi Q_m^T`` for ``n, m <= n_max``.

    Returns
    -------
    ndarray, shape (n_max + 1, n_max + 1, 2, 2)
    """
    from .polynomials import block_jets

    Q = block_jets(params, rule.nodes, n_max)[0]  # (n, K, 2, 2)
    W = rule.weights * (rule.nodes ** power)[:, None, None]
    return np.einsum("nkab,kbc,mkdc->nmad", Q, W, Q)


def km_transition(i: int, j: int, n: int, params: ChainParams, N: int = DEFAULT_NODES) -> float:
    """``n``-step transition probability from ``i`` to ``j`` by the spectral integral."""
    if n < 0:
        raise ParameterError("step count must be nonnegative")
    if max(abs(i), abs(j)) > COND_LIMIT or n > 4 * COND_LIMIT:
        warnings.warn("large indices: the polynomial integrand may be ill-conditioned", RuntimeWarning)
    rule = _psi_rule(params, int(N))
    n_max = max(abs(i), abs(j), abs(i + 1), abs(j + 1))
    fam = family_jets(params, rule.nodes, n_max)[0]  # (eta, index, K)
    off = n_max + 1
    qi = fam[:, i + off, :].T  # (K, 2)
    qj = fam[:, j + off, :].T
    integrand = np.einsum("ka,kab,kb->k", qi, rule.weights, qj) * rule.nodes ** n
    value = potential(j, params) * math.fsum(integrand)
    if not math.isfinite(value):
        raise QuadratureError("non-finite Karlin-McGregor integral")
    return value


def km_matrix(states: Sequence[int], n: int, params: ChainParams, N: int = DEFAULT_NODES) -> np.ndarray:
    """Transition probabilities between all pairs in ``states`` in one pass."""
    states = list(states)
    rule = _psi_rule(params, int(N))
    n_max = max(max(abs(s), abs(s + 1)) for s in states)
    fam = family_jets(params, rule.nodes, n_max)[0]
    off = n_max + 1
    q = np.stack([fam[:, s + off, :].T for s in states])  # (S, K, 2)
    W = rule.weights * (rule.nodes ** n)[:, None, None]
    G = np.einsum("ska,kab,tkb->st", q, W, q)
    pis = np.array([potential(s, params) for s in states])
    return G * pis[None, :]


def recurrence_diagnostic(params: ChainParams, eps_list: Sequence[float], N: int = DEFAULT_NODES) -> list:
    """``F(eps) = int_0^{1-eps} trace Psi(x) / (1 - x) dx`` for each ``eps``.

    The piece on ``[1/2, 1 - eps]`` is integrated term by term in the
    variable ``log(1 - x)``, where each endpoint power becomes an
    exponential.
    """
    eps = [float(e) for e in eps_list]
    if any(not 0.0 < e < 0.5 for e in eps):
        raise ParameterError("eps values must lie in (0, 1/2)")
    density = spectral_psi(params)
    left = 0.0
    for e in density.left_exponents:
        x, w = _half_left(e, N)
        part = density.left_parts(x)[e]
        left += float(np.sum(w * np.trace(part, axis1=1, axis2=2) / (1.0 - x)))
    s_nodes, s_weights = np.polynomial.legendre.leggauss(N)
    out = []
    for ep in eps:
        lo, hi = math.log(ep), math.log(0.5)
        s = lo + (hi - lo) * (s_nodes + 1.0) / 2.0
        ws = s_weights * (hi - lo) / 2.0
        u = np.exp(s)
        parts = density.right_parts(1.0 - u)
        total = left
        for f, block in parts.items():
            total += float(np.sum(ws * u ** f * np.trace(block, axis1=1, axis2=2)))
        if not math.isfinite(total):
            raise QuadratureError("non-finite recurrence diagnostic")
        out.append(total)
    return out
