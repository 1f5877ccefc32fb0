"""Continued fractions for the free factor entry, the stochastic UL and LU
factorizations and the chains obtained by swapping the factors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, NamedTuple, Tuple

import numpy as np

from . import _asymptotic as asy
from .chain import BilateralSequence, ChainParams, coeff_pqr
from .errors import ConvergenceError, ParameterError, PoleError

CF_TOL = 1e-12
TAIL_ORDER = 16
TAIL_LEVELS = (8, 16, 32, 64, 128)
PLAIN_START = 64
DEFAULT_MAX_DEPTH = 65536


@dataclass(frozen=True)
class ContinuedFractionResult:
    """Outcome of a continued-fraction evaluation.

    ``depth_used`` counts explicit partial numerators beyond the first.
    """

    value: float
    depth_used: int
    converged: bool
    closed_form: float


def closed_form_H(params: ChainParams) -> float:
    a, b, t = params.alpha, params.beta, params.t
    return (a + t) / (a + b + 2.0 * t + 1.0)


def _numerators(params: ChainParams, which: str) -> Callable[[int], float]:
    if which == "H":
        def e(k):
            j, odd = divmod(k, 2)
            return coeff_pqr(j + 1, params)[2] if odd else coeff_pqr(j, params)[0]
    else:
        def e(k):
            j, odd = divmod(k, 2)
            return coeff_pqr(-j - 1, params)[0] if odd else coeff_pqr(-j, params)[2]
    return e


def _finish(which, z0):
    return 1.0 - z0 if which == "H" else z0


def cf_approximant(params: ChainParams, depth: int, which: str = "H") -> float:
    """Plain truncated continued fraction using numerators ``0..depth``.

    ``depth = 0`` gives ``1 - p_0`` for ``H`` and ``q_0`` for ``H'``.
    """
    if which not in ("H", "H'"):
        raise ParameterError("which must be 'H' or \"H'\"")
    if depth < 0:
        raise ParameterError("depth must be nonnegative")
    e = _numerators(params, which)
    z = e(depth)
    for k in range(depth - 1, -1, -1):
        z = e(k) / (1.0 - z)
    return _finish(which, z)


def _tail_series(params: ChainParams, which: str) -> np.ndarray:
    a, b, t = params.alpha, params.beta, params.t
    d = params.d
    if which == "H":
        A = asy.rational([(1, t + b + 1), (1, t + a + b + 1)], [(2, d + 1), (2, d + 2)], TAIL_ORDER)
        B = asy.rational([(1, t + 1), (1, t + a + 1)], [(2, d + 2), (2, d + 3)], TAIL_ORDER)
    else:
        A = asy.rational([(1, -t), (1, -t - a)], [(2, -d), (2, -d - 1)], TAIL_ORDER)
        B = asy.rational([(1, -t - b), (1, -t - a - b)], [(2, 1 - d), (2, -d)], TAIL_ORDER)
    return asy.riccati_tail(A, B)


def _tail_corrected(params, which, level, coeffs):
    # the pair of numerators at level j is (A_j, B_j); start from the formal tail
    e = _numerators(params, which)
    z = asy.evaluate(coeffs, level)
    for j in range(level - 1, -1, -1):
        z = e(2 * j) / (1.0 - e(2 * j + 1) / (1.0 - z))
    return _finish(which, z)


def _evaluate_cf(params: ChainParams, max_depth: int, which: str) -> ContinuedFractionResult:
    closed = closed_form_H(params)
    if max_depth < 0:
        raise ParameterError("max_depth must be nonnegative")
    if params.alpha > 0:
        coeffs = _tail_series(params, which)
        prev = None
        value = math.nan
        used = 0
        for level in TAIL_LEVELS:
            if 2 * level > max_depth:
                break
            value = _tail_corrected(params, which, level, coeffs)
            used = 2 * level
            if prev is not None and abs(value - prev) < CF_TOL:
                return ContinuedFractionResult(value, used, True, closed)
            prev = value
        if prev is not None:
            return ContinuedFractionResult(value, used, False, closed)
    # plain approximants on a doubling schedule
    depth = min(PLAIN_START, max_depth)
    prev = None
    value = cf_approximant(params, depth, which)
    while True:
        if prev is not None and abs(value - prev) < CF_TOL:
            return ContinuedFractionResult(value, depth, params.alpha > 0, closed)
        if depth >= max_depth:
            return ContinuedFractionResult(value, depth, False, closed)
        prev = value
        depth = min(2 * depth, max_depth)
        value = cf_approximant(params, depth, which)


def cf_H(params: ChainParams, max_depth: int = DEFAULT_MAX_DEPTH) -> ContinuedFractionResult:
    """The continued fraction ``H`` built from ``p_0, q_1, p_1, q_2, ...``.

    For ``alpha > 0`` the fraction converges only algebraically, so the
    truncation is closed with a formal large-index expansion of its tail;
    successive levels must agree within 1e-12. For ``alpha <= 0`` plain
    approximants are reported with ``converged = False``.
    """
    return _evaluate_cf(params, max_depth, "H")


def cf_Hprime(params: ChainParams, max_depth: int = DEFAULT_MAX_DEPTH) -> ContinuedFractionResult:
    """The continued fraction ``H'`` built from ``q_0, p_{-1}, q_{-1}, p_{-2}, ...``."""
    return _evaluate_cf(params, max_depth, "H'")


class ChainSequenceSums(NamedTuple):
    L: float
    L_prime: float
    converged: bool
    terms: int


def _m(params, k):
    a, b, t = params.alpha, params.beta, params.t
    j, odd = divmod(k, 2)
    if odd:
        return (j + t + b + 1.0) / (2.0 * j + 2.0 * t + a + b + 2.0)
    return (j + t) / (2.0 * j + 2.0 * t + a + b + 1.0)


def _m_prime(params, k):
    a, b, t = params.alpha, params.beta, params.t
    j, odd = divmod(k, 2)
    if odd:
        return (-j + t + a) / (-2.0 * j + 2.0 * t + a + b)
    return (-j + t + a + b + 1.0) / (-2.0 * j + 2.0 * t + a + b + 1.0)


def _ratio_params(params, primed):
    """Shifts ``(a_i), (b_i)`` of the even and odd subsequence ratios."""
    a, b, t = params.alpha, params.beta, params.t
    if not primed:
        even = ([t + b + 1.0, t + 1.0], [t + a + 1.0, t + a + b + 2.0])
        odd = ([t + 1.0, t + b + 2.0], [t + a + b + 2.0, t + a + 2.0])
    else:
        even = ([-t - a, -t - a - b], [-t - b, 1.0 - t])
        odd = ([-t - a - b, 1.0 - t - a], [1.0 - t, 1.0 - t - b])
    return even, odd


def _sequence_sum(params, primed, n0):
    m = _m_prime if primed else _m
    # products c_n = prod_{k<=n} m_k/(1-m_k) for n = 1..2 n0 + 1
    total = 0.0
    prod = 1.0
    last = {}
    for k in range(1, 2 * n0 + 2):
        mk = m(params, k)
        if mk == 1.0:
            raise PoleError("chain sequence ratio m/(1-m) has a vanishing denominator")
        prod *= mk / (1.0 - mk)
        if k <= 2 * n0 - 1:
            total += prod
        last[k] = prod
    # remaining: even terms N >= n0 (k = 2N), odd terms N >= n0 (k = 2N + 1)
    (ea, eb), (oa, ob) = _ratio_params(params, primed)
    sig_e, e_even = asy.hyperterm_expansion(ea, eb, TAIL_ORDER)
    sig_o, e_odd = asy.hyperterm_expansion(oa, ob, TAIL_ORDER)
    total += asy.hyperterm_tail(last[2 * n0], n0, sig_e, e_even)
    total += asy.hyperterm_tail(last[2 * n0 + 1], n0, sig_o, e_odd)
    return total


def chain_sequence_sums(params: ChainParams, terms: int = 64, max_terms: int = 4096) -> ChainSequenceSums:
    """Sums ``L`` and ``L'`` of the products ``prod m_k / (1 - m_k)``.

    Explicit partial sums over ``2 * terms`` products are completed with an
    asymptotic tail, doubling ``terms`` until two estimates agree within
    1e-12. For ``alpha <= 0`` the series diverge; the result then carries
    ``converged = False`` and the explicit partial sums.
    """
    if terms < 4:
        raise ParameterError("terms must be at least 4")
    if params.alpha <= 0:
        sums = []
        for primed in (False, True):
            m = _m_prime if primed else _m
            prod, total = 1.0, 0.0
            for k in range(1, 2 * max_terms + 1):
                mk = m(params, k)
                prod *= mk / (1.0 - mk)
                total += prod
            sums.append(total)
        return ChainSequenceSums(float(sums[0]), float(sums[1]), False, 2 * max_terms)
    n0 = terms
    prev = (_sequence_sum(params, False, n0), _sequence_sum(params, True, n0))
    while n0 < max_terms:
        n0 *= 2
        cur = (_sequence_sum(params, False, n0), _sequence_sum(params, True, n0))
        if max(abs(cur[0] - prev[0]), abs(cur[1] - prev[1])) < CF_TOL * max(1.0, abs(cur[0]), abs(cur[1])):
            return ChainSequenceSums(float(cur[0]), float(cur[1]), True, 2 * n0)
        prev = cur
    return ChainSequenceSums(float(prev[0]), float(prev[1]), False, 2 * n0)


def H_from_sum(params: ChainParams, L: float) -> float:
    """``m_0 + (1 - m_0) / (1 + L)``."""
    m0 = _m(params, 0)
    return m0 + (1.0 - m0) / (1.0 + L)


def Hprime_from_sum(params: ChainParams, L_prime: float) -> float:
    """``H'`` from ``1 - H' = m'_0 + (1 - m'_0) / (1 + L')``."""
    m0 = _m_prime(params, 0)
    return 1.0 - (m0 + (1.0 - m0) / (1.0 + L_prime))


# -- factor entries ----------------------------------------------------------

def ul_entries(n: int, params: ChainParams) -> Tuple[float, float, float, float]:
    """``(x_n, y_n, s_n, t_n)`` of the UL factors."""
    a, b, t = params.alpha, params.beta, params.t
    m = n + t
    d1 = 2.0 * m + a + b + 1.0
    d0 = 2.0 * m + a + b
    if d1 == 0.0 or d0 == 0.0:
        raise PoleError(f"factor entries have a vanishing denominator at n={n}")
    return (m + b + 1.0) / d1, (m + a) / d1, (m + a + b) / d0, m / d0


def _require_positive_alpha(params):
    if params.alpha <= 0:
        raise ParameterError(
            "alpha <= 0: the stochastic UL/LU factorization is not guaranteed"
        )


@dataclass(frozen=True)
class FactorPair:
    """Bidiagonal stochastic factors.

    For ``kind == "UL"`` the chain is ``P_U P_L`` with the upper factor
    holding ``(x_n, y_n)`` (``y_n`` on the diagonal) and the lower factor
    holding ``(s_n, t_n)`` (``s_n`` on the diagonal). For ``kind == "LU"``
    the chain is ``P_L P_U`` with the tilde entries.
    """

    kind: str
    params: ChainParams
    H: float
    H_prime: float
    upper_entries: BilateralSequence = field(repr=False)
    lower_entries: BilateralSequence = field(repr=False)

    def entries(self, n: int) -> Tuple[float, float, float, float]:
        x, y = self.upper_entries[n]
        s, t = self.lower_entries[n]
        return x, y, s, t

    def dense_upper(self, M: int) -> np.ndarray:
        """Upper factor on states ``-M..M``: diagonal ``y_n``, superdiagonal ``x_n``."""
        size = 2 * M + 1
        U = np.zeros((size, size))
        for i, n in enumerate(range(-M, M + 1)):
            x, y = self.upper_entries[n]
            U[i, i] = y
            if i + 1 < size:
                U[i, i + 1] = x
        return U

    def dense_lower(self, M: int) -> np.ndarray:
        """Lower factor on states ``-M..M``: diagonal ``s_n``, subdiagonal ``t_n``."""
        size = 2 * M + 1
        L = np.zeros((size, size))
        for i, n in enumerate(range(-M, M + 1)):
            s, t = self.lower_entries[n]
            L[i, i] = s
            if i > 0:
                L[i, i - 1] = t
        return L

    def product(self, M: int) -> np.ndarray:
        """The chain rebuilt from the factors in the factorization order."""
        if self.kind == "UL":
            return self.dense_upper(M) @ self.dense_lower(M)
        return self.dense_lower(M) @ self.dense_upper(M)

    def reconstruct(self, n: int) -> Tuple[float, float, float]:
        """``(p_n, r_n, q_n)`` from the factor entries."""
        x, y, s, t = self.entries(n)
        if self.kind == "UL":
            s1, t1 = self.lower_entries[n + 1]
            return x * s1, x * t1 + y * s, y * t
        xm, ym = self.upper_entries[n - 1]
        return s * x, t * xm + s * y, t * ym


def _continued_fractions(params):
    H = cf_H(params)
    Hp = cf_Hprime(params)
    if not (H.converged and Hp.converged):
        raise ConvergenceError("continued fractions H, H' did not converge")
    return H.value, Hp.value


def ul_factorize(params: ChainParams) -> FactorPair:
    """Unique stochastic UL factorization ``P = P_U P_L`` (requires alpha > 0)."""
    _require_positive_alpha(params)
    H, Hp = _continued_fractions(params)
    y0 = ul_entries(0, params)[1]
    if abs(y0 - H) > 1e-9:
        raise ConvergenceError(f"y_0 = {y0!r} disagrees with H = {H!r}")
    upper = BilateralSequence(lambda n: ul_entries(n, params)[:2], names=("x", "y"))
    lower = BilateralSequence(lambda n: ul_entries(n, params)[2:], names=("s", "t"))
    return FactorPair("UL", params, H, Hp, upper, lower)


def lu_entries(n: int, params: ChainParams) -> Tuple[float, float, float, float]:
    """``(x~_n, y~_n, s~_n, t~_n)`` of the LU factors."""
    x, y, _, _ = ul_entries(n, params)
    _, _, s1, t1 = ul_entries(n + 1, params)
    return s1, t1, x, y


def lu_factorize(params: ChainParams) -> FactorPair:
    """Unique stochastic LU factorization ``P = P~_L P~_U`` (requires alpha > 0)."""
    _require_positive_alpha(params)
    H, Hp = _continued_fractions(params)
    upper = BilateralSequence(lambda n: lu_entries(n, params)[:2], names=("x", "y"))
    lower = BilateralSequence(lambda n: lu_entries(n, params)[2:], names=("s", "t"))
    return FactorPair("LU", params, H, Hp, upper, lower)


def darboux_ul(params: ChainParams) -> BilateralSequence:
    """Chain ``P_L P_U`` obtained by reversing the UL factors."""
    _require_positive_alpha(params)

    def ev(n):
        x, y, s, t = ul_entries(n, params)
        xm, ym, _, _ = ul_entries(n - 1, params)
        return s * x, t * xm + s * y, t * ym

    return BilateralSequence(ev, names=("p", "r", "q"))


def darboux_lu(params: ChainParams) -> BilateralSequence:
    """Chain ``P~_U P~_L`` obtained by reversing the LU factors."""
    _require_positive_alpha(params)

    def ev(n):
        x, y, _, _ = ul_entries(n, params)
        x1, y1, s1, t1 = ul_entries(n + 1, params)
        return s1 * x1, s1 * y1 + t1 * x, t1 * y

    return BilateralSequence(ev, names=("p", "r", "q"))
