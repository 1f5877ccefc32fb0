"""Truncated power series in ``h = 1/n`` for large-index tails.

Two uses: the fixed point of a continued-fraction tail, and the asymptotic
expansion of a hypergeometric term sequence (a sequence whose consecutive
ratio is a rational function of the index).
"""
from __future__ import annotations

from typing import Sequence, Tuple

import numpy as np
from scipy.special import zeta

from .errors import ConvergenceError

Factor = Tuple[float, float]  # (lead, const) meaning lead * n + const


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b)[: len(a)]


def inv(a: np.ndarray) -> np.ndarray:
    m = len(a)
    r = np.zeros(m)
    r[0] = 1.0 / a[0]
    for k in range(1, m):
        r[k] = -np.dot(a[1 : k + 1], r[k - 1 :: -1][:k]) / a[0]
    return r


def rational(num: Sequence[Factor], den: Sequence[Factor], order: int) -> np.ndarray:
    """Series of ``prod(num) / prod(den)`` with equally many linear factors."""
    r = np.zeros(order)
    r[0] = 1.0
    for lead, const in num:
        f = np.zeros(order)
        f[0], f[1] = lead, const
        r = mul(r, f)
    for lead, const in den:
        f = np.zeros(order)
        f[0], f[1] = lead, const
        r = mul(r, inv(f))
    return r


def _shift_powers(order: int):
    # powers[i] = series of h^i (1+h)^(-i), i.e. (1/(n+1))^i in terms of h = 1/n
    base = inv(np.r_[1.0, 1.0, np.zeros(order - 2)])
    powers = []
    acc = np.zeros(order)
    acc[0] = 1.0
    for i in range(order):
        hp = np.zeros(order)
        hp[i:] = acc[: order - i]
        powers.append(hp)
        acc = mul(acc, base)
    return powers


def shift_one(c: np.ndarray, powers=None) -> np.ndarray:
    """Re-expand ``f(n + 1)`` in powers of ``1/n`` given the series of ``f(n)``."""
    if powers is None:
        powers = _shift_powers(len(c))
    out = np.zeros(len(c))
    for i, ci in enumerate(c):
        if ci != 0.0:
            out += ci * powers[i]
    return out


def evaluate(c: np.ndarray, n: float) -> float:
    h = 1.0 / n
    return float(np.polyval(c[::-1], h))


def riccati_tail(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Formal solution of ``z_j = A_j / (1 - B_j / (1 - z_{j+1}))``.

    Both numerator sequences tend to 1/4, so the leading coefficient is the
    double root 1/2. The first-order coefficient solves a quadratic; the
    smaller root is the branch that matches the convergent continued
    fraction when the limit sequence is summable. Higher coefficients follow
    from linear equations.

    Parameters
    ----------
    A, B : ndarray
        Series of the two alternating partial numerators in ``1/j``.

    Returns
    -------
    ndarray
        Series coefficients of ``z_j``; the last entry is left at zero.
    """
    order = len(A)
    powers = _shift_powers(order)
    one = np.zeros(order)
    one[0] = 1.0

    def residual(c):
        z1 = shift_one(c, powers)
        return mul(c, one - z1 - B) - mul(A, one - z1)

    c = np.zeros(order)
    c[0] = 0.5
    r = residual(c)
    if abs(r[0]) > 1e-12 or abs(r[1]) > 1e-12:
        raise ConvergenceError("continued-fraction tail is not of the expected critical type")
    vals = []
    for v in (0.0, 1.0, 2.0):
        c[1] = v
        vals.append(residual(c)[2])
    qa = (vals[2] - 2.0 * vals[1] + vals[0]) / 2.0
    qb = vals[1] - vals[0] - qa
    qc = vals[0]
    disc = qb * qb - 4.0 * qa * qc
    if qa == 0.0 or disc < 0.0:
        raise ConvergenceError("continued-fraction tail has no real expansion")
    root = np.sqrt(disc)
    c[1] = min((-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa))
    for i in range(2, order - 1):
        c[i] = 0.0
        r0 = residual(c)[i + 1]
        c[i] = 1.0
        r1 = residual(c)[i + 1]
        c[i] = -r0 / (r1 - r0)
    c[order - 1] = 0.0
    return c


def hyperterm_expansion(a: Sequence[float], b: Sequence[float], order: int):
    """Asymptotic shape of a sequence with ``T(N+1)/T(N) = prod(N+a)/prod(N+b)``.

    Returns ``(sigma, e)`` with ``T(N) ~ C N**sigma * sum(e[k] N**-k)``
    and ``e[0] = 1``.
    """
    sigma = float(sum(a) - sum(b))
    R = rational([(1.0, ai) for ai in a], [(1.0, bi) for bi in b], order)
    growth = np.ones(order)  # binomial series of (1 + h)**sigma
    for k in range(1, order):
        growth[k] = growth[k - 1] * (sigma - k + 1) / k
    powers = _shift_powers(order)

    def residual(e):
        return mul(growth, shift_one(e, powers)) - mul(R, e)

    e = np.zeros(order)
    e[0] = 1.0
    for k in range(1, order - 1):
        e[k] = 0.0
        r0 = residual(e)[k + 1]
        e[k] = 1.0
        r1 = residual(e)[k + 1]
        e[k] = -r0 / (r1 - r0)
    e[order - 1] = 0.0
    return sigma, e


def hyperterm_tail(value_at_n0: float, n0: int, sigma: float, e: np.ndarray) -> float:
    """Approximate ``sum_{N >= n0} T(N)`` from ``T(n0)`` and the expansion."""
    if sigma >= -1.0:
        raise ConvergenceError("term sequence decays too slowly to be summable")
    scale = value_at_n0 / (n0 ** sigma * evaluate(e, n0))
    total = 0.0
    for k, ek in enumerate(e):
        if ek != 0.0:
            total += ek * zeta(k - sigma, n0)
    return scale * total
