"""The two bilateral polynomial families, their 2x2 block form and the
second-order matrix differential operator they diagonalize.
"""
from __future__ import annotations

from typing import Dict, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from ._backend import kernels
from .chain import ChainParams, coeff_pqr
from .errors import ParameterError

MAX_INDEX = 60


def _pqr_arrays(params: ChainParams, n_lo: int, n_hi: int):
    rows = np.array([coeff_pqr(n, params) for n in range(n_lo, n_hi + 1)])
    return rows[:, 0], rows[:, 1], rows[:, 2]


def family_jets(params: ChainParams, x, n_max: int, order: int = 0) -> np.ndarray:
    """Values and derivatives of both families on ``-n_max-1..n_max``.

    Parameters
    ----------
    params : ChainParams
    x : array_like, shape (nx,)
    n_max : int
        Largest nonnegative index generated.
    order : int
        Number of derivatives to carry (0, 1 or 2).

    Returns
    -------
    ndarray, shape (order + 1, 2, 2 * n_max + 2, nx)
        Axis 1 is the family, axis 2 runs over ``n = -n_max-1, ..., n_max``.
    """
    if n_max < 0:
        raise ParameterError("n_max must be nonnegative")
    if n_max > MAX_INDEX:
        raise ParameterError(f"polynomial index limited to {MAX_INDEX} for conditioning")
    x = np.atleast_1d(np.asarray(x, dtype=np.float64)).ravel()
    nx = x.shape[0]
    out = np.zeros((order + 1, 2, 2 * n_max + 2, nx))
    off = n_max + 1  # position of index 0
    p, r, q = _pqr_arrays(params, -n_max, n_max - 1) if n_max > 0 else (None, None, None)
    for eta in (0, 1):
        seed0 = np.zeros((order + 1, nx))
        seedm1 = np.zeros((order + 1, nx))
        (seed0 if eta == 0 else seedm1)[0] = 1.0
        out[:, eta, off] = seed0
        out[:, eta, off - 1] = seedm1
        if n_max == 0:
            continue
        # forward: indices 0..n_max-1 generate 1..n_max
        fw = slice(n_max, 2 * n_max)
        out[:, eta, off + 1:] = kernels.recurrence_sweep(
            p[fw], r[fw], q[fw], x, seedm1, seed0, order
        )
        # backward: indices -1..-n_max generate -2..-n_max-1
        idx = np.arange(n_max - 1, -1, -1)
        back = kernels.recurrence_sweep(
            q[idx], r[idx], p[idx], x, seed0, seedm1, order
        )
        out[:, eta, : off - 1] = back[:, ::-1, :]
    return out


def eval_q(n: int, eta: int, x, params: ChainParams):
    """Value of ``Q_n^eta`` at ``x`` (scalar or array)."""
    if eta not in (1, 2):
        raise ParameterError("eta must be 1 or 2")
    xs = np.asarray(x, dtype=np.float64)
    n_max = max(n, -n - 1, 0)
    vals = family_jets(params, xs.ravel(), n_max)[0, eta - 1, n + n_max + 1]
    return float(vals[0]) if xs.ndim == 0 else vals.reshape(xs.shape)


def block_jets(params: ChainParams, x, n_max: int, order: int = 0) -> np.ndarray:
    """Block polynomials ``Q_0..Q_{n_max}`` and derivatives.

    Returns
    -------
    ndarray, shape (order + 1, n_max + 1, nx, 2, 2)
        ``[d, n, k]`` holds the ``d``-th derivative of the block at ``x[k]``:
        row 1 is ``(Q_n^1, Q_n^2)`` and row 2 is ``(Q_{-n-1}^1, Q_{-n-1}^2)``.
    """
    fam = family_jets(params, x, n_max, order)
    off = n_max + 1
    top = fam[:, :, off : off + n_max + 1, :]  # indices 0..n_max
    bottom = fam[:, :, off - 1 :: -1, :][:, :, : n_max + 1, :]  # -1..-n_max-1
    blocks = np.stack([top, bottom], axis=1)  # (d, row, eta, n, x)
    return np.transpose(blocks, (0, 3, 4, 1, 2))


def eval_block(n: int, x, params: ChainParams) -> np.ndarray:
    """The 2x2 block polynomial ``Q_n(x)`` for ``n >= 0``."""
    if n < 0:
        raise ParameterError("block index must be nonnegative")
    xs = np.asarray(x, dtype=np.float64)
    out = block_jets(params, xs.ravel(), n)[0, n]
    return out[0] if xs.ndim == 0 else out.reshape(xs.shape + (2, 2))


def block_coefficients(n: int, params: ChainParams) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Matrices ``(D_n, E_n, F_n)`` of ``x Q_n = D_n Q_{n+1} + E_n Q_n + F_n Q_{n-1}``."""
    if n < 0:
        raise ParameterError("block index must be nonnegative")
    p, r, q = coeff_pqr(n, params)
    pm, rm, qm = coeff_pqr(-n - 1, params)
    D = np.diag([p, qm])
    F = np.diag([q, pm])
    if n == 0:
        E = np.array([[r, q], [pm, rm]])
        F = np.zeros((2, 2))
    else:
        E = np.diag([r, rm])
    return D, E, F


class BilateralPoly:
    """Monomial coefficient tables of both families for ``|n| <= n_max + 1``.

    ``coeffs[eta][n]`` is a :class:`numpy.polynomial.Polynomial`.
    """

    def __init__(self, params: ChainParams, n_max: int):
        if not 0 <= n_max <= 15:
            raise ParameterError("monomial tables are limited to n_max <= 15")
        self.params = params
        self.n_max = n_max
        X = Polynomial([0.0, 1.0])
        self.coeffs: Dict[int, Dict[int, Polynomial]] = {}
        for eta in (1, 2):
            tab = {0: Polynomial([1.0 if eta == 1 else 0.0]), -1: Polynomial([0.0 if eta == 1 else 1.0])}
            for n in range(0, n_max):
                p, r, q = coeff_pqr(n, params)
                tab[n + 1] = ((X - r) * tab[n] - q * tab[n - 1]) / p
            for n in range(-1, -n_max - 1, -1):
                p, r, q = coeff_pqr(n, params)
                tab[n - 1] = ((X - r) * tab[n] - p * tab[n + 1]) / q
            self.coeffs[eta] = tab

    def poly(self, n: int, eta: int) -> Polynomial:
        return self.coeffs[eta][n]

    def degree(self, n: int, eta: int) -> int:
        c = self.coeffs[eta][n].coef
        nz = np.nonzero(c)[0]
        return int(nz[-1]) if nz.size else -1


def operator_matrices(params: ChainParams) -> Dict[str, np.ndarray]:
    """Coefficient matrices ``C, U, V`` of the second-order operator.

    The operator acts from the right as
    ``Q'' x(1-x) + Q' (C - x U) + Q V``.
    """
    a, b, t = params.alpha, params.beta, params.t
    d = a + b + 2.0 * t
    w = 2.0 * t * (b + t) / d
    C = np.array(
        [
            [a + 1.0 + w, 2.0 * t - w],
            [-2.0 * (b + t) + w, 1.0 - a - w],
        ]
    )
    U = np.diag([d + 2.0, 2.0 - d])
    V = np.diag([-d, 0.0])
    return {"C": C, "U": U, "V": V}


def eigenvalue_matrix(n: int, params: ChainParams) -> np.ndarray:
    """Diagonal eigenvalue ``Lambda_n`` acting from the left."""
    d = params.alpha + params.beta + 2.0 * params.t
    return np.diag([-(n + 1.0) * (n + d), -n * (n - d + 1.0)])


def diffop_residual(n: int, x, params: ChainParams) -> np.ndarray:
    """``Q_n B - Lambda_n Q_n`` at ``x``, with ``V`` as the zeroth-order term."""
    if n < 0:
        raise ParameterError("block index must be nonnegative")
    xs = np.asarray(x, dtype=np.float64)
    flat = xs.ravel()
    jets = block_jets(params, flat, n, order=2)[:, n]  # (3, nx, 2, 2)
    m = operator_matrices(params)
    Q, dQ, d2Q = jets
    xx = flat[:, None, None]
    res = (
        d2Q * (xx * (1.0 - xx))
        + dQ @ m["C"]
        - xx * (dQ @ m["U"])
        + Q @ m["V"]
        - eigenvalue_matrix(n, params) @ Q
    )
    return res[0] if xs.ndim == 0 else res.reshape(xs.shape + (2, 2))
