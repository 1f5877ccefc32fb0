"""Explicit 2x2 spectral densities of the chain and their Geronimus transforms.

Every density handled here is a short sum of rank-one terms

    kappa * x**e * (1 - x)**beta * v(x) v(x)^T

where the vector ``v`` is built from Gauss hypergeometric functions. Near
``x = 1`` each hypergeometric function splits as ``P + (1 - x)**(-beta) R``
with ``P, R`` analytic, which gives the endpoint exponents ``beta, 0,
-beta``. Quadrature rules use this structure directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .chain import ChainParams, coeff_ab, potential
from .errors import ParameterError, PoleError
from .factorization import ul_entries
from .specfun import _sinpi, gamma_ratio, hyp2f1, hyp2f1_deflated, hyp2f1_parts, pochhammer

SINE_TOL = 1e-12
CANCEL_TOL = 1e-8


@dataclass(frozen=True)
class SpectralConstants:
    mu: float
    nu: float
    K_spec: float
    L_spec: float
    gamma: float


def _sine(value, label):
    s = _sinpi(value)
    return s, abs(s) < SINE_TOL


def constants(params: ChainParams) -> SpectralConstants:
    """The five scalar constants entering the density ``W``.

    Raises
    ------
    PoleError
        Naming the vanishing factor.
    """
    a, b, t = params.alpha, params.beta, params.t
    sines = {}
    for label, v in (
        ("sin(pi t)", t),
        ("sin(pi(beta+t))", b + t),
        ("sin(pi(alpha+beta+t))", a + b + t),
        ("sin(pi(alpha+t))", a + t),
        ("sin(pi alpha)", a),
    ):
        s, bad = _sine(v, label)
        if bad and label != "sin(pi t)":
            raise PoleError(f"{label} = 0 in the spectral constants")
        sines[label] = s
    mu = sines["sin(pi t)"] * sines["sin(pi(beta+t))"] / (
        sines["sin(pi(alpha+beta+t))"] * sines["sin(pi(alpha+t))"]
    )
    if t == 0.0 or b + t == 0.0:
        raise PoleError("t(beta+t) = 0 in nu")
    nu = (a + t) * (a + b + t) / (t * (b + t))
    for label, z in (("Gamma(alpha)", a), ("Gamma(t+1)", t + 1.0), ("Gamma(-alpha-beta-t)", -a - b - t)):
        if z <= 0 and z == math.floor(z):
            raise PoleError(f"{label} has a pole")
    K = -gamma_ratio([a, a + 1.0, t + 1.0, -a - b - t], [a + t + 1.0, -b - t]) * (
        sines["sin(pi alpha)"] * sines["sin(pi(alpha+beta+t))"]
        / (math.pi * sines["sin(pi(beta+t))"])
    )
    if K == 0.0:
        raise PoleError("K_spec vanishes (Gamma(alpha+t+1) or Gamma(-beta-t) at a pole)")
    a0 = coeff_ab(0, params)[0]
    if a0 <= 0.0:
        raise ParameterError("a_0 must be positive")
    sa0 = math.sqrt(a0)
    d = a + b + 2.0 * t
    if mu == 1.0:
        raise PoleError("mu = 1 in L_spec")
    L = t * (b + t) * sines["sin(pi alpha)"] / (math.pi * sa0 * d * a * (mu - 1.0) * K)
    gam = (a + t) * (a + b + t) / (sa0 * (d - 1.0) * d)
    return SpectralConstants(mu, nu, K, L, gam)


def _hyp_specs(params: ChainParams):
    a, b, t = params.alpha, params.beta, params.t
    return {
        1: (a + b + t + 1.0, -t, a + 1.0),
        2: (b + t + 1.0, -a - t, 1.0 - a),
        3: (a + b + t, 1.0 - t, a + 1.0),
        4: (b + t, 1.0 - t - a, 1.0 - a),
    }


class _HypVector:
    """``v(x) = (c_1 F_1(x), c_2 F_2(x))`` for two Gauss functions."""

    def __init__(self, coefs, specs):
        self.coefs = np.asarray(coefs, dtype=np.float64)
        self.specs = specs

    def values(self, x):
        return np.stack([c * hyp2f1(*s, x) for c, s in zip(self.coefs, self.specs)], axis=-1)

    def split(self, x):
        parts = [hyp2f1_parts(*s, x) for s in self.specs]
        P = np.stack([c * p[0] for c, p in zip(self.coefs, parts)], axis=-1)
        R = np.stack([c * p[1] for c, p in zip(self.coefs, parts)], axis=-1)
        return P, R

    def at_zero(self):
        return self.coefs.copy()

    def deflated(self, v, x):
        """``(v . vec(x) - v . vec(0)) / x``."""
        return sum(vj * c * hyp2f1_deflated(*s, x) for vj, c, s in zip(v, self.coefs, self.specs))

    def deflated_split(self, v, x):
        P, R = self.split(x)
        r0 = float(np.dot(v, self.coefs))
        return (P @ v - r0) / x, (R @ v) / x


class _ProjectedVector:
    """``M(x) vec(x)`` with ``M(x) = c v^T + x M1``."""

    def __init__(self, base, c, v, M1):
        self.base, self.c, self.v, self.M1 = base, np.asarray(c), np.asarray(v), np.asarray(M1)

    def _apply(self, vals, x):
        return np.outer(vals @ self.v, self.c) + x[:, None] * (vals @ self.M1.T)

    def values(self, x):
        return self._apply(self.base.values(x), x)

    def split(self, x):
        P, R = self.base.split(x)
        return self._apply(P, x), self._apply(R, x)


class _DeflatedVector:
    """``(M(x) vec(x)) / x`` when ``v . vec(0) = 0``: ``c D(x) + M1 vec(x)``."""

    def __init__(self, base, c, v, M1):
        self.base, self.c, self.v, self.M1 = base, np.asarray(c), np.asarray(v), np.asarray(M1)

    def values(self, x):
        D = self.base.deflated(self.v, x)
        return np.outer(D, self.c) + self.base.values(x) @ self.M1.T

    def split(self, x):
        DP, DR = self.base.deflated_split(self.v, x)
        P, R = self.base.split(x)
        return np.outer(DP, self.c) + P @ self.M1.T, np.outer(DR, self.c) + R @ self.M1.T


@dataclass
class _Term:
    kappa: float
    power: float
    vector: object


class SpectralDensity:
    """Symmetric 2x2 matrix density on (0, 1) given as rank-one terms.

    Attributes
    ----------
    params : ChainParams
    label : str
    singularity_exponents : tuple of float
        Worst power of ``x`` at 0 and of ``1 - x`` at 1.
    """

    def __init__(self, params: ChainParams, terms: Sequence[_Term], label: str):
        self.params = params
        self.terms = list(terms)
        self.label = label
        self.beta = params.beta
        self.singularity_exponents = (min(tm.power for tm in self.terms), self.beta)

    @property
    def left_exponents(self) -> Tuple[float, ...]:
        return tuple(sorted({tm.power for tm in self.terms}))

    @property
    def right_exponents(self) -> Tuple[float, float, float]:
        return (self.beta, 0.0, -self.beta)

    def __call__(self, x):
        xs = np.asarray(x, dtype=np.float64)
        flat = xs.ravel()
        if np.any((flat <= 0.0) | (flat >= 1.0)):
            raise ParameterError("densities are evaluated on the open interval (0, 1)")
        out = np.zeros(flat.shape + (2, 2))
        for tm in self.terms:
            v = tm.vector.values(flat)
            w = tm.kappa * flat ** tm.power * (1.0 - flat) ** self.beta
            out += w[:, None, None] * (v[:, :, None] * v[:, None, :])
        out = out.reshape(xs.shape + (2, 2))
        return out

    def left_parts(self, x) -> Dict[float, np.ndarray]:
        """Smooth factors multiplying ``x**e`` on ``(0, 1/2]``, keyed by ``e``."""
        flat = np.asarray(x, dtype=np.float64).ravel()
        out: Dict[float, np.ndarray] = {}
        for tm in self.terms:
            v = tm.vector.values(flat)
            w = tm.kappa * (1.0 - flat) ** self.beta
            block = w[:, None, None] * (v[:, :, None] * v[:, None, :])
            out[tm.power] = out.get(tm.power, 0.0) + block
        return out

    def right_parts(self, x) -> Dict[float, np.ndarray]:
        """Smooth factors multiplying ``(1 - x)**f`` on ``[1/2, 1)``, keyed by ``f``."""
        flat = np.asarray(x, dtype=np.float64).ravel()
        b = self.beta
        acc = [np.zeros(flat.shape + (2, 2)) for _ in range(3)]
        for tm in self.terms:
            P, R = tm.vector.split(flat)
            w = (tm.kappa * flat ** tm.power)[:, None, None]
            PP = P[:, :, None] * P[:, None, :]
            PR = P[:, :, None] * R[:, None, :]
            RR = R[:, :, None] * R[:, None, :]
            acc[0] += w * PP
            acc[1] += w * (PR + np.swapaxes(PR, 1, 2))
            acc[2] += w * RR
        return {b: acc[0], 0.0: acc[1], -b: acc[2]}

    def bracket(self, x):
        """``x**-alpha (1-x)**-beta`` times the density, the factor that stays
        bounded at ``x = 1``."""
        xs = np.asarray(x, dtype=np.float64)
        return self(xs) / (xs ** self.params.alpha * (1.0 - xs) ** self.beta)[..., None, None]


def _psi_terms(params: ChainParams, conj: bool = True) -> Tuple[List[_Term], Dict[str, float]]:
    c = constants(params)
    specs = _hyp_specs(params)
    scale = 1.0
    if conj:
        pim1 = potential(-1, params)
        if pim1 <= 0.0:
            raise ParameterError("pi_{-1} must be positive")
        scale = 1.0 / math.sqrt(pim1)
    u = _HypVector([1.0, -scale / c.gamma], [specs[1], specs[3]])
    w = _HypVector([c.gamma, -c.nu * scale], [specs[2], specs[4]])
    a = params.alpha
    terms = [
        _Term(c.L_spec * c.gamma, a, u),
        _Term(-c.L_spec * c.mu * c.K_spec ** 2 / c.gamma, -a, w),
    ]
    return terms, {"scale": scale}


def spectral_W(params: ChainParams) -> SpectralDensity:
    """Density ``W`` orthonormalizing the symmetric recurrence."""
    terms, _ = _psi_terms(params, conj=False)
    return SpectralDensity(params, terms, "W")


def spectral_psi(params: ChainParams) -> SpectralDensity:
    """Density ``Psi = D^-1 W D^-1`` with ``D = diag(1, sqrt(pi_{-1}))``."""
    terms, _ = _psi_terms(params, conj=True)
    return SpectralDensity(params, terms, "psi")


def density_W(x, params: ChainParams):
    return spectral_W(params)(x)


def density_psi(x, params: ChainParams):
    return spectral_psi(params)(x)


def _require_positive_alpha(params):
    if params.alpha <= 0:
        raise ParameterError("alpha <= 0: the Geronimus transform needs alpha > 0")


def geronimus_data(params: ChainParams, which: str):
    """``(c, v, M1, scale)`` with ``M(x) = c v^T + x M1`` for the UL or LU case.

    ``M`` is ``S_0`` for UL and ``T_0`` for LU; ``scale`` is ``y_0/s_0`` or
    ``x_0/t_1``.
    """
    _require_positive_alpha(params)
    x0, y0, s0, t0 = ul_entries(0, params)
    v = np.array([s0, t0])
    if which == "UL":
        xm1, ym1, _, _ = ul_entries(-1, params)
        c = np.array([1.0, -xm1 / ym1])
        M1 = np.array([[0.0, 0.0], [0.0, 1.0 / ym1]])
        scale = y0 / s0
    elif which == "LU":
        t1 = ul_entries(1, params)[3]
        c = np.array([-y0 / x0, 1.0])
        M1 = np.array([[1.0 / x0, 0.0], [0.0, 0.0]])
        scale = x0 / t1
    else:
        raise ParameterError("which must be 'UL' or 'LU'")
    return c, v, M1, scale


def matrix_S0(x, params: ChainParams) -> np.ndarray:
    c, v, M1, _ = geronimus_data(params, "UL")
    return np.outer(c, v) + x * M1


def matrix_T0(x, params: ChainParams) -> np.ndarray:
    c, v, M1, _ = geronimus_data(params, "LU")
    return np.outer(c, v) + x * M1


def _check_cancellation(w: _HypVector, v):
    r0 = float(np.dot(v, w.at_zero()))
    size = float(np.sum(np.abs(v * w.at_zero())))
    if abs(r0) > CANCEL_TOL * size:
        raise ParameterError(
            "the projected x^-1 moment is not integrable: v . w(0) = "
            f"{r0:.3e} does not vanish"
        )


def _transformed(params, c, v, M1, scale, label) -> SpectralDensity:
    (tA, tB), _ = _psi_terms(params)
    _check_cancellation(tB.vector, v)
    terms = [
        _Term(scale * tA.kappa, tA.power - 1.0, _ProjectedVector(tA.vector, c, v, M1)),
        _Term(scale * tB.kappa, tB.power + 1.0, _DeflatedVector(tB.vector, c, v, M1)),
    ]
    return SpectralDensity(params, terms, label)


def spectral_geronimus(params: ChainParams, which: str) -> SpectralDensity:
    """``scale * M(x) Psi(x) M(x)^T / x`` with ``M = S_0`` (UL) or ``T_0`` (LU)."""
    c, v, M1, scale = geronimus_data(params, which)
    return _transformed(params, c, v, M1, scale, "tilde" if which == "UL" else "hat")


def geronimus_ul(x, params: ChainParams):
    return spectral_geronimus(params, "UL")(x)


def geronimus_lu(x, params: ChainParams):
    return spectral_geronimus(params, "LU")(x)


def projected_inverse_moment_density(params: ChainParams) -> SpectralDensity:
    """Density whose (1,1) entry is ``v^T Psi(x) v / x`` with ``v = (s_0, t_0)``."""
    _, v, _, _ = geronimus_data(params, "UL")
    return _transformed(params, np.array([1.0, 0.0]), v, np.zeros((2, 2)), 1.0, "projected")


def potential_tilde(n: int, params: ChainParams) -> float:
    """Potential coefficients of the chain with ``alpha`` replaced by ``alpha - 1``."""
    return potential(n, params.replace(alpha=params.alpha - 1.0))


def potential_hat(n: int, params: ChainParams) -> float:
    """Potential coefficients of the reversed LU chain (shifted Pochhammer form)."""
    a, b, t = params.alpha, params.beta, params.t
    num = pochhammer(a + b + t + 1.0, n) * pochhammer(-t - 1.0, -n) * (2.0 * n + 2.0 * t + a + b + 2.0)
    den = pochhammer(a + t + 1.0, n) * pochhammer(-b - t - 1.0, -n) * (2.0 * t + a + b + 2.0)
    if den == 0.0:
        raise PoleError(f"hatted potential pi_{n} has a vanishing denominator")
    return num / den


def delta_mass_gap(params: ChainParams, which: str, nodes: int = 200) -> np.ndarray:
    """Coefficient of the would-be point mass at 0 after the Geronimus step.

    Computes ``scale * M(0) M_{-1} M(0)^T - N`` where ``M_{-1}`` is the
    (projected) ``x^-1`` moment of ``Psi`` and ``N`` is the normalizing
    matrix of the transform (``S_0(0) diag(1/s_0, 1/t_0) S_0(0)^T`` for UL,
    ``(x_0/(y_0 t_1)) T_0(0) diag(1, s_0/t_0) T_0(0)^T`` for LU). The
    result should vanish.
    """
    from .quadrature import integrate_matrix_density

    c, v, M1, scale = geronimus_data(params, which)
    moment = integrate_matrix_density(projected_inverse_moment_density(params), nodes)[0, 0]
    M0 = np.outer(c, v)
    projected = scale * moment * np.outer(c, c)
    x0, y0, s0, t0 = ul_entries(0, params)
    if which == "UL":
        N = M0 @ np.diag([1.0 / s0, 1.0 / t0]) @ M0.T
    else:
        t1 = ul_entries(1, params)[3]
        N = (x0 / (y0 * t1)) * (M0 @ np.diag([1.0, s0 / t0]) @ M0.T)
    return projected - N
