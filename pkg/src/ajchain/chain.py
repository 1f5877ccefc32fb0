"""Parameter regions and the closed-form coefficient sequences of the chain."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from .errors import ParameterError, PoleError
from .specfun import log_pochhammer, pochhammer

LOG_SPACE_THRESHOLD = 30
NO_ADMISSIBLE_T = "\u03b2 \u2265 0: no admissible t"


class Region(str, enum.Enum):
    """Open regions of the ``(alpha, beta)`` square that admit some ``t``."""

    A1 = "A1"
    A2 = "A2"
    B1 = "B1"
    B2 = "B2"
    C1 = "C1"
    C2 = "C2"
    D1 = "D1"
    D2 = "D2"
    NONE = "NONE"


# Each region: defining strict inequalities (as callables returning the
# quantity that must be positive) and the two interval families, written as
# offsets (lo, hi) added to the integer n.
_REGION_TESTS = {
    Region.A1: (lambda a, b: b - a + 1, lambda a, b: a + b, lambda a, b: -b),
    Region.A2: (lambda a, b: b - a + 1, lambda a, b: -b - a, lambda a, b: a),
    Region.B1: (lambda a, b: a - b - 1, lambda a, b: a + b, lambda a, b: 1 - a),
    Region.B2: (lambda a, b: a - b - 1, lambda a, b: -b - a, lambda a, b: b + 1),
    Region.C1: (lambda a, b: a + b + 1, lambda a, b: a - b, lambda a, b: -a),
    Region.C2: (lambda a, b: a + b + 1, lambda a, b: b - a, lambda a, b: -b),
    Region.D1: (lambda a, b: -a - b - 1, lambda a, b: a - b, lambda a, b: b + 1),
    Region.D2: (lambda a, b: -a - b - 1, lambda a, b: b - a, lambda a, b: a + 1),
}

_REGION_INTERVALS = {
    Region.A1: ((lambda a, b: 0.0, lambda a, b: -b), (lambda a, b: -a, lambda a, b: -a - b)),
    Region.A2: ((lambda a, b: -a, lambda a, b: 0.0), (lambda a, b: -a - b, lambda a, b: -b)),
    Region.B1: ((lambda a, b: 0.0, lambda a, b: 1 - a), (lambda a, b: -b, lambda a, b: 1 - a - b)),
    Region.B2: ((lambda a, b: -b - 1, lambda a, b: 0.0), (lambda a, b: -a - b, lambda a, b: 1 - a)),
    Region.C1: ((lambda a, b: 0.0, lambda a, b: -a), (lambda a, b: -b, lambda a, b: -a - b)),
    Region.C2: ((lambda a, b: 0.0, lambda a, b: -b), (lambda a, b: -a, lambda a, b: -a - b)),
    Region.D1: ((lambda a, b: -b - 1, lambda a, b: 0.0), (lambda a, b: -a - b, lambda a, b: 1 - a)),
    Region.D2: ((lambda a, b: -a - 1, lambda a, b: 0.0), (lambda a, b: -a - b, lambda a, b: 1 - b)),
}

_REGION_TEXT = {
    Region.A1: "beta-alpha+1>0, alpha>-beta, beta<0",
    Region.A2: "beta-alpha+1>0, alpha<-beta, alpha>0",
    Region.B1: "beta-alpha+1<0, alpha>-beta, alpha<1",
    Region.B2: "beta-alpha+1<0, alpha<-beta, beta>-1",
    Region.C1: "beta+alpha+1>0, alpha>beta, alpha<0",
    Region.C2: "beta+alpha+1>0, alpha<beta, beta<0",
    Region.D1: "beta+alpha+1<0, alpha>beta, beta>-1",
    Region.D2: "beta+alpha+1<0, alpha<beta, alpha>-1",
}


def region_conditions(region: Region) -> str:
    """Human-readable defining inequalities of a region."""
    return _REGION_TEXT.get(Region(region), "no admissible t")


def _check_square(alpha, beta):
    for name, v in (("alpha", alpha), ("beta", beta)):
        if not math.isfinite(v) or not -1.0 < v < 1.0:
            raise ParameterError(f"{name} = {v!r} lies outside the open interval (-1, 1)")


def classify_region(alpha: float, beta: float) -> Region:
    """Return the region containing ``(alpha, beta)``.

    Points with ``beta >= 0`` and points on region boundaries give
    ``Region.NONE``.

    Raises
    ------
    ParameterError
        Outside the open square ``(-1, 1)**2``.
    """
    _check_square(alpha, beta)
    if beta >= 0.0:
        return Region.NONE
    for region, tests in _REGION_TESTS.items():
        if all(f(alpha, beta) > 0.0 for f in tests):
            return region
    return Region.NONE


def admissible_t_intervals(
    region: Region, alpha: float, beta: float, n_lo: int, n_hi: int
) -> List[Tuple[float, float]]:
    """Open intervals of admissible ``t`` generated by ``n`` in ``[n_lo, n_hi]``.

    Returns
    -------
    list of (lo, hi)
        Sorted by left endpoint.
    """
    region = Region(region)
    if region is Region.NONE:
        if beta >= 0.0:
            raise ParameterError(NO_ADMISSIBLE_T)
        raise ParameterError("boundary point between regions: no admissible t")
    out = []
    for n in range(int(n_lo), int(n_hi) + 1):
        for lo, hi in _REGION_INTERVALS[region]:
            out.append((n + lo(alpha, beta), n + hi(alpha, beta)))
    out.sort()
    return out


def _nearby_intervals(alpha, beta, t):
    region = classify_region(alpha, beta)
    if region is Region.NONE:
        return region, []
    n0 = math.floor(t)
    return region, admissible_t_intervals(region, alpha, beta, n0 - 3, n0 + 3)


def is_admissible(alpha: float, beta: float, t: float) -> bool:
    """Strict membership of ``t`` in the admissible set for ``(alpha, beta)``."""
    region, intervals = _nearby_intervals(alpha, beta, t)
    return any(lo < t < hi for lo, hi in intervals)


def distance_to_endpoint(alpha: float, beta: float, t: float) -> float:
    """Distance from ``t`` to the nearest endpoint of an admissible interval.

    Small values flag parameter choices where coefficients are close to a
    zero or a pole.
    """
    region, intervals = _nearby_intervals(alpha, beta, t)
    if not intervals:
        return 0.0
    return min(min(abs(t - lo), abs(t - hi)) for lo, hi in intervals)


@dataclass(frozen=True)
class ChainParams:
    """The triple ``(alpha, beta, t)`` identifying a chain.

    Construction only checks that ``alpha`` and ``beta`` lie in the open
    square, so that shifted families such as ``alpha - 1`` remain
    representable. Use :meth:`admissible` for the full positivity check.
    """

    alpha: float
    beta: float
    t: float

    def __post_init__(self):
        for name in ("alpha", "beta", "t"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ParameterError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        _check_square(self.alpha, self.beta)

    @classmethod
    def admissible(cls, alpha: float, beta: float, t: float) -> "ChainParams":
        """Build parameters and require positive transition probabilities."""
        params = cls(alpha, beta, t)
        region = classify_region(params.alpha, params.beta)
        if region is Region.NONE:
            if params.beta >= 0:
                raise ParameterError(NO_ADMISSIBLE_T)
            raise ParameterError(
                f"(alpha, beta) = ({alpha:g}, {beta:g}) lies on a region boundary: no admissible t"
            )
        if not is_admissible(params.alpha, params.beta, params.t):
            raise ParameterError(
                f"t = {t:g} is not in the admissible set of region {region.value} "
                f"({region_conditions(region)})"
            )
        return params

    @property
    def region(self) -> Region:
        return classify_region(self.alpha, self.beta)

    @property
    def d(self) -> float:
        """``2t + alpha + beta``, the recurring denominator offset."""
        return 2.0 * self.t + self.alpha + self.beta

    def replace(self, **changes) -> "ChainParams":
        values = {"alpha": self.alpha, "beta": self.beta, "t": self.t}
        values.update(changes)
        return ChainParams(**values)


def _nonzero(value, what):
    if value == 0.0:
        raise PoleError(f"vanishing denominator {what}")
    return value


def coeff_pqr(n: int, params: ChainParams) -> Tuple[float, float, float]:
    """Up, stay and down probabilities ``(p_n, r_n, q_n)``."""
    a, b, t = params.alpha, params.beta, params.t
    m = n + t
    d = 2.0 * m + a + b
    d0 = _nonzero(d, f"2n+2t+alpha+beta at n={n}")
    d1 = _nonzero(d + 1.0, f"2n+2t+alpha+beta+1 at n={n}")
    d2 = _nonzero(d + 2.0, f"2n+2t+alpha+beta+2 at n={n}")
    p = (m + b + 1.0) * (m + a + b + 1.0) / (d1 * d2)
    r = (m + b + 1.0) * (m + 1.0) / (d1 * d2) + (m + a) * (m + a + b) / (d0 * d1)
    q = m * (m + a) / (d0 * d1)
    return p, r, q


def coeff_ab(n: int, params: ChainParams) -> Tuple[float, float]:
    """Jacobi-matrix coefficients ``(a_n, b_n)`` of the symmetric recurrence."""
    al, be, t = params.alpha, params.beta, params.t
    m = n + t
    d = 2.0 * m + al + be
    _nonzero(d - 1.0, f"2n+2t+alpha+beta-1 at n={n}")
    _nonzero(d, f"2n+2t+alpha+beta at n={n}")
    _nonzero(d + 1.0, f"2n+2t+alpha+beta+1 at n={n}")
    a = m * (m + al) * (m + be) * (m + al + be) / ((d - 1.0) * d * d * (d + 1.0))
    d2 = d - 2.0
    _nonzero(d2, f"2n+2t+alpha+beta-2 at n={n}")
    b = 0.5 + (al * al - be * be) / (2.0 * d2 * d)
    return a, b


def potential(n: int, params: ChainParams) -> float:
    """Potential coefficient ``pi_n`` from the Pochhammer closed form."""
    a, b, t = params.alpha, params.beta, params.t
    lin = (2.0 * n + 2.0 * t + a + b + 1.0) / _nonzero(2.0 * t + a + b + 1.0, "2t+alpha+beta+1")
    if abs(n) <= LOG_SPACE_THRESHOLD:
        num = pochhammer(a + b + t + 1.0, n) * pochhammer(-t, -n)
        den = pochhammer(a + t + 1.0, n) * pochhammer(-b - t, -n)
        if den == 0.0:
            raise PoleError(f"potential coefficient pi_{n} has a vanishing denominator")
        return num / den * lin
    logv = 0.0
    sign = 1 if lin > 0 else -1
    for z, k, s in (
        (a + b + t + 1.0, n, 1),
        (-t, -n, 1),
        (a + t + 1.0, n, -1),
        (-b - t, -n, -1),
    ):
        v, sg = log_pochhammer(z, k)
        if sg == 0:
            if s < 0:
                raise PoleError(f"potential coefficient pi_{n} has a vanishing denominator")
            return 0.0
        logv += s * v
        sign *= sg
    return sign * math.exp(logv + math.log(abs(lin)))


def potential_product(n: int, params: ChainParams) -> float:
    """``pi_n`` as the product of ratios ``p_k / q_{k+1}`` (reference form)."""
    out = 1.0
    if n >= 0:
        for k in range(n):
            out *= coeff_pqr(k, params)[0] / coeff_pqr(k + 1, params)[2]
    else:
        for k in range(n + 1, 1):
            out *= coeff_pqr(k, params)[2] / coeff_pqr(k - 1, params)[0]
    return out


class BilateralSequence:
    """Deterministic map from ``n`` in Z to a tuple of floats.

    Parameters
    ----------
    evaluator : callable
        ``evaluator(n)`` returns a tuple.
    window : int, optional
        When given, indices ``-window..window`` are evaluated once at
        construction and served from the cache.
    names : tuple of str, optional
        Labels for the tuple entries.
    """

    def __init__(
        self,
        evaluator: Callable[[int], Tuple[float, ...]],
        window: Optional[int] = None,
        names: Tuple[str, ...] = (),
    ):
        self._evaluator = evaluator
        self.names = tuple(names)
        self._cache: Dict[int, Tuple[float, ...]] = {}
        if window is not None:
            for n in range(-int(window), int(window) + 1):
                self._cache[n] = tuple(evaluator(n))

    def __getitem__(self, n: int) -> Tuple[float, ...]:
        n = int(n)
        hit = self._cache.get(n)
        if hit is not None:
            return hit
        return tuple(self._evaluator(n))

    def evaluate(self, n: int) -> Tuple[float, ...]:
        """Fresh evaluation bypassing the cache."""
        return tuple(self._evaluator(int(n)))

    def array(self, n_lo: int, n_hi: int) -> np.ndarray:
        """Stack entries for ``n_lo..n_hi`` into an array of shape (count, width)."""
        return np.array([self[n] for n in range(int(n_lo), int(n_hi) + 1)], dtype=np.float64)


def pqr_sequence(params: ChainParams, window: Optional[int] = None) -> BilateralSequence:
    return BilateralSequence(lambda n: coeff_pqr(n, params), window, ("p", "r", "q"))


def ab_sequence(params: ChainParams, window: Optional[int] = None) -> BilateralSequence:
    return BilateralSequence(lambda n: coeff_ab(n, params), window, ("a", "b"))


def potential_sequence(params: ChainParams, window: Optional[int] = None) -> BilateralSequence:
    return BilateralSequence(lambda n: (potential(n, params),), window, ("pi",))


def tridiagonal_dense(seq: BilateralSequence, M: int) -> np.ndarray:
    """Dense finite section on states ``-M..M`` of a ``(p, r, q)`` sequence.

    Rows are truncated, not renormalized.
    """
    if M < 1:
        raise ParameterError("window half-width M must be at least 1")
    size = 2 * M + 1
    P = np.zeros((size, size))
    for i, n in enumerate(range(-M, M + 1)):
        p, r, q = seq[n]
        P[i, i] = r
        if i + 1 < size:
            P[i, i + 1] = p
        if i > 0:
            P[i, i - 1] = q
    return P


def window(params: ChainParams, M: int) -> np.ndarray:
    """Finite section of the transition matrix on states ``-M..M``."""
    return tridiagonal_dense(pqr_sequence(params), M)


def falsification_sweep(
    alpha: float,
    beta: float,
    t_values: Optional[np.ndarray] = None,
    n_lo: int = -10,
    n_hi: int = 10,
) -> Dict[float, Optional[int]]:
    """Search for a nonpositive (or undefined) coefficient for each ``t``.

    Returns a map from ``t`` to the first offending index, or ``None`` when
    every ``p_n, r_n, q_n`` with ``n_lo <= n <= n_hi`` is positive.
    """
    if t_values is None:
        t_values = np.linspace(-5.0, 5.0, 1000)
    params = ChainParams(alpha, beta, 0.0)
    out: Dict[float, Optional[int]] = {}
    for t in np.asarray(t_values, dtype=float):
        trial = params.replace(t=float(t))
        hit = None
        for n in range(n_lo, n_hi + 1):
            try:
                if min(coeff_pqr(n, trial)) <= 0.0:
                    hit = n
                    break
            except PoleError:
                hit = n
                break
        out[float(t)] = hit
    return out
