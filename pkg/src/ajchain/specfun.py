"""Real-argument special functions: log-gamma with sign, Pochhammer symbols
and the Gauss hypergeometric function on [0, 1).
"""
import math

import numpy as np

from ._backend import kernels
from .errors import ConvergenceError, ParameterError, PoleError

NEAR_INTEGER_TOL = 1e-8


def _sinpi(x):
    # sin(pi x) with argument reduction so that zeros are exact at integers
    k = round(x)
    r = x - k
    s = math.sin(math.pi * r)
    return -s if k % 2 else s


def _is_nonpositive_integer(x):
    return x <= 0 and x == math.floor(x)


def ln_gamma(x):
    """Logarithm of ``|Gamma(x)|`` together with the sign of ``Gamma(x)``.

    Arguments below 1/2 go through the reflection formula.

    Parameters
    ----------
    x : float

    Returns
    -------
    value : float
    sign : int
        +1 or -1.

    Raises
    ------
    PoleError
        If ``x`` is zero or a negative integer.
    """
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at x = {x:g}")
    if x >= 0.5:
        return math.lgamma(x), 1
    s = _sinpi(x)
    value = math.log(math.pi) - math.log(abs(s)) - math.lgamma(1.0 - x)
    return value, (1 if s > 0 else -1)


def gamma_ratio(num, den):
    """Evaluate ``prod Gamma(num) / prod Gamma(den)`` through log-gamma.

    A pole in the denominator makes the ratio exactly zero; a pole in the
    numerator is an error.
    """
    logv = 0.0
    sign = 1
    for z in num:
        v, s = ln_gamma(z)
        logv += v
        sign *= s
    for z in den:
        if _is_nonpositive_integer(float(z)):
            return 0.0
        v, s = ln_gamma(z)
        logv -= v
        sign *= s
    return sign * math.exp(logv)


def pochhammer(a, n):
    """Rising factorial ``(a)_n`` for any integer ``n``.

    Negative indices follow ``(a)_{-n} = 1 / (a - n)_n``.

    Raises
    ------
    PoleError
        When a negative index meets a vanishing factor ``a - k``.
    """
    n = int(n)
    a = float(a)
    if n >= 0:
        out = 1.0
        for k in range(n):
            out *= a + k
        return out
    den = 1.0
    for k in range(1, -n + 1):
        f = a - k
        if f == 0.0:
            raise PoleError(f"(a)_{n} has a zero factor a-{k} at a = {a:g}")
        den *= f
    return 1.0 / den


def log_pochhammer(a, n):
    """``(log|(a)_n|, sign)`` accumulated factor by factor."""
    n = int(n)
    a = float(a)
    logv = 0.0
    sign = 1
    if n >= 0:
        factors = (a + k for k in range(n))
        direction = 1
    else:
        factors = (a - k for k in range(1, -n + 1))
        direction = -1
    for f in factors:
        if f == 0.0:
            if direction < 0:
                raise PoleError(f"(a)_{n} has a zero factor at a = {a:g}")
            return -math.inf, 0
        logv += math.log(abs(f))
        if f < 0:
            sign = -sign
    return direction * logv, sign


def _series(a, b, c, x, skip_constant=False):
    values, used = kernels.hyp2f1_series(a, b, c, x, skip_constant)
    if used < 0:
        raise ConvergenceError(
            f"2F1({a:g},{b:g};{c:g};x) series did not converge within the term cap"
        )
    return np.asarray(values)


def _as_array(x):
    arr = np.asarray(x, dtype=np.float64)
    return arr, arr.ndim == 0


def _check_c(c):
    if _is_nonpositive_integer(float(c)):
        raise PoleError(f"2F1 undefined for c = {c:g}")


def hyp2f1_parts(a, b, c, x):
    """Split ``2F1(a, b; c; x)`` around ``x = 1``.

    Returns ``(P, R)`` with ``F = P + (1 - x)**(c - a - b) * R``, where both
    parts are analytic at ``x = 1``. Valid for ``x`` in ``[1/2, 1]``.

    Raises
    ------
    ParameterError
        If ``c - a - b`` is within 1e-8 of an integer, where the two parts
        merge into logarithmic terms.
    """
    _check_c(c)
    xs, scalar = _as_array(x)
    flat = xs.ravel()
    if np.any((flat < 0.5) | (flat > 1.0)):
        raise ParameterError("connection parts are evaluated on [1/2, 1] only")
    s = c - a - b
    if abs(s - round(s)) < NEAR_INTEGER_TOL:
        raise ParameterError(
            f"c-a-b = {s:.12g} is too close to an integer for the x -> 1-x connection"
        )
    u = 1.0 - flat
    A1 = gamma_ratio([c, s], [c - a, c - b])
    A2 = gamma_ratio([c, -s], [a, b])
    P = A1 * _series(a, b, 1.0 - s, u) if A1 != 0.0 else np.zeros_like(u)
    R = A2 * _series(c - a, c - b, 1.0 + s, u) if A2 != 0.0 else np.zeros_like(u)
    P = P.reshape(xs.shape)
    R = R.reshape(xs.shape)
    if scalar:
        return float(P), float(R)
    return P, R


def hyp2f1(a, b, c, x):
    """Gauss hypergeometric function ``2F1(a, b; c; x)`` for real ``x`` in [0, 1).

    Uses the power series up to ``x = 1/2`` and the connection formula in
    powers of ``1 - x`` beyond.

    Parameters
    ----------
    a, b, c : float
    x : float or array_like

    Returns
    -------
    float or ndarray
    """
    _check_c(c)
    xs, scalar = _as_array(x)
    flat = xs.ravel()
    if np.any((flat < 0.0) | (flat >= 1.0)) or not np.all(np.isfinite(flat)):
        raise ParameterError("hyp2f1 argument must lie in [0, 1)")
    out = np.empty_like(flat)
    lo = flat <= 0.5
    if lo.any():
        out[lo] = _series(a, b, c, flat[lo])
    hi = ~lo
    if hi.any():
        P, R = hyp2f1_parts(a, b, c, flat[hi])
        out[hi] = P + (1.0 - flat[hi]) ** (c - a - b) * R
    out = out.reshape(xs.shape)
    return float(out) if scalar else out


def hyp2f1_deflated(a, b, c, x):
    """``(2F1(a, b; c; x) - 1) / x`` without cancellation for small ``x``."""
    _check_c(c)
    xs, scalar = _as_array(x)
    flat = xs.ravel()
    out = np.empty_like(flat)
    lo = flat <= 0.5
    if lo.any():
        out[lo] = _series(a, b, c, flat[lo], skip_constant=True)
    hi = ~lo
    if hi.any():
        out[hi] = (hyp2f1(a, b, c, flat[hi]) - 1.0) / flat[hi]
    out = out.reshape(xs.shape)
    return float(out) if scalar else out
