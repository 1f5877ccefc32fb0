"""Numpy implementations of the inner loops.

Every function here has a twin with the same signature in the compiled
``_ckernels`` module; both must return identical results up to rounding
(the urn simulator must agree exactly).
"""
import numpy as np

SERIES_TOL = 1e-16
SERIES_CAP = 10000


def hyp2f1_series(a, b, c, x, skip_constant=False):
    """Sum the Gauss series at each entry of ``x``.

    Parameters
    ----------
    a, b, c : float
        Series parameters; ``c`` must not be a nonpositive integer.
    x : ndarray of float64
        Arguments with ``|x| <= 1/2`` in practice.
    skip_constant : bool
        When true, return ``(F - 1) / x`` computed without cancellation.

    Returns
    -------
    values : ndarray
    nterms : int
        Largest number of terms used, or -1 when the cap was reached.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    if skip_constant:
        term = np.full_like(x, a * b / c)
        k0 = 1
    else:
        term = np.ones_like(x)
        k0 = 0
    total = term.copy()
    active = np.ones(x.shape, dtype=bool)
    quiet = np.zeros(x.shape, dtype=np.int64)
    kmin = int(abs(a) + abs(b)) + 2
    k = k0
    while active.any():
        if k - k0 >= SERIES_CAP:
            return total, -1
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1.0))
        term = np.where(active, term * ratio * x, 0.0)
        total = total + term
        small = np.abs(term) <= SERIES_TOL * np.abs(total)
        quiet = np.where(small, quiet + 1, 0)
        done = (term == 0.0) | ((quiet >= 2) & (k >= kmin))
        active &= ~done
        k += 1
    return total, k - k0


def recurrence_sweep(lead, mid, trail, x, v_before, v_here, order):
    """Run a three-term recurrence and its derivatives in ``x``.

    The step is ``lead[k] v[k+1] = (x - mid[k]) v[k] - trail[k] v[k-1]``.

    Parameters
    ----------
    lead, mid, trail : ndarray, shape (m,)
    x : ndarray, shape (nx,)
    v_before, v_here : ndarray, shape (order + 1, nx)
        Jets (value, first, second derivative) of the two seed terms.
    order : int
        Highest derivative carried, 0, 1 or 2.

    Returns
    -------
    ndarray, shape (order + 1, m, nx)
        Jets of the ``m`` newly generated terms.
    """
    m = len(lead)
    x = np.asarray(x, dtype=np.float64)
    out = np.empty((order + 1, m, x.shape[0]))
    prev = np.array(v_before[: order + 1], dtype=np.float64)
    cur = np.array(v_here[: order + 1], dtype=np.float64)
    for k in range(m):
        nxt = np.empty_like(cur)
        shift = x - mid[k]
        nxt[0] = (shift * cur[0] - trail[k] * prev[0]) / lead[k]
        for d in range(1, order + 1):
            nxt[d] = (shift * cur[d] + d * cur[d - 1] - trail[k] * prev[d]) / lead[k]
        out[:, k, :] = nxt
        prev, cur = cur, nxt
    return out


def _counts(m, A, B, T, K):
    # m = n + K, vectorised over replicas
    Y = B * (A * T * m + A + T)
    X = A * (B * T * (m + 1) + B - T)
    S = A * B * T * m + A * B + T * (B - A)
    Tc = A * B * (T * m + 1)
    return X, Y, S, Tc


def simulate_urn(uniforms, start, A, B, T, K):
    """Advance replicas of the two-experiment urn chain.

    Parameters
    ----------
    uniforms : ndarray, shape (R, 2 * steps)
        Column ``2k`` drives Experiment 1 of step ``k`` and column
        ``2k + 1`` drives Experiment 2.
    start : int
    A, B, T, K : int

    Returns
    -------
    ndarray of int64, shape (R,)
        Final states.
    """
    u = np.asarray(uniforms, dtype=np.float64)
    state = np.full(u.shape[0], start, dtype=np.int64)
    for k in range(u.shape[1] // 2):
        X, Y, _, _ = _counts(state + K, A, B, T, K)
        ax = np.abs(X).astype(np.float64)
        up = ax / (ax + np.abs(Y).astype(np.float64))
        state = state + (u[:, 2 * k] < up)
        _, _, S, Tc = _counts(state + K, A, B, T, K)
        asv = np.abs(S).astype(np.float64)
        stay = asv / (asv + np.abs(Tc).astype(np.float64))
        state = state - (u[:, 2 * k + 1] >= stay)
    return state
