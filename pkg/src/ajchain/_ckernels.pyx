# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; see ``_pykernels`` for the reference semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()

cdef double SERIES_TOL = 1e-16
cdef int SERIES_CAP = 10000


def hyp2f1_series(double a, double b, double c, x, bint skip_constant=False):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef Py_ssize_t n = xs.shape[0], i
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n)
    cdef int k, k0, quiet, kmin = <int>(fabs(a) + fabs(b)) + 2, used = 0
    cdef double term, total, xv
    k0 = 1 if skip_constant else 0
    for i in range(n):
        xv = xs[i]
        term = a * b / c if skip_constant else 1.0
        total = term
        quiet = 0
        k = k0
        while True:
            if k - k0 >= SERIES_CAP:
                return np.asarray(x, dtype=np.float64) * np.nan, -1
            term = term * (a + k) * (b + k) / ((c + k) * (k + 1.0)) * xv
            total = total + term
            k += 1
            if fabs(term) <= SERIES_TOL * fabs(total):
                quiet += 1
            else:
                quiet = 0
            if term == 0.0 or (quiet >= 2 and k - 1 >= kmin):
                break
        out[i] = total
        if k - k0 > used:
            used = k - k0
    return out.reshape(np.shape(x)), used


def recurrence_sweep(lead, mid, trail, x, v_before, v_here, int order):
    cdef cnp.ndarray[cnp.float64_t, ndim=1] ld = np.ascontiguousarray(lead, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] md = np.ascontiguousarray(mid, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tr = np.ascontiguousarray(trail, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] xs = np.ascontiguousarray(x, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] vb = np.ascontiguousarray(v_before, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] vh = np.ascontiguousarray(v_here, dtype=np.float64)
    cdef Py_ssize_t m = ld.shape[0], nx = xs.shape[0], k, j
    cdef int d
    cdef cnp.ndarray[cnp.float64_t, ndim=3] out = np.empty((order + 1, m, nx))
    cdef double p[3]
    cdef double c[3]
    cdef double nv[3]
    cdef double shift
    for j in range(nx):
        for d in range(order + 1):
            p[d] = vb[d, j]
            c[d] = vh[d, j]
        for k in range(m):
            shift = xs[j] - md[k]
            nv[0] = (shift * c[0] - tr[k] * p[0]) / ld[k]
            for d in range(1, order + 1):
                nv[d] = (shift * c[d] + d * c[d - 1] - tr[k] * p[d]) / ld[k]
            for d in range(order + 1):
                out[d, k, j] = nv[d]
                p[d] = c[d]
                c[d] = nv[d]
    return out


cdef inline void _counts(long long m, long long A, long long B, long long T,
                         long long* X, long long* Y, long long* S, long long* Tc):
    Y[0] = B * (A * T * m + A + T)
    X[0] = A * (B * T * (m + 1) + B - T)
    S[0] = A * B * T * m + A * B + T * (B - A)
    Tc[0] = A * B * (T * m + 1)


def simulate_urn(uniforms, long long start, long long A, long long B, long long T, long long K):
    cdef cnp.ndarray[cnp.float64_t, ndim=2] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t R = u.shape[0], steps = u.shape[1] // 2, r, k
    cdef cnp.ndarray[cnp.int64_t, ndim=1] out = np.empty(R, dtype=np.int64)
    cdef long long n, X, Y, S, Tc
    cdef double ax, asv, up, stay
    for r in range(R):
        n = start
        for k in range(steps):
            _counts(n + K, A, B, T, &X, &Y, &S, &Tc)
            ax = <double>(X if X >= 0 else -X)
            up = ax / (ax + <double>(Y if Y >= 0 else -Y))
            if u[r, 2 * k] < up:
                n += 1
            _counts(n + K, A, B, T, &X, &Y, &S, &Tc)
            asv = <double>(S if S >= 0 else -S)
            stay = asv / (asv + <double>(Tc if Tc >= 0 else -Tc))
            if u[r, 2 * k + 1] >= stay:
                n -= 1
        out[r] = n
    return out
