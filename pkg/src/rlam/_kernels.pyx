# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops.

Every function here has a twin with the same signature and semantics in
``rlam._pykernels``; ``rlam._backend`` picks one at import time.
Inputs are validated by the callers in ``rlam.detfact`` / ``rlam.sketch``.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, log, cos, sin, copysign, hypot
from libc.stdint cimport uint64_t

cnp.import_array()

cdef uint64_t GAMMA = 0x9E3779B97F4A7C15ULL
cdef double TWO_PI = 6.283185307179586
cdef double INV_2_53 = 1.0 / 9007199254740992.0


cdef inline uint64_t _mix(uint64_t z) nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline double _open01(uint64_t z) nogil:
    return ((z >> 11) + 0.5) * INV_2_53


def random_fill(uint64_t seed, Py_ssize_t count, int dist):
    """Draw ``count`` variates from the SplitMix64 stream starting at ``seed``.

    dist: 0 normal (Box-Muller), 1 uniform(-1, 1), 2 Rademacher.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(count, dtype=np.float64)
    cdef double[::1] o = out
    cdef Py_ssize_t i, npairs
    cdef double r, u1, u2
    with nogil:
        if dist == 0:
            npairs = (count + 1) // 2
            for i in range(npairs):
                u1 = _open01(_mix(seed + <uint64_t>(2 * i + 1) * GAMMA))
                u2 = _open01(_mix(seed + <uint64_t>(2 * i + 2) * GAMMA))
                r = sqrt(-2.0 * log(u1))
                o[2 * i] = r * cos(TWO_PI * u2)
                if 2 * i + 1 < count:
                    o[2 * i + 1] = r * sin(TWO_PI * u2)
        elif dist == 1:
            for i in range(count):
                o[i] = 2.0 * _open01(_mix(seed + <uint64_t>(i + 1) * GAMMA)) - 1.0
        else:
            for i in range(count):
                o[i] = 1.0 if (_mix(seed + <uint64_t>(i + 1) * GAMMA) >> 63) else -1.0
    return out


def householder_qr(A, bint pivoting, Py_ssize_t steps, Py_ssize_t qcols, double stop_norm):
    """Householder QR of an m x n matrix stopped after ``steps`` reflections.

    With pivoting, elimination also stops early once every remaining
    column has norm <= ``stop_norm``; r below is the number of reflections
    actually applied.

    Returns (Q, R, piv): Q is m x qcols (qcols >= steps, the leading
    columns of H_0 ... H_{r-1}), R is r x n upper trapezoidal with
    nonnegative diagonal, and A[:, piv] ~= Q[:, :r] @ R (exact when
    r == min(m, n)). Without pivoting piv is the identity order.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Fa = np.array(A, dtype=np.float64, order="F")
    cdef double[::1, :] F = Fa
    cdef Py_ssize_t m = F.shape[0], n = F.shape[1]
    cdef cnp.ndarray[cnp.intp_t, ndim=1] piv_a = np.arange(n, dtype=np.intp)
    cdef cnp.intp_t[::1] piv = piv_a
    cdef cnp.ndarray[cnp.float64_t, ndim=1] tau_a = np.zeros(max(steps, 1))
    cdef double[::1] tau = tau_a
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Qa = np.zeros((m, qcols), order="F")
    cdef double[::1, :] Q = Qa
    cdef Py_ssize_t i, j, c, best
    cdef double s, bestnorm, x0, tail, normx, beta, t, scale, w
    cdef cnp.intp_t ip
    cdef Py_ssize_t done = steps
    cdef double stop2 = stop_norm * stop_norm

    with nogil:
        for j in range(steps):
            if pivoting:
                best = j
                bestnorm = -1.0
                for c in range(j, n):
                    s = 0.0
                    for i in range(j, m):
                        s = s + F[i, c] * F[i, c]
                    if s > bestnorm:
                        bestnorm = s
                        best = c
                if bestnorm <= stop2:
                    done = j
                    break
                if best != j:
                    for i in range(m):
                        t = F[i, j]
                        F[i, j] = F[i, best]
                        F[i, best] = t
                    ip = piv[j]
                    piv[j] = piv[best]
                    piv[best] = ip

            x0 = F[j, j]
            tail = 0.0
            for i in range(j + 1, m):
                tail = tail + F[i, j] * F[i, j]
            if tail == 0.0:
                tau[j] = 0.0
                continue
            normx = sqrt(x0 * x0 + tail)
            beta = -copysign(normx, x0)
            tau[j] = (beta - x0) / beta
            scale = 1.0 / (x0 - beta)
            for i in range(j + 1, m):
                F[i, j] = F[i, j] * scale
            F[j, j] = beta
            # apply H = I - tau v v^T (v[0] = 1) to the trailing columns
            for c in range(j + 1, n):
                w = F[j, c]
                for i in range(j + 1, m):
                    w = w + F[i, j] * F[i, c]
                w = w * tau[j]
                F[j, c] = F[j, c] - w
                for i in range(j + 1, m):
                    F[i, c] = F[i, c] - w * F[i, j]

        # accumulate Q = H_0 ... H_{done-1} I[:, :qcols] backwards
        for j in range(qcols):
            Q[j, j] = 1.0
        for j in range(done - 1, -1, -1):
            if tau[j] == 0.0:
                continue
            for c in range(j, qcols):
                w = Q[j, c]
                for i in range(j + 1, m):
                    w = w + F[i, j] * Q[i, c]
                w = w * tau[j]
                Q[j, c] = Q[j, c] - w
                for i in range(j + 1, m):
                    Q[i, c] = Q[i, c] - w * F[i, j]

    R = np.triu(Fa[:done, :])
    for j in range(done):
        if R[j, j] < 0.0:
            R[j, :] *= -1.0
            Qa[:, j] *= -1.0
    return np.ascontiguousarray(Qa), np.ascontiguousarray(R), piv_a


cdef inline void _rotate(double* x, double* y, Py_ssize_t n, double c, double s) nogil:
    cdef Py_ssize_t i
    cdef double a, b
    for i in range(n):
        a = x[i]
        b = y[i]
        x[i] = c * a - s * b
        y[i] = s * a + c * b


def jacobi_svd(A, double tol, int max_sweeps):
    """One-sided (Hestenes) Jacobi SVD of an m x n matrix with m >= n.

    Columns are orthogonalized pairwise in cyclic-by-row order until every
    pair cosine |w_i.w_j| / (|w_i||w_j|) is at most ``tol``.

    Returns (U, d, V, sweeps, off) with unsorted singular values; ``off`` is
    the largest pair cosine seen in the last sweep.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Wa = np.array(np.asarray(A, dtype=np.float64).T, order="C")
    cdef double[:, ::1] W = Wa
    cdef Py_ssize_t n = W.shape[0], m = W.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Va = np.eye(n)
    cdef double[:, ::1] Vt = Va
    cdef Py_ssize_t i, j, r
    cdef double alpha, beta, gamma, a0, a1, b0, b1, g0, g1, x, y, cosine, off = 0.0
    cdef double zeta, t, c, s
    cdef double* wi
    cdef double* wj
    cdef int sweep = 0

    with nogil:
        while sweep < max_sweeps:
            sweep += 1
            off = 0.0
            for i in range(n - 1):
                wi = &W[i, 0]
                for j in range(i + 1, n):
                    wj = &W[j, 0]
                    a0 = 0.0; a1 = 0.0; b0 = 0.0; b1 = 0.0; g0 = 0.0; g1 = 0.0
                    r = 0
                    while r + 1 < m:
                        x = wi[r]; y = wj[r]
                        a0 += x * x; b0 += y * y; g0 += x * y
                        x = wi[r + 1]; y = wj[r + 1]
                        a1 += x * x; b1 += y * y; g1 += x * y
                        r += 2
                    if r < m:
                        x = wi[r]; y = wj[r]
                        a0 += x * x; b0 += y * y; g0 += x * y
                    alpha = a0 + a1
                    beta = b0 + b1
                    gamma = g0 + g1
                    if alpha == 0.0 or beta == 0.0:
                        continue
                    cosine = fabs(gamma) / sqrt(alpha) / sqrt(beta)
                    if cosine > off:
                        off = cosine
                    if cosine <= tol:
                        continue
                    zeta = (beta - alpha) / (2.0 * gamma)
                    t = copysign(1.0, zeta) / (fabs(zeta) + hypot(1.0, zeta))
                    c = 1.0 / sqrt(1.0 + t * t)
                    s = c * t
                    _rotate(wi, wj, m, c, s)
                    _rotate(&Vt[i, 0], &Vt[j, 0], n, c, s)
            if off <= tol:
                break

    d = np.sqrt(np.einsum("ij,ij->i", Wa, Wa))
    U = Wa.T.copy()
    nz = d > 0.0
    U[:, nz] /= d[nz]
    return U, d, Va.T.copy(), sweep, off


def lu_lower(A):
    """Permuted unit-lower factor of partial-pivoting LU.

    Returns L (m x min(m, n)) with A = L @ U for some upper-triangular U,
    i.e. the row permutation is folded into L.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2] Fa = np.array(A, dtype=np.float64, order="C")
    cdef double[:, ::1] F = Fa
    cdef Py_ssize_t m = F.shape[0], n = F.shape[1]
    cdef Py_ssize_t r = min(m, n)
    cdef cnp.ndarray[cnp.intp_t, ndim=1] perm_a = np.arange(m, dtype=np.intp)
    cdef cnp.intp_t[::1] perm = perm_a
    cdef Py_ssize_t i, j, c, p
    cdef double big, t, piv, f
    cdef cnp.intp_t ip

    with nogil:
        for j in range(r):
            p = j
            big = fabs(F[j, j])
            for i in range(j + 1, m):
                if fabs(F[i, j]) > big:
                    big = fabs(F[i, j])
                    p = i
            if p != j:
                for c in range(n):
                    t = F[j, c]
                    F[j, c] = F[p, c]
                    F[p, c] = t
                ip = perm[j]
                perm[j] = perm[p]
                perm[p] = ip
            piv = F[j, j]
            if piv == 0.0:
                continue
            for i in range(j + 1, m):
                f = F[i, j] / piv
                F[i, j] = f
                for c in range(j + 1, n):
                    F[i, c] = F[i, c] - f * F[j, c]

    L = np.tril(Fa[:, :r], -1)
    L[np.arange(r), np.arange(r)] = 1.0
    out = np.empty_like(L)
    out[perm_a] = L
    return out
