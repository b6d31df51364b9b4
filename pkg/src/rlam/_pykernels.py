"""Pure-Python (numpy) twins of the compiled kernels in ``_kernels.pyx``.

Signatures and return conventions match the compiled module exactly.  The
Jacobi SVD here uses a round-robin (parallel) pair ordering so that each
round is a handful of vectorized numpy operations; the compiled kernel
uses cyclic-by-row ordering.  Both stop on the same cosine criterion.
"""

import numpy as np

_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_INV_2_53 = 1.0 / 9007199254740992.0


def _splitmix(seed, start, count):
    i = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed) + i * _GAMMA
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def _open01(z):
    return ((z >> np.uint64(11)).astype(np.float64) + 0.5) * _INV_2_53


def random_fill(seed, count, dist):
    seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    if dist == 0:
        npairs = (count + 1) // 2
        z = _splitmix(seed, 1, 2 * npairs)
        u1 = _open01(z[0::2])
        u2 = _open01(z[1::2])
        r = np.sqrt(-2.0 * np.log(u1))
        out = np.empty(2 * npairs)
        out[0::2] = r * np.cos(2.0 * np.pi * u2)
        out[1::2] = r * np.sin(2.0 * np.pi * u2)
        return out[:count]
    z = _splitmix(seed, 1, count)
    if dist == 1:
        return 2.0 * _open01(z) - 1.0
    return np.where(z >> np.uint64(63), 1.0, -1.0)


def householder_qr(A, pivoting, steps, qcols, stop_norm):
    F = np.array(A, dtype=np.float64, order="F")
    m, n = F.shape
    piv = np.arange(n, dtype=np.intp)
    tau = np.zeros(max(steps, 1))
    done = steps
    for j in range(steps):
        if pivoting:
            norms = np.einsum("ij,ij->j", F[j:, j:], F[j:, j:])
            best = j + int(np.argmax(norms))
            if norms[best - j] <= stop_norm * stop_norm:
                done = j
                break
            if best != j:
                F[:, [j, best]] = F[:, [best, j]]
                piv[[j, best]] = piv[[best, j]]
        x0 = F[j, j]
        tail = F[j + 1:, j] @ F[j + 1:, j]
        if tail == 0.0:
            continue
        beta = -np.copysign(np.sqrt(x0 * x0 + tail), x0)
        tau[j] = (beta - x0) / beta
        F[j + 1:, j] /= x0 - beta
        F[j, j] = beta
        v = F[j + 1:, j]
        w = tau[j] * (F[j, j + 1:] + v @ F[j + 1:, j + 1:])
        F[j, j + 1:] -= w
        F[j + 1:, j + 1:] -= np.outer(v, w)

    Q = np.zeros((m, qcols), order="F")
    Q[np.arange(qcols), np.arange(qcols)] = 1.0
    for j in range(done - 1, -1, -1):
        if tau[j] == 0.0:
            continue
        v = F[j + 1:, j]
        w = tau[j] * (Q[j, j:] + v @ Q[j + 1:, j:])
        Q[j, j:] -= w
        Q[j + 1:, j:] -= np.outer(v, w)

    R = np.triu(F[:done, :])
    neg = np.diag(R) < 0.0
    R[neg, :] *= -1.0
    Q[:, :done][:, neg] *= -1.0
    return np.ascontiguousarray(Q), np.ascontiguousarray(R), piv


def _round_robin(n):
    # circle method: n even, n - 1 rounds of n / 2 disjoint pairs
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        half = n // 2
        p = np.array(players[:half], dtype=np.intp)
        q = np.array(players[half:][::-1], dtype=np.intp)
        rounds.append((np.minimum(p, q), np.maximum(p, q)))
        players = [players[0]] + [players[-1]] + players[1:-1]
    return rounds


def jacobi_svd(A, tol, max_sweeps):
    A = np.asarray(A, dtype=np.float64)
    m, n = A.shape
    npad = n + (n % 2)
    W = np.zeros((npad, m))
    W[:n] = A.T
    Vt = np.eye(npad)
    rounds = _round_robin(npad) if npad > 1 else []
    sweep = 0
    off = 0.0
    while sweep < max_sweeps:
        sweep += 1
        off = 0.0
        for p, q in rounds:
            Wp, Wq = W[p], W[q]
            alpha = np.einsum("ij,ij->i", Wp, Wp)
            beta = np.einsum("ij,ij->i", Wq, Wq)
            gamma = np.einsum("ij,ij->i", Wp, Wq)
            live = (alpha > 0.0) & (beta > 0.0)
            cosine = np.zeros_like(alpha)
            cosine[live] = np.abs(gamma[live]) / np.sqrt(alpha[live]) / np.sqrt(beta[live])
            if cosine.size:
                off = max(off, float(cosine.max()))
            act = cosine > tol
            if not act.any():
                continue
            pa, qa = p[act], q[act]
            zeta = (beta[act] - alpha[act]) / (2.0 * gamma[act])
            t = np.copysign(1.0, zeta) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = (1.0 / np.sqrt(1.0 + t * t))[:, None]
            s = c * t[:, None]
            Wp, Wq = W[pa], W[qa]
            W[pa], W[qa] = c * Wp - s * Wq, s * Wp + c * Wq
            Vp, Vq = Vt[pa], Vt[qa]
            Vt[pa], Vt[qa] = c * Vp - s * Vq, s * Vp + c * Vq
        if off <= tol:
            break

    W = W[:n]
    d = np.sqrt(np.einsum("ij,ij->i", W, W))
    U = W.T.copy()
    nz = d > 0.0
    U[:, nz] /= d[nz]
    return U, d, Vt[:n, :n].T.copy(), sweep, off


def lu_lower(A):
    F = np.array(A, dtype=np.float64)
    m, n = F.shape
    r = min(m, n)
    perm = np.arange(m, dtype=np.intp)
    for j in range(r):
        p = j + int(np.argmax(np.abs(F[j:, j])))
        if p != j:
            F[[j, p]] = F[[p, j]]
            perm[[j, p]] = perm[[p, j]]
        if F[j, j] == 0.0:
            continue
        F[j + 1:, j] /= F[j, j]
        F[j + 1:, j + 1:] -= np.outer(F[j + 1:, j], F[j, j + 1:])
    L = np.tril(F[:, :r], -1)
    L[np.arange(r), np.arange(r)] = 1.0
    out = np.empty_like(L)
    out[perm] = L
    return out
