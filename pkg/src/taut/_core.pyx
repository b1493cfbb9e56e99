# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled per-start damped Gauss-Newton search; same algorithm as ``_search_py``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs
from libc.stdlib cimport malloc, free

cnp.import_array()

cdef double LAMBDA0 = 1e-3
cdef double LAMBDA_MIN = 1e-12
cdef double LAMBDA_MAX = 1e8
cdef double STEP_MAX = 1.0
cdef int TAYLOR_TERMS = 40


cdef int cholesky_solve(double* A, double* b, int n) noexcept nogil:
    """In-place Cholesky of ``A`` (n x n, row major) then solve ``A x = b`` into ``b``."""
    cdef int i, j, k
    cdef double s
    for j in range(n):
        s = A[j * n + j]
        for k in range(j):
            s -= A[j * n + k] * A[j * n + k]
        if s <= 0.0:
            return -1
        A[j * n + j] = sqrt(s)
        for i in range(j + 1, n):
            s = A[i * n + j]
            for k in range(j):
                s -= A[i * n + k] * A[j * n + k]
            A[i * n + j] = s / A[j * n + j]
    for i in range(n):
        s = b[i]
        for k in range(i):
            s -= A[i * n + k] * b[k]
        b[i] = s / A[i * n + i]
    for i in range(n - 1, -1, -1):
        s = b[i]
        for k in range(i + 1, n):
            s -= A[k * n + i] * b[k]
        b[i] = s / A[i * n + i]
    return 0


cdef double residual(const double[:, ::1] W, double* x, double* f, int m, int d) noexcept nogil:
    cdef int a, i
    cdef double s, r = 0.0
    for a in range(m):
        s = 0.0
        for i in range(d):
            s += W[a, i] * x[i]
        f[a] = s
        r += s * s
    return r


cdef void solve_one(const double[:, :, ::1] X, const double[:, ::1] W, double* x,
                    int m, int d, int max_iter, double tol,
                    double* out_r, long* out_it, double* work) noexcept nogil:
    cdef double* f = work
    cdef double* fn = f + m
    cdef double* V = fn + m          # d x m
    cdef double* J = V + d * m       # m x m
    cdef double* A = J + m * m       # m x m
    cdef double* g = A + m * m       # m
    cdef double* M = g + m           # d x d
    cdef double* xn = M + d * d      # d
    cdef double* term = xn + d
    cdef double* tmp = term + d
    cdef int it, a, b, i, j, k
    cdef double lam = LAMBDA0, r, rn, s, tr, mu, nrm, xs, tn
    r = residual(W, x, f, m, d)
    it = 0
    while it < max_iter and r >= tol and lam <= LAMBDA_MAX:
        # V[:, b] = X_b x
        for b in range(m):
            for i in range(d):
                s = 0.0
                for j in range(d):
                    s += X[b, i, j] * x[j]
                V[i * m + b] = s
        # J = W V
        for a in range(m):
            for b in range(m):
                s = 0.0
                for i in range(d):
                    s += W[a, i] * V[i * m + b]
                J[a * m + b] = s
        tr = 0.0
        for b in range(m):
            for k in range(m):
                s = 0.0
                for a in range(m):
                    s += J[a * m + b] * J[a * m + k]
                A[b * m + k] = s
            tr += A[b * m + b]
            s = 0.0
            for a in range(m):
                s += J[a * m + b] * f[a]
            g[b] = -s
        mu = lam * (tr / m + 1e-300)
        for b in range(m):
            A[b * m + b] += mu
        if cholesky_solve(A, g, m) != 0:
            lam *= 4.0
            it += 1
            continue
        nrm = 0.0
        for b in range(m):
            nrm += g[b] * g[b]
        nrm = sqrt(nrm)
        if nrm > STEP_MAX:
            for b in range(m):
                g[b] *= STEP_MAX / nrm
        # M = sum_b delta_b X_b
        for i in range(d * d):
            M[i] = 0.0
        for b in range(m):
            for i in range(d):
                for j in range(d):
                    M[i * d + j] += g[b] * X[b, i, j]
        # xn = exp(M) x
        xs = 0.0
        for i in range(d):
            xn[i] = x[i]
            term[i] = x[i]
            xs += x[i] * x[i]
        xs = sqrt(xs) + 1e-300
        for k in range(1, TAYLOR_TERMS):
            tn = 0.0
            for i in range(d):
                s = 0.0
                for j in range(d):
                    s += M[i * d + j] * term[j]
                tmp[i] = s / k
            for i in range(d):
                term[i] = tmp[i]
                xn[i] += tmp[i]
                tn += tmp[i] * tmp[i]
            if sqrt(tn) < 1e-18 * xs:
                break
        rn = residual(W, xn, fn, m, d)
        if rn < r:
            for i in range(d):
                x[i] = xn[i]
            for a in range(m):
                f[a] = fn[a]
            r = rn
            lam = lam / 3.0
            if lam < LAMBDA_MIN:
                lam = LAMBDA_MIN
        else:
            lam *= 4.0
        it += 1
    out_r[0] = r
    out_it[0] = it


def solve_starts(basis, q, x0, int max_iter=200, double tol=1e-30):
    """Compiled counterpart of ``taut._search_py.solve_starts``."""
    cdef const double[:, :, ::1] X = np.ascontiguousarray(basis, dtype=np.float64)
    qa = np.asarray(q, dtype=np.float64)
    cdef const double[:, ::1] W = np.ascontiguousarray(np.einsum("aji,j->ai", np.asarray(basis, dtype=np.float64), qa))
    xs_arr = np.array(x0, dtype=np.float64, ndmin=2, order="C", copy=True)
    cdef double[:, ::1] xs = xs_arr
    cdef int S = xs.shape[0], m = X.shape[0], d = X.shape[1]
    r_arr = np.empty(S, dtype=np.float64)
    it_arr = np.empty(S, dtype=np.int64)
    cdef double[::1] rv = r_arr
    cdef long[::1] iv = it_arr
    cdef int n
    cdef size_t wsize = 4 * m + 2 * d * m + 2 * m * m + d * d + 3 * d + 8
    cdef double* work = <double*> malloc(wsize * sizeof(double))
    if work == NULL:
        raise MemoryError()
    try:
        with nogil:
            for n in range(S):
                solve_one(X, W, &xs[n, 0], m, d, max_iter, tol, &rv[n], &iv[n], work)
    finally:
        free(work)
    return xs_arr, r_arr, it_arr
