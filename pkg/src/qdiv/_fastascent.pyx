# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twin of _ascent.ascend for the built-in kernels.

Same algorithm, same constants, same parameter packing; the kernel f is
selected by an integer code (0 = -log x, 1 = -x^beta, 2 and 3 = x^beta)
so the objective runs without Python callbacks. Any algorithmic change in
_ascent.py must be mirrored here.
"""

import numpy as np

from libc.math cimport exp, fabs, log, pow
from scipy.linalg.cython_lapack cimport zheev

DEF ARMIJO_C1 = 1e-4
DEF MAX_HALVINGS = 60
DEF STEP_MIN = 1e-12
DEF STEP_MAX = 1e6
DEF EXP_CLAMP = -700.0


cdef inline double f_eval(int code, double beta, double x) nogil:
    if code == 0:
        return -log(x)
    elif code == 1:
        return -pow(x, beta)
    return pow(x, beta)


cdef double _obj(double[::1] h, int ny, int d,
                 double complex[:, ::1] W, double[::1] mu,
                 int code, double beta,
                 double complex[::1] A, double[::1] w, double[::1] nu,
                 double complex[::1] work, int lwork, double[::1] rwork) except? -1.0:
    cdef int i, j, k, t, y, n_ = d, lda = d, lw = lwork, info = 0
    cdef char jobz = b'V'
    cdef char uplo = b'U'
    cdef double m, s, r, val, b2
    cdef double complex acc

    # Unpack h into column-major storage for LAPACK.
    for i in range(d * d):
        A[i] = 0
    for i in range(d):
        A[i + i * d] = h[i]
    k = d
    for i in range(d):
        for j in range(i + 1, d):
            A[i + j * d] = h[k] + 1j * h[k + 1]
            A[j + i * d] = h[k] - 1j * h[k + 1]
            k += 2

    zheev(&jobz, &uplo, &n_, &A[0], &lda, &w[0], &work[0], &lw, &rwork[0], &info)
    if info != 0:
        raise RuntimeError("zheev failed with info=%d" % info)

    m = w[d - 1]  # eigenvalues come back ascending
    s = 0.0
    for t in range(d):
        r = w[t] - m
        if r < EXP_CLAMP:
            r = EXP_CLAMP
        nu[t] = exp(r)
        s += nu[t]
    for t in range(d):
        nu[t] /= s

    val = 0.0
    for t in range(d):
        for y in range(ny):
            acc = 0
            for i in range(d):
                acc = acc + W[y, i] * A[i + t * d]
            b2 = acc.real * acc.real + acc.imag * acc.imag
            val += f_eval(code, beta, mu[y] / nu[t]) * b2
    return val


def ascend(W_in, mu_in, h0, int code, double beta,
           int max_iters, double grad_tol, double fd_step):
    """Drop-in for _ascent.ascend with f given by (code, beta)."""
    W_arr = np.ascontiguousarray(W_in, dtype=np.complex128)
    mu_arr = np.ascontiguousarray(mu_in, dtype=np.float64)
    cdef int ny = W_arr.shape[0]
    cdef int d = W_arr.shape[1]
    cdef int n = d * d
    h_arr = np.array(h0, dtype=np.float64).ravel()
    if h_arr.shape[0] != n:
        raise ValueError("h0 must have d*d entries")

    cdef double complex[:, ::1] W = W_arr
    cdef double[::1] mu = mu_arr
    cdef double[::1] h = h_arr
    cdef double complex[::1] A = np.empty(d * d, dtype=np.complex128)
    cdef double[::1] w = np.empty(d, dtype=np.float64)
    cdef double[::1] nu = np.empty(d, dtype=np.float64)
    cdef double[::1] rwork = np.empty(max(1, 3 * d - 2), dtype=np.float64)

    # LAPACK workspace query.
    cdef char jobz = b'V'
    cdef char uplo = b'U'
    cdef int n_ = d, lda = d, lwork = -1, info = 0
    cdef double complex wq = 0
    zheev(&jobz, &uplo, &n_, &A[0], &lda, &w[0], &wq, &lwork, &rwork[0], &info)
    lwork = max(int(wq.real), 2 * d - 1)
    cdef double complex[::1] work = np.empty(lwork, dtype=np.complex128)

    cdef double[::1] g = np.empty(n, dtype=np.float64)
    cdef double[::1] hw = np.empty(n, dtype=np.float64)
    cdef double[::1] h_try = np.empty(n, dtype=np.float64)
    cdef double[::1] prev_h = np.empty(n, dtype=np.float64)
    cdef double[::1] prev_g = np.empty(n, dtype=np.float64)

    cdef int it = 0, p, halve
    cdef bint have_prev = False, converged = False, accepted
    cdef double v, v_try, step = 1.0, gnorm = 1e308
    cdef double orig, vp, vm, mean, ds, dy, sy, ss, denom, gsq, t_

    _center(h, d)
    v = _obj(h, ny, d, W, mu, code, beta, A, w, nu, work, lwork, rwork)

    while it < max_iters:
        it += 1
        for p in range(n):
            hw[p] = h[p]
        for p in range(n):
            orig = hw[p]
            hw[p] = orig + fd_step
            vp = _obj(hw, ny, d, W, mu, code, beta, A, w, nu, work, lwork, rwork)
            hw[p] = orig - fd_step
            vm = _obj(hw, ny, d, W, mu, code, beta, A, w, nu, work, lwork, rwork)
            hw[p] = orig
            g[p] = (vp - vm) / (2.0 * fd_step)
        _center(g, d)
        gnorm = 0.0
        for p in range(n):
            if fabs(g[p]) > gnorm:
                gnorm = fabs(g[p])
        if gnorm <= grad_tol:
            converged = True
            break
        if have_prev:
            sy = 0.0
            ss = 0.0
            for p in range(n):
                ds = h[p] - prev_h[p]
                dy = g[p] - prev_g[p]
                sy += ds * dy
                ss += ds * ds
            denom = -sy
            if denom > 1e-16:
                step = ss / denom
        if step < STEP_MIN:
            step = STEP_MIN
        elif step > STEP_MAX:
            step = STEP_MAX
        gsq = 0.0
        for p in range(n):
            gsq += g[p] * g[p]
        t_ = step
        accepted = False
        for halve in range(MAX_HALVINGS):
            for p in range(n):
                h_try[p] = h[p] + t_ * g[p]
            _center(h_try, d)
            v_try = _obj(h_try, ny, d, W, mu, code, beta, A, w, nu, work, lwork, rwork)
            if v_try >= v + ARMIJO_C1 * t_ * gsq:
                accepted = True
                break
            t_ *= 0.5
        if not accepted:
            break
        for p in range(n):
            prev_h[p] = h[p]
            prev_g[p] = g[p]
            h[p] = h_try[p]
        have_prev = True
        v = v_try
        step = t_

    return v, np.asarray(h).copy(), it, gnorm, converged


cdef inline void _center(double[::1] hv, int d) nogil:
    cdef int i
    cdef double mean = 0.0
    for i in range(d):
        mean += hv[i]
    mean /= d
    for i in range(d):
        hv[i] -= mean
