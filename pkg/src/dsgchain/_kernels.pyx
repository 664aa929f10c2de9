# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels: pivoted Crout solve and the implicit time loop.

Mirrors ``_pykernels`` operation for operation.
"""

import numpy as np

from libc.math cimport sin, cos, fabs, sqrt, isfinite

from .errors import SingularMatrix

cdef double PIVOT_RTOL = 1e-14
cdef double DEGENERATE_GAP = 1e-8

cdef enum:
    OK = 0
    DIVERGED = 1
    SINGULAR = 2


cdef inline double pot(int kind, double u) nogil:
    cdef double u2
    if kind == 0:
        return 1.0 - cos(u)
    if kind == 1:
        return 0.5 - (2.0 * cos(u) + cos(2.0 * u)) / 6.0
    u2 = u * u
    return u2 / 2.0 - u2 * u2 / 24.0 + u2 * u2 * u2 / 720.0


cdef inline double dpot(int kind, double u) nogil:
    cdef double u2
    if kind == 0:
        return sin(u)
    if kind == 1:
        return (sin(u) + sin(2.0 * u)) / 3.0
    u2 = u * u
    return u - u * u2 / 6.0 + u * u2 * u2 / 120.0


cdef inline double d2pot(int kind, double u) nogil:
    cdef double u2
    if kind == 0:
        return cos(u)
    if kind == 1:
        return (cos(u) + 2.0 * cos(2.0 * u)) / 3.0
    u2 = u * u
    return 1.0 - u2 / 2.0 + u2 * u2 / 24.0


cdef int crout(int n, double[::1] a, double[::1] b, double[::1] c, double[::1] d,
               double[::1] u1, double[::1] u2, double[::1] x) noexcept nogil:
    """Solve in place into ``x``; returns the failing column or -1."""
    cdef double scale = 0.0, tiny, p, q, r, lo, nd, nu, nr
    cdef Py_ssize_t i
    for i in range(n):
        if fabs(b[i]) > scale:
            scale = fabs(b[i])
    for i in range(n - 1):
        if fabs(a[i]) > scale:
            scale = fabs(a[i])
        if fabs(c[i]) > scale:
            scale = fabs(c[i])
    if scale == 0.0:
        return 0
    tiny = PIVOT_RTOL * scale

    p = b[0]
    q = c[0] if n > 1 else 0.0
    r = d[0]
    for i in range(n - 1):
        lo = a[i]
        nd = b[i + 1]
        nu = c[i + 1] if i + 1 < n - 1 else 0.0
        nr = d[i + 1]
        if fabs(lo) > fabs(p):
            if fabs(lo) <= tiny:
                return i
            u1[i] = nd / lo
            u2[i] = nu / lo
            x[i] = nr / lo
            p, q, r = q - p * u1[i], -p * u2[i], r - p * x[i]
        else:
            if fabs(p) <= tiny:
                return i
            u1[i] = q / p
            u2[i] = 0.0
            x[i] = r / p
            p, q, r = nd - lo * u1[i], nu, nr - lo * x[i]
    if fabs(p) <= tiny:
        return n - 1
    x[n - 1] = r / p
    if n > 1:
        x[n - 2] -= u1[n - 2] * x[n - 1]
    for i in range(n - 3, -1, -1):
        x[i] -= u1[i] * x[i + 1] + u2[i] * x[i + 2]
    return -1


def crout_solve(sub, diag, sup, rhs):
    cdef double[::1] a = np.ascontiguousarray(sub, dtype=np.float64)
    cdef double[::1] b = np.ascontiguousarray(diag, dtype=np.float64)
    cdef double[::1] c = np.ascontiguousarray(sup, dtype=np.float64)
    cdef double[::1] d = np.ascontiguousarray(rhs, dtype=np.float64)
    cdef int n = b.shape[0]
    if n < 1 or a.shape[0] != n - 1 or c.shape[0] != n - 1 or d.shape[0] != n:
        raise ValueError("inconsistent tridiagonal system dimensions")
    x = np.empty(n)
    cdef double[::1] xv = x
    cdef double[::1] u1 = np.empty(n)
    cdef double[::1] u2 = np.empty(n)
    cdef int col = crout(n, a, b, c, d, u1, u2, xv)
    if col >= 0:
        raise SingularMatrix(f"pivot below threshold in column {col}")
    return x


cdef inline double quotient(int kind, double an, double bn) noexcept nogil:
    cdef double gap = an - bn
    if fabs(gap) < DEGENERATE_GAP:
        return dpot(kind, 0.5 * (an + bn))
    return (pot(kind, an) - pot(kind, bn)) / gap


cdef inline double slope(int kind, double an, double bn) noexcept nogil:
    cdef double gap = an - bn
    if fabs(gap) < DEGENERATE_GAP:
        return 0.5 * d2pot(kind, 0.5 * (an + bn))
    return (gap * dpot(kind, an) + pot(kind, bn) - pot(kind, an)) / (gap * gap)


cdef int newton_step(int kind, double[::1] un, double[::1] uc, double[::1] up,
                     double phi_next, double c, double gamma, double dt, double tol,
                     int max_iter, double[::1] sub, double[::1] diag, double[::1] sup,
                     double[::1] rhs, double[::1] y, double[::1] w1, double[::1] w2,
                     int *iters) noexcept nogil:
    cdef Py_ssize_t n = un.shape[0], j
    cdef int it, col
    cdef double c2 = c * c, inv_dt2 = 1.0 / (dt * dt), g2 = gamma / (2.0 * dt)
    cdef double base = inv_dt2 + c2 + g2, off = -0.5 * c2, norm, lap
    for j in range(n):
        un[j] = 2.0 * uc[j] - up[j]
    for j in range(n - 1):
        sub[j] = off
        sup[j] = off
    sup[0] = 0.0
    sub[n - 2] = -1.0
    diag[0] = 1.0
    diag[n - 1] = 1.0
    for it in range(1, max_iter + 1):
        iters[0] = it
        rhs[0] = -(un[0] - phi_next)
        rhs[n - 1] = -(un[n - 1] - un[n - 2])
        for j in range(1, n - 1):
            lap = (un[j + 1] - 2.0 * un[j] + un[j - 1]) + (up[j + 1] - 2.0 * up[j] + up[j - 1])
            rhs[j] = -((un[j] - 2.0 * uc[j] + up[j]) * inv_dt2
                       - 0.5 * c2 * lap
                       + gamma * (un[j] - up[j]) / (2.0 * dt)
                       + quotient(kind, un[j], up[j]))
            diag[j] = base + slope(kind, un[j], up[j])
        col = crout(n, sub, diag, sup, rhs, w1, w2, y)
        if col >= 0:
            return SINGULAR
        norm = 0.0
        for j in range(n):
            un[j] += y[j]
            norm += y[j] * y[j]
        norm = sqrt(norm)
        if not isfinite(norm):
            return DIVERGED
        if norm < tol:
            return OK
    return DIVERGED


def advance(double[:, ::1] states, double[::1] phi, int kind_code, double c,
            double gamma, double dt, double tol, int max_iter, long[::1] iters):
    """Fill ``states[2:]`` in place; returns ``(status, step)`` like the Python kernel."""
    cdef Py_ssize_t m = states.shape[0] - 1, n = states.shape[1], k
    cdef double[::1] sub = np.empty(n - 1)
    cdef double[::1] sup = np.empty(n - 1)
    cdef double[::1] diag = np.empty(n)
    cdef double[::1] rhs = np.empty(n)
    cdef double[::1] y = np.empty(n)
    cdef double[::1] w1 = np.empty(n)
    cdef double[::1] w2 = np.empty(n)
    cdef int status = OK, it = 0
    cdef Py_ssize_t failed = -1
    with nogil:
        for k in range(1, m):
            status = newton_step(kind_code, states[k + 1], states[k], states[k - 1],
                                 phi[k + 1], c, gamma, dt, tol, max_iter,
                                 sub, diag, sup, rhs, y, w1, w2, &it)
            iters[k + 1] = it
            if status != OK:
                failed = k + 1
                break
    return int(status), int(failed)
