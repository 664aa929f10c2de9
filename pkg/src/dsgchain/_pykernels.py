"""Pure-Python implementations of the hot kernels.

Used when the compiled extension is unavailable, and as the reference the
compiled kernels are tested against.  ``advance`` and ``crout_solve`` share
signatures with their counterparts in ``_kernels.pyx``.
"""

import math

import numpy as np

from .errors import SingularMatrix
from .model import (
    PotentialKind,
    eval_potential,
    eval_potential_deriv,
    eval_potential_second_deriv,
)

PIVOT_RTOL = 1e-14
DEGENERATE_GAP = 1e-8

_KINDS = {kind.code: kind for kind in PotentialKind}

OK, DIVERGED, SINGULAR = 0, 1, 2


def crout_solve(sub, diag, sup, rhs):
    """Solve a tridiagonal system by Crout reduction with adjacent-row pivoting.

    The lower factor carries the pivots and the upper factor has a unit
    diagonal plus, where a row exchange happened, one extra fill diagonal.
    """
    n = len(diag)
    a = [float(x) for x in sub]
    b = [float(x) for x in diag]
    c = [float(x) for x in sup]
    d = [float(x) for x in rhs]
    if len(a) != n - 1 or len(c) != n - 1 or len(d) != n or n < 1:
        raise ValueError("inconsistent tridiagonal system dimensions")

    scale = max(max(map(abs, b)), max(map(abs, a), default=0.0), max(map(abs, c), default=0.0))
    tiny = PIVOT_RTOL * scale
    if scale == 0.0:
        raise SingularMatrix("zero matrix")

    u1 = [0.0] * n  # unit-upper first superdiagonal
    u2 = [0.0] * n  # fill diagonal from row exchanges
    z = [0.0] * n

    # pending row i: entries (p, q) in columns (i, i+1), right-hand side r
    p, q, r = b[0], (c[0] if n > 1 else 0.0), d[0]
    for i in range(n - 1):
        lo = a[i]  # row i+1, column i
        nd = b[i + 1]
        nu = c[i + 1] if i + 1 < n - 1 else 0.0
        nr = d[i + 1]
        if abs(lo) > abs(p):
            # exchange: row i+1 becomes the pivot row
            if abs(lo) <= tiny:
                raise SingularMatrix(f"pivot below threshold in column {i}")
            u1[i] = nd / lo
            u2[i] = nu / lo
            z[i] = nr / lo
            p, q, r = q - p * u1[i], -p * u2[i], r - p * z[i]
        else:
            if abs(p) <= tiny:
                raise SingularMatrix(f"pivot below threshold in column {i}")
            u1[i] = q / p
            z[i] = r / p
            p, q, r = nd - lo * u1[i], nu, nr - lo * z[i]
    if abs(p) <= tiny:
        raise SingularMatrix(f"pivot below threshold in column {n - 1}")
    z[n - 1] = r / p

    x = z
    if n > 1:
        x[n - 2] -= u1[n - 2] * x[n - 1]
    for i in range(n - 3, -1, -1):
        x[i] -= u1[i] * x[i + 1] + u2[i] * x[i + 2]
    return np.array(x)


def difference_quotient(kind, u_next, u_prev):
    """[V(u_next) - V(u_prev)] / (u_next - u_prev), V' at the midpoint when degenerate."""
    gap = u_next - u_prev
    degen = np.abs(gap) < DEGENERATE_GAP
    safe = np.where(degen, 1.0, gap)
    quot = (eval_potential(kind, u_next) - eval_potential(kind, u_prev)) / safe
    return np.where(degen, eval_potential_deriv(kind, 0.5 * (u_next + u_prev)), quot)


def quotient_slope(kind, u_next, u_prev):
    """Derivative of ``difference_quotient`` with respect to ``u_next``."""
    gap = u_next - u_prev
    degen = np.abs(gap) < DEGENERATE_GAP
    safe = np.where(degen, 1.0, gap)
    num = gap * eval_potential_deriv(kind, u_next) + eval_potential(kind, u_prev) - eval_potential(kind, u_next)
    mid = 0.5 * (u_next + u_prev)
    return np.where(degen, 0.5 * eval_potential_second_deriv(kind, mid), num / (safe * safe))


def residual(u_next, u_curr, u_prev, phi_next, kind, c, gamma, dt):
    """Left-hand sides of the discrete equations at level k (length N+1)."""
    a, u, b = u_next, u_curr, u_prev
    c2 = c * c
    f = np.empty_like(a)
    lap = (a[2:] - 2.0 * a[1:-1] + a[:-2]) + (b[2:] - 2.0 * b[1:-1] + b[:-2])
    f[1:-1] = (
        (a[1:-1] - 2.0 * u[1:-1] + b[1:-1]) / (dt * dt)
        - 0.5 * c2 * lap
        + gamma * (a[1:-1] - b[1:-1]) / (2.0 * dt)
        + difference_quotient(kind, a[1:-1], b[1:-1])
    )
    f[0] = a[0] - phi_next
    f[-1] = a[-1] - a[-2]
    return f


def jacobian(u_next, u_prev, kind, c, gamma, dt):
    """(sub, diag, sup) of the Newton Jacobian."""
    n = len(u_next)
    off = -0.5 * c * c
    sub = np.full(n - 1, off)
    sup = np.full(n - 1, off)
    diag = np.empty(n)
    diag[1:-1] = (
        1.0 / (dt * dt) + c * c + gamma / (2.0 * dt)
        + quotient_slope(kind, u_next[1:-1], u_prev[1:-1])
    )
    diag[0] = 1.0
    sup[0] = 0.0
    diag[-1] = 1.0
    sub[-1] = -1.0
    return sub, diag, sup


def newton(u_curr, u_prev, phi_next, kind, c, gamma, dt, tol, max_iter):
    """Solve one implicit step.  Returns (u_next, iterations, status)."""
    u = 2.0 * u_curr - u_prev
    for it in range(1, max_iter + 1):
        f = residual(u, u_curr, u_prev, phi_next, kind, c, gamma, dt)
        sub, diag, sup = jacobian(u, u_prev, kind, c, gamma, dt)
        try:
            y = crout_solve(sub, diag, sup, -f)
        except SingularMatrix:
            return u, it, SINGULAR
        u = u + y
        norm = math.sqrt(float(np.dot(y, y)))
        if not math.isfinite(norm):
            return u, it, DIVERGED
        if norm < tol:
            return u, it, OK
    return u, max_iter, DIVERGED


def advance(states, phi, kind_code, c, gamma, dt, tol, max_iter, iters):
    """Fill ``states[2:]`` in place from the first two rows.

    Returns ``(status, step)``; ``step`` is the index of the level that
    failed, or -1 on success.
    """
    kind = _KINDS[int(kind_code)]
    m = states.shape[0] - 1
    for k in range(1, m):
        u_next, it, status = newton(
            states[k], states[k - 1], phi[k + 1], kind, c, gamma, dt, tol, max_iter
        )
        iters[k + 1] = it
        if status != OK:
            return status, k + 1
        states[k + 1] = u_next
    return OK, -1
