"""Tridiagonal linear systems for the Newton iteration."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _backend


@dataclass(frozen=True)
class TridiagonalSystem:
    """Banded system with ``sub``/``sup`` of length n-1 and ``diag``/``rhs`` of length n."""

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        for name in ("sub", "diag", "sup", "rhs"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).ravel())
        n = self.diag.size
        if n < 1:
            raise ValueError("system must have at least one row")
        if self.sub.size != n - 1 or self.sup.size != n - 1 or self.rhs.size != n:
            raise ValueError(
                f"inconsistent lengths: sub={self.sub.size}, diag={n}, "
                f"sup={self.sup.size}, rhs={self.rhs.size}"
            )

    @property
    def size(self) -> int:
        return self.diag.size

    def matvec(self, x):
        x = np.asarray(x, dtype=float)
        y = self.diag * x
        y[1:] += self.sub * x[:-1]
        y[:-1] += self.sup * x[1:]
        return y

    def dense(self):
        return np.diag(self.diag) + np.diag(self.sub, -1) + np.diag(self.sup, 1)


def crout_solve(system: TridiagonalSystem, backend=None) -> np.ndarray:
    """Solve ``system`` by Crout reduction with partial (adjacent-row) pivoting.

    Raises
    ------
    SingularMatrix
        If a pivot falls below 1e-14 times the largest matrix entry.
    """
    return _backend.get(backend).crout_solve(system.sub, system.diag, system.sup, system.rhs)
