"""Independent reference computations used by the tests."""

import numpy as np


def dense_gauss(a, b):
    """Gaussian elimination with partial pivoting on a dense copy."""
    a = np.array(a, dtype=float)
    b = np.array(b, dtype=float)
    n = len(b)
    for col in range(n - 1):
        piv = col + int(np.argmax(np.abs(a[col:, col])))
        if piv != col:
            a[[col, piv]] = a[[piv, col]]
            b[[col, piv]] = b[[piv, col]]
        m = a[col + 1:, col] / a[col, col]
        a[col + 1:, col:] -= np.outer(m, a[col, col:])
        b[col + 1:] -= m * b[col]
    x = np.zeros(n)
    for row in range(n - 1, -1, -1):
        x[row] = (b[row] - a[row, row + 1:] @ x[row + 1:]) / a[row, row]
    return x
