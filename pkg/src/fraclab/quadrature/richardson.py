"""Central finite differences with Richardson extrapolation (validation oracle)."""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["richardson_gradient", "richardson_hessian", "richardson_table"]


def richardson_table(estimates: list) -> np.ndarray:
    """Extrapolate a sequence of even-order estimates at steps ``h, h/2, h/4, ...``.

    The error expansion is assumed to run in ``h^2, h^4, ...``, so level
    ``k`` of the Neville table uses the factor ``4^k``.
    """
    row = [np.asarray(e, dtype=float) for e in estimates]
    for k in range(1, len(row)):
        f = 4.0 ** k
        row = [row[j + 1] + (row[j + 1] - row[j]) / (f - 1.0) for j in range(len(row) - 1)]
    return row[0]


def _basis(n, i):
    e = np.zeros(n)
    e[i] = 1.0
    return e


def richardson_gradient(f: Callable, x, h0: float = 1e-2, steps: int = 4) -> np.ndarray:
    """Gradient of ``f`` at ``x``; ``f`` may return scalars or arrays.

    The result has shape ``(n,) + shape(f(x))``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = []
    for i in range(x.size):
        e = _basis(x.size, i)
        est = []
        for k in range(steps):
            h = h0 / 2.0 ** k
            est.append((np.asarray(f(x + h * e)) - np.asarray(f(x - h * e))) / (2.0 * h))
        out.append(richardson_table(est))
    return np.array(out)


def richardson_hessian(f: Callable, x, h0: float = 1e-2, steps: int = 4) -> np.ndarray:
    """Symmetric Hessian of a scalar ``f`` at ``x``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n = x.size
    f0 = float(f(x))
    H = np.zeros((n, n))
    for i in range(n):
        ei = _basis(n, i)
        est = []
        for k in range(steps):
            h = h0 / 2.0 ** k
            est.append((float(f(x + h * ei)) - 2.0 * f0 + float(f(x - h * ei))) / (h * h))
        H[i, i] = float(richardson_table(est))
        for j in range(i + 1, n):
            ej = _basis(n, j)
            est = []
            for k in range(steps):
                h = h0 / 2.0 ** k
                v = (float(f(x + h * ei + h * ej)) - float(f(x + h * ei - h * ej))
                     - float(f(x - h * ei + h * ej)) + float(f(x - h * ei - h * ej))) / (4.0 * h * h)
                est.append(v)
            H[i, j] = H[j, i] = float(richardson_table(est))
    return H
