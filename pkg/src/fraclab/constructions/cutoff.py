"""The smooth step and the radial cutoffs built from it."""

from __future__ import annotations

import numpy as np
from scipy.special import expit

__all__ = ["smooth_step", "shell_cutoff"]


def smooth_step(t):
    """``eta(t) = g(t) / (g(t) + g(1 - t))`` with ``g(t) = exp(-1/t)`` for ``t > 0``.

    Identically 0 for ``t <= 0``, identically 1 for ``t >= 1``, C-infinity
    and nondecreasing. Inside ``(0, 1)`` it is evaluated as the logistic
    function of ``1/(1 - t) - 1/t``, which never overflows.

    >>> float(smooth_step(0.5))
    0.5
    """
    t = np.asarray(t, dtype=float)
    inside = (t > 0.0) & (t < 1.0)
    ti = np.where(inside, t, 0.5)
    with np.errstate(over="ignore", divide="ignore"):  # 1/t -> inf for subnormal t; expit saturates correctly
        val = expit(1.0 / (1.0 - ti) - 1.0 / ti)
    out = np.where(t >= 1.0, 1.0, 0.0)
    return np.where(inside, val, out)


def shell_cutoff(radius: float):
    """Radial profile ``rho -> eta(rho - radius)``."""
    radius = float(radius)

    def prof(rho, _a=radius):
        return smooth_step(np.asarray(rho, dtype=float) - _a)

    return prof
