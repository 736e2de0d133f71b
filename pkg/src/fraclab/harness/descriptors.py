"""Named test fields with closed-form operator values, and the descriptor parser."""

from __future__ import annotations

import math

import numpy as np
from scipy.special import hyp1f1

from ..constructions import make_step_family, make_u_lambda, make_v_j
from ..quadrature.fields import ScalarField, TailDescriptor
from ..specfun import FracParams

__all__ = ["gaussian_field", "gaussian_operator", "poisson_field", "poisson_operator", "parse_field"]


def gaussian_field(n: int) -> ScalarField:
    """``exp(-|x|^2)``."""

    def prof(rho):
        return np.exp(-np.asarray(rho, dtype=float) ** 2)

    return ScalarField.from_profile(n, prof, TailDescriptor.bounded(1.0, 0.0), nonneg=True, name="gaussian")


def gaussian_operator(x, params: FracParams) -> float:
    """``(-Delta)^s exp(-|x|^2) = 4^s G(n/2+s)/G(n/2) 1F1(n/2+s; n/2; -|x|^2)``."""
    n, s = params.n, params.sigma
    r2 = float(np.sum(np.asarray(x, dtype=float) ** 2))
    k = 4.0 ** s * math.gamma(n / 2 + s) / math.gamma(n / 2)
    return k * float(hyp1f1(n / 2 + s, n / 2, -r2))


def poisson_field() -> ScalarField:
    """``1 / (1 + x^2)`` on the line."""

    def prof(rho):
        return 1.0 / (1.0 + np.asarray(rho, dtype=float) ** 2)

    return ScalarField.from_profile(1, prof, TailDescriptor.bounded(1.0, 1.0), nonneg=True, name="poisson")


def poisson_operator(x: float) -> float:
    """Half Laplacian of ``1/(1+x^2)``: ``(1 - x^2) / (1 + x^2)^2`` (harmonic extension)."""
    return (1.0 - x * x) / (1.0 + x * x) ** 2


def parse_field(desc: str, params: FracParams, p: float = 3.0, q: float = 1.0) -> ScalarField:
    """Build a field from ``kind[:arg]``.

    Kinds: ``constant:<value>``, ``gaussian``, ``poisson`` (n = 1),
    ``W:<lam>``, ``V:<j>``, ``U:<lam>`` (step fields), ``v:<j>`` (mollified
    family), ``u:<lam>`` (blow-up family with exponents ``p``, ``q``).
    """
    kind, _, arg = desc.partition(":")
    kind = kind.strip()
    n = params.n
    if kind == "constant":
        return ScalarField.constant(n, float(arg or 1.0))
    if kind == "gaussian":
        return gaussian_field(n)
    if kind == "poisson":
        if n != 1:
            raise ValueError("the poisson field is one-dimensional")
        return poisson_field()
    if kind in ("W", "V", "U"):
        return make_step_family(kind, float(arg), params, p=p if kind == "U" else None).field
    if kind == "v":
        return make_v_j(float(arg), params).v
    if kind == "u":
        return make_u_lambda(n, params.sigma, p, q, float(arg)).u
    raise ValueError(f"unknown field descriptor {desc!r}")
