"""Evaluatable functions on R^n with the structure the quadrature needs.

A :class:`ScalarField` carries, besides its values, enough metadata to
integrate it accurately against the singular kernel:

* an optional radial profile about ``center`` together with the radii
  (``breakpoints``) where the profile changes branch,
* a :class:`SmoothWindow` on which pointwise evaluation of the operator
  is legal,
* a :class:`TailDescriptor` describing the field beyond some radius,
  which doubles as the certificate of membership in the weighted class
  ``int |u| / (1 + |x|^{n+2s}) < inf``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace
from typing import Callable

import numpy as np

from ..errors import DivergentTail

__all__ = ["TailDescriptor", "SmoothWindow", "ScalarField"]

ArrayFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class TailDescriptor:
    """Behaviour of a field beyond ``onset`` (a radius about the field center).

    ``kind`` is one of

    ``"compact"``
        the field vanishes for ``|y - center| >= onset``;
    ``"power_law"``
        the field equals ``sum(coef * rho**(-q) for coef, q in terms)``
        exactly for ``rho >= onset``; a constant tail is ``q = 0``;
    ``"bounded"``
        only ``|u| <= bound`` is known beyond ``onset``.
    """

    kind: str
    onset: float
    terms: tuple[tuple[float, float], ...] = ()
    bound: float = 0.0

    def __post_init__(self):
        if self.kind not in ("compact", "power_law", "bounded"):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if not self.onset >= 0.0:
            raise ValueError("tail onset must be nonnegative")

    @classmethod
    def compact(cls, radius: float) -> "TailDescriptor":
        return cls("compact", float(radius))

    @classmethod
    def power_law(cls, coefficient: float, q: float, onset: float) -> "TailDescriptor":
        return cls("power_law", float(onset), ((float(coefficient), float(q)),))

    @classmethod
    def power_sum(cls, terms, onset: float) -> "TailDescriptor":
        terms = tuple((float(a), float(q)) for a, q in terms if a != 0.0)
        if not terms:
            return cls.compact(onset)
        return cls("power_law", float(onset), terms)

    @classmethod
    def bounded(cls, bound: float, onset: float = 0.0) -> "TailDescriptor":
        return cls("bounded", float(onset), bound=float(bound))

    @property
    def exact(self) -> bool:
        """True when the tail is known in closed form."""
        return self.kind in ("compact", "power_law")

    def certify(self, sigma: float) -> None:
        """Raise :class:`DivergentTail` unless the tail is integrable against the kernel."""
        if self.kind == "power_law":
            for coef, q in self.terms:
                if coef != 0.0 and not q > -2.0 * sigma:
                    raise DivergentTail(
                        f"power-law tail |y|^-{q} is not integrable against the kernel "
                        f"for sigma={sigma} (need q > -2 sigma)"
                    )

    def value(self, rho):
        rho = np.asarray(rho, dtype=float)
        if self.kind == "compact":
            return np.zeros_like(rho)
        if self.kind == "power_law":
            out = np.zeros_like(rho)
            for coef, q in self.terms:
                out = out + coef * rho ** (-q)
            return out
        raise ValueError("bounded tails have no closed form")

    def transformed(self, amplitude: float, scale: float) -> "TailDescriptor":
        """Tail of ``amplitude * u(scale * y)``."""
        onset = self.onset / scale
        if self.kind == "compact":
            return replace(self, onset=onset)
        if self.kind == "power_law":
            terms = tuple((amplitude * a * scale ** (-q), q) for a, q in self.terms)
            return replace(self, onset=onset, terms=terms)
        return replace(self, onset=onset, bound=abs(amplitude) * self.bound)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "onset": self.onset,
                "terms": [list(t) for t in self.terms], "bound": self.bound}


@dataclass(frozen=True)
class SmoothWindow:
    """Open annulus ``inner < |y - center| < outer`` where the field is smooth.

    ``inner=None`` means a ball; the default window is all of R^n.
    """

    outer: float = math.inf
    inner: float | None = None

    def margin(self, radius: float) -> float:
        """Distance from a point at ``radius`` to the window boundary (negative outside)."""
        m = self.outer - radius
        if self.inner is not None:
            m = min(m, radius - self.inner)
        return m

    def transformed(self, scale: float) -> "SmoothWindow":
        inner = None if self.inner is None else self.inner / scale
        return SmoothWindow(self.outer / scale, inner)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """A real function on R^n together with its quadrature metadata.

    ``func`` maps an array of points of shape ``(..., n)`` to values of
    shape ``(...)``. For radial fields build with :meth:`from_profile`, in
    which case ``profile`` maps radii (about ``center``) to values.
    """

    dimension: int
    func: ArrayFn
    tail: TailDescriptor
    profile: ArrayFn | None = None
    breakpoints: tuple[float, ...] = ()
    center: tuple[float, ...] | None = None
    window: SmoothWindow = dc_field(default_factory=SmoothWindow)
    nonneg: bool = False
    support_inner: float = 0.0
    holder_alpha: float = 1.0
    name: str = "field"

    # -- construction -----------------------------------------------------
    @classmethod
    def from_profile(
        cls,
        n: int,
        profile: ArrayFn,
        tail: TailDescriptor,
        breakpoints=(),
        *,
        center=None,
        window: SmoothWindow | None = None,
        nonneg: bool = False,
        support_inner: float = 0.0,
        name: str = "radial field",
    ) -> "ScalarField":
        c = None if center is None else tuple(float(v) for v in center)
        c_arr = np.zeros(n) if c is None else np.asarray(c)

        def func(points, _p=profile, _c=c_arr):
            pts = np.asarray(points, dtype=float)
            return _p(np.linalg.norm(pts - _c, axis=-1))

        return cls(
            dimension=int(n),
            func=func,
            tail=tail,
            profile=profile,
            breakpoints=tuple(sorted(float(b) for b in breakpoints)),
            center=c,
            window=window or SmoothWindow(),
            nonneg=nonneg,
            support_inner=float(support_inner),
            name=name,
        )

    @classmethod
    def constant(cls, n: int, value: float, name: str | None = None) -> "ScalarField":
        value = float(value)

        def profile(rho, _v=value):
            return np.full(np.shape(rho), _v)

        return cls.from_profile(
            n, profile, TailDescriptor.power_law(value, 0.0, 0.0),
            nonneg=value >= 0.0, name=name or f"constant {value:g}",
        )

    # -- evaluation -------------------------------------------------------
    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        if self.dimension == 1 and (pts.ndim == 0 or pts.shape[-1] != 1):
            pts = pts[..., None]
        elif pts.shape[-1] != self.dimension:
            raise ValueError(f"expected points with last axis {self.dimension}, got {pts.shape}")
        return np.asarray(self.func(pts), dtype=float)

    @property
    def is_radial(self) -> bool:
        return self.profile is not None

    @property
    def center_array(self) -> np.ndarray:
        if self.center is None:
            return np.zeros(self.dimension)
        return np.asarray(self.center, dtype=float)

    def radius_of(self, x) -> float:
        return float(np.linalg.norm(np.asarray(x, dtype=float) - self.center_array))

    def margin_at(self, x) -> float:
        return self.window.margin(self.radius_of(x))

    # -- derived fields ---------------------------------------------------
    def transformed(self, amplitude: float = 1.0, scale: float = 1.0, shift=None,
                    name: str | None = None) -> "ScalarField":
        """Field ``y -> amplitude * u(scale * (y - shift))``."""
        amplitude = float(amplitude)
        scale = float(scale)
        if not scale > 0.0:
            raise ValueError("scale must be positive")
        n = self.dimension
        a = np.zeros(n) if shift is None else np.asarray(shift, dtype=float).reshape(n)
        base = self.func

        def func(points, _b=base, _A=amplitude, _mu=scale, _a=a):
            return _A * _b(_mu * (np.asarray(points, dtype=float) - _a))

        profile = None
        if self.profile is not None:
            p = self.profile

            def profile(rho, _p=p, _A=amplitude, _mu=scale):
                return _A * _p(_mu * np.asarray(rho, dtype=float))

        new_center = a + self.center_array / scale
        return replace(
            self,
            func=func,
            profile=profile,
            tail=self.tail.transformed(amplitude, scale),
            breakpoints=tuple(b / scale for b in self.breakpoints),
            center=None if not np.any(new_center) else tuple(new_center.tolist()),
            window=self.window.transformed(scale),
            nonneg=self.nonneg and amplitude >= 0.0,
            support_inner=self.support_inner / scale,
            name=name or f"{amplitude:g}*{self.name}({scale:g}*(x-a))",
        )

    def translated(self, shift) -> "ScalarField":
        return self.transformed(shift=shift, name=f"{self.name} translated")

    def generic(self) -> "ScalarField":
        """Same field with the radial profile hidden (breakpoints stay as hints)."""
        return replace(self, profile=None, name=f"{self.name} (generic)")
