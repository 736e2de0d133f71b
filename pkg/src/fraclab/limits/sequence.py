"""Sequences of nonnegative fields with a limit field."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from ..quadrature.fields import ScalarField

__all__ = ["FunctionSequence"]


@dataclass(frozen=True, eq=False)
class FunctionSequence:
    """``i -> u_i`` together with the limit ``u``.

    Members are built on demand and cached. Every member and the limit
    must be flagged nonnegative; the tail descriptors certify the
    weighted integrability whenever an operator is evaluated.
    """

    member_fn: Callable[[float], ScalarField]
    limit_field: ScalarField
    name: str = "sequence"

    def __post_init__(self):
        object.__setattr__(self, "_cached", lru_cache(maxsize=None)(self.member_fn))

    def member(self, i) -> ScalarField:
        f = self._cached(float(i))
        if not f.nonneg:
            raise ValueError(f"member {i} of {self.name} is not flagged nonnegative")
        return f

    @property
    def dimension(self) -> int:
        return self.limit_field.dimension

    @classmethod
    def constant(cls, field: ScalarField, name: str | None = None) -> "FunctionSequence":
        """The sequence ``u_i = u`` for every ``i``."""
        return cls(lambda i, _f=field: _f, field, name or f"constant sequence {field.name}")
