"""Experiment configuration: a flat ``key = value`` file plus overrides.

File format
-----------
One ``key = value`` per line; ``#`` starts a comment; blank lines are
ignored. Lists are comma separated. Keys prefixed ``quad.`` override the
quadrature settings (e.g. ``quad.rel_tol = 1e-9``). Unknown keys are an
error.

Recognised keys: ``theorem``, ``n``, ``sigma``, ``p``, ``q``,
``lambda_grid``, ``j_grid``, ``x_samples`` (radii along the first axis),
``index_grid``, ``radius_grid``, ``index_method``, ``radius_method``,
``seed``, ``out``, ``csv_dir``.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from ..quadrature.rules import QuadConfig

__all__ = ["ExperimentConfig", "parse_config_text", "load_config"]

_THEOREMS = ("thm11_b", "thm12", "thm13", "oracles")
_LISTS = {"lambda_grid", "j_grid", "x_samples", "index_grid", "radius_grid"}
_INTS = {"n", "seed"}
_FLOATS = {"sigma", "p", "q"}
_STRINGS = {"theorem", "index_method", "radius_method", "out", "csv_dir"}
# output locations do not change the computation
_NOT_HASHED = {"out", "csv_dir"}


@dataclass(frozen=True)
class ExperimentConfig:
    theorem: str = "oracles"
    n: int = 1
    sigma: float = 0.5
    p: float = 3.0
    q: float = 1.0
    lambda_grid: tuple = (1.0, 10.0, 100.0)
    j_grid: tuple = (4.0, 16.0, 64.0)
    x_samples: tuple = (0.0, 0.25, 0.5)
    index_grid: tuple = ()  # empty: chosen from the radius grid
    radius_grid: tuple = (10.0, 20.0, 40.0, 80.0)
    index_method: str = "richardson"
    radius_method: str = "richardson"
    seed: int = 12345
    quad: dict = field(default_factory=dict)
    out: str | None = None
    csv_dir: str | None = None

    def __post_init__(self):
        if self.theorem not in _THEOREMS:
            raise ValueError(f"theorem must be one of {_THEOREMS}, got {self.theorem!r}")
        if self.n < 1:
            raise ValueError("n must be a positive integer")
        if not 0.0 < self.sigma < 1.0:
            raise ValueError("sigma must lie in (0, 1)")
        for name in ("lambda_grid", "j_grid", "radius_grid", "index_grid"):
            g = getattr(self, name)
            if name != "index_grid" and not g:
                raise ValueError(f"{name} must be nonempty")
            if any(b <= a for a, b in zip(g, g[1:])) or any(v <= 0 for v in g):
                raise ValueError(f"{name} must be positive and strictly increasing")
        if self.theorem == "thm13":
            if not self.q > -2.0 * self.sigma:
                raise ValueError("need q > -2 sigma")
            if self.lambda_grid[0] < 1.0:
                raise ValueError("lambda values must be at least 1")
        if self.theorem == "thm12" and self.j_grid[0] < 1.0:
            raise ValueError("j values must be at least 1")
        for m in (self.index_method, self.radius_method):
            if m not in ("last", "richardson"):
                raise ValueError(f"unknown extrapolation {m!r}")
        self.quad_config()  # validates the overrides

    def quad_config(self) -> QuadConfig:
        return QuadConfig(**self.quad)

    def with_updates(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        if "quad" in kw:
            kw["quad"] = {**self.quad, **kw["quad"]}
        return replace(self, **kw)

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in _LISTS:
            d[k] = list(d[k])
        return d

    def config_hash(self) -> str:
        d = {k: v for k, v in self.to_dict().items() if k not in _NOT_HASHED}
        blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _convert(key: str, raw: str):
    raw = raw.strip()
    if key in _LISTS:
        return tuple(float(v) for v in raw.split(",") if v.strip())
    if key in _INTS:
        return int(raw)
    if key in _FLOATS:
        return float(raw)
    if key in _STRINGS:
        return raw
    raise KeyError(key)


def _quad_value(key: str, raw: str):
    types = {f.name: f.type for f in fields(QuadConfig)}
    if key not in types:
        raise KeyError(f"quad.{key}")
    raw = raw.strip()
    if key == "far_policy":
        return raw
    if key == "near_radius":
        return None if raw.lower() == "none" else float(raw)
    if "int" in str(types[key]):
        return int(raw)
    return float(raw)


def parse_config_text(text: str) -> dict:
    """Parse the flat format into keyword arguments for :class:`ExperimentConfig`."""
    out: dict = {}
    quad: dict = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value")
        key, raw = (s.strip() for s in line.split("=", 1))
        try:
            if key.startswith("quad."):
                quad[key[5:]] = _quad_value(key[5:], raw)
            else:
                out[key] = _convert(key, raw)
        except KeyError as exc:
            raise ValueError(f"line {lineno}: unknown key {exc.args[0]!r}") from None
    if quad:
        out["quad"] = quad
    return out


def load_config(path: str | Path | None, **overrides) -> ExperimentConfig:
    """Read a config file (optional) and apply overrides; overrides win."""
    base = parse_config_text(Path(path).read_text()) if path else {}
    quad = {**base.pop("quad", {}), **(overrides.pop("quad", None) or {})}
    base.update({k: v for k, v in overrides.items() if v is not None})
    if quad:
        base["quad"] = quad
    return ExperimentConfig(**base)
