"""Numeric defaults, kept in one place so runs are reproducible."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path

from .errors import DomainError


@dataclass(frozen=True)
class Config:
    quad_nodes: int = 256
    quad_tol: float = 1e-11
    max_quad_nodes: int = 2**17
    transform_tol: float = 1e-10
    bisection_tol: float = 1e-12
    richardson_tol: float = 1e-9
    richardson_max_j: int = 40
    richardson_depth: int = 8
    series_order: int = 16
    verify_numeric_tol: float | None = None

    def __post_init__(self):
        for name in ("quad_tol", "transform_tol", "bisection_tol", "richardson_tol"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive")
        if self.verify_numeric_tol is not None and not self.verify_numeric_tol > 0:
            raise DomainError("verify_numeric_tol must be positive")
        if self.quad_nodes < 2 or self.max_quad_nodes < self.quad_nodes:
            raise DomainError("quadrature node counts are inconsistent")
        if self.series_order < 1:
            raise DomainError("series_order must be at least 1")

    def updated(self, **overrides) -> "Config":
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_file(cls, path: str | Path, base: "Config | None" = None) -> "Config":
        data = json.loads(Path(path).read_text())
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise DomainError(f"unknown config keys: {sorted(unknown)}")
        return (base or cls()).updated(**data)


DEFAULT = Config()
