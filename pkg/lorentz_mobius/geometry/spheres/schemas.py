from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from geometry.surfaces.schemas import Array
from geometry.surfaces.services import NonpositiveRadius


@dataclass(frozen=True)
class SphereSpec:
    """Euclidean sphere with center (a, b, c) and radius r."""

    a: float
    b: float
    c: float
    r: float

    def __post_init__(self) -> None:
        if not self.r > 0:
            raise NonpositiveRadius(f"radius must be positive, got {self.r}")

    @property
    def center(self) -> Array:
        return np.array([self.a, self.b, self.c])

    @property
    def planar(self) -> float:
        """√(a² + b²)"""
        return math.hypot(self.a, self.b)

    @classmethod
    def of(cls, center, r: float) -> SphereSpec:
        a, b, c = (float(x) for x in np.asarray(center, dtype=float).reshape(3))
        return cls(a, b, c, float(r))


@dataclass(frozen=True)
class OvaloidCheck:
    is_closed: bool
    parabolic_empty: bool
    witnesses: list[tuple[float, float]] = field(default_factory=list)

    @property
    def is_ovaloid(self) -> bool:
        return self.is_closed and self.parabolic_empty
