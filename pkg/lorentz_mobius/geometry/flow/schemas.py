from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from common.enums import StopReason
from geometry.surfaces.schemas import Array, SurfacePatch


@dataclass(frozen=True)
class DirectionPair:
    """Unit roots (du, dv) of the principal BDE; d1 has the larger polar angle."""

    d1: Array | None
    d2: Array | None
    count: int

    def branch(self, branch: int) -> Array | None:
        if branch not in (1, 2):
            raise ValueError(f"branch must be 1 or 2, got {branch}")
        return self.d1 if branch == 1 else self.d2

    def roots(self) -> list[Array]:
        return [d for d in (self.d1, self.d2) if d is not None]


@dataclass(frozen=True)
class PrincipalLine:
    samples: Array  # (k, 2)
    tangents: Array  # (k, 2), unit root directions at the samples
    branch: int
    step: float
    residual_max: float
    stop_reason: StopReason = StopReason.COMPLETED

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def start(self) -> tuple[float, float]:
        return float(self.samples[0, 0]), float(self.samples[0, 1])

    def ambient(self, patch: SurfacePatch) -> Array:
        return patch.position(self.samples[:, 0], self.samples[:, 1])

    @classmethod
    def straight(
        cls, start: tuple[float, float], angle: float, step: float, n_steps: int
    ) -> PrincipalLine:
        """A parameter-space segment; not a curvature line in general."""
        d = np.array([np.cos(angle), np.sin(angle)])
        t = np.arange(n_steps + 1)[:, None] * step
        return cls(
            samples=np.asarray(start, dtype=float) + t * d,
            tangents=np.tile(d, (n_steps + 1, 1)),
            branch=1,
            step=step,
            residual_max=float("nan"),
        )
