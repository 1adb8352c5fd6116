from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field, replace

import numpy as np
import numpy.typing as npt

Array = npt.NDArray[np.float64]
BoolArray = npt.NDArray[np.bool_]

PositionFn = Callable[[Array, Array], Array]
JetFn = Callable[[Array, Array], "Jet2"]
MaskFn = Callable[[Array, Array], BoolArray]


def everywhere(u: Array, v: Array) -> BoolArray:
    return np.ones(np.broadcast(u, v).shape, dtype=bool)


@dataclass(frozen=True)
class Domain:
    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def __post_init__(self) -> None:
        if not (self.u_min < self.u_max and self.v_min < self.v_max):
            raise ValueError(f"Empty parameter rectangle: {self}")

    @property
    def extent(self) -> float:
        return max(self.u_max - self.u_min, self.v_max - self.v_min)

    def contains(self, u: npt.ArrayLike, v: npt.ArrayLike) -> BoolArray:
        u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
        return (u >= self.u_min) & (u <= self.u_max) & (v >= self.v_min) & (v <= self.v_max)

    def cell_size(self, nu: int, nv: int) -> tuple[float, float]:
        return (self.u_max - self.u_min) / nu, (self.v_max - self.v_min) / nv

    def centers(self, nu: int, nv: int) -> tuple[Array, Array]:
        """Cell-center coordinates, each shaped (nu, nv)."""
        du, dv = self.cell_size(nu, nv)
        us = self.u_min + (np.arange(nu) + 0.5) * du
        vs = self.v_min + (np.arange(nv) + 0.5) * dv
        return np.meshgrid(us, vs, indexing="ij")

    def nodes(self, nu: int, nv: int) -> tuple[Array, Array]:
        us = np.linspace(self.u_min, self.u_max, nu)
        vs = np.linspace(self.v_min, self.v_max, nv)
        return np.meshgrid(us, vs, indexing="ij")


@dataclass(frozen=True)
class Jet2:
    """Position and partials up to order two; arrays shaped (..., 3)."""

    x: Array
    xu: Array
    xv: Array
    xuu: Array
    xuv: Array
    xvv: Array
    orientation: int = 1

    def oriented(self, orientation: int) -> Jet2:
        return replace(self, orientation=orientation)

    def vectors(self) -> tuple[Array, ...]:
        return self.x, self.xu, self.xv, self.xuu, self.xuv, self.xvv

    def __getitem__(self, index) -> Jet2:
        return Jet2(*(a[index] for a in self.vectors()), orientation=self.orientation)


@dataclass(frozen=True)
class SurfacePatch:
    """
    A chart x: U -> R^3_1.

    `jet` supplies exact derivatives when known; patches without it are
    differentiated numerically. `orientation` multiplies x_u × x_v wherever a
    normal direction matters; inversion reverses it.
    """

    name: str
    position: PositionFn
    domain: Domain
    jet: JetFn | None = None
    mask: MaskFn = field(default=everywhere)
    orientation: int = 1

    def __str__(self) -> str:
        return self.name
