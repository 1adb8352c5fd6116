"""
Minkowski 3-space: pairing, norm, Lorentzian cross product, causal and
region classification, and the pointwise Möbius inversion.

Every function accepts a single vector or a stack of vectors shaped (..., 3);
the last axis holds (x0, x1, x2) with x2 the timelike coordinate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from common.conf import setting
from common.enums import CausalType, Region
from common.exceptions import NearLightCone

Array = npt.NDArray[np.float64]


@dataclass(frozen=True)
class Vec3:
    x0: float
    x1: float
    x2: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(c) for c in (self.x0, self.x1, self.x2)):
            raise ValueError(f"Vec3 components must be finite, got {self!r}")

    def __array__(self, dtype=None, copy=None) -> Array:
        return np.array([self.x0, self.x1, self.x2], dtype=dtype or np.float64)

    def __iter__(self):
        return iter((self.x0, self.x1, self.x2))

    @classmethod
    def of(cls, value: npt.ArrayLike) -> Vec3:
        a, b, c = np.asarray(value, dtype=float).reshape(3)
        return cls(float(a), float(b), float(c))


def _vec(value: npt.ArrayLike) -> Array:
    return np.asarray(value, dtype=float)


def lightcone_tol() -> float:
    return float(setting("LIGHTCONE_TOL", 1e-9))


def minkowski_dot(u: npt.ArrayLike, v: npt.ArrayLike) -> Array:
    u, v = _vec(u), _vec(v)
    return u[..., 0] * v[..., 0] + u[..., 1] * v[..., 1] - u[..., 2] * v[..., 2]


def minkowski_norm(u: npt.ArrayLike) -> Array:
    return np.sqrt(np.abs(minkowski_dot(u, u)))


def lorentz_cross(u: npt.ArrayLike, v: npt.ArrayLike) -> Array:
    """The w with <w, z> = det(u, v, z) for every z."""
    c = np.cross(_vec(u), _vec(v))
    c[..., 2] = -c[..., 2]
    return c


def causal_type(u: npt.ArrayLike, tol: float = 0.0) -> CausalType:
    q = float(minkowski_dot(u, u))
    if abs(q) <= tol:
        return CausalType.LIGHTLIKE
    return CausalType.SPACELIKE if q > 0 else CausalType.TIMELIKE


def region_of(p: npt.ArrayLike, tol: float = 0.0) -> Region:
    p = _vec(p)
    q = float(minkowski_dot(p, p))
    if abs(q) <= tol:
        return Region.LIGHT_CONE
    if q > 0:
        return Region.R1
    # inside the cone z cannot vanish
    return Region.R2 if p[2] > 0 else Region.R3


def mobius_point(p: npt.ArrayLike, tol: float | None = None) -> Array:
    """i_M(p) = p / <p, p>; raises NearLightCone if any point sits within tol of the cone."""
    tol = lightcone_tol() if tol is None else tol
    p = _vec(p)
    rho = minkowski_dot(p, p)
    if np.any(np.abs(rho) <= tol):
        raise NearLightCone(f"|<p,p>| <= {tol:g}; the inversion is undefined on the light cone")
    return p / rho[..., None]


def euclidean_inversion(p: npt.ArrayLike) -> Array:
    """Euclidean counterpart p / |p|^2; kept as a cross-check for the Möbius map."""
    p = _vec(p)
    return p / np.sum(p * p, axis=-1)[..., None]
