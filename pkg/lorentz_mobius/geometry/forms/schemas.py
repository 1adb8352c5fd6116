from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

Real = float | npt.NDArray[np.float64]


@dataclass(frozen=True)
class FormBundle:
    E: Real
    F: Real
    G: Real
    lbar: Real
    mbar: Real
    nbar: Real
    delta: Real
    kbar: Real
    lpl_disc: Real

    def first(self) -> tuple[Real, Real, Real]:
        return self.E, self.F, self.G

    def second(self) -> tuple[Real, Real, Real]:
        return self.lbar, self.mbar, self.nbar

    def coefficients(self) -> npt.NDArray[np.float64]:
        """(E, F, G, l̄, m̄, n̄) stacked on the last axis."""
        return np.stack(np.broadcast_arrays(*self.first(), *self.second()), axis=-1)


@dataclass(frozen=True)
class BdeCoefficients:
    """A dv² + B du dv + C du² = 0."""

    A: Real
    B: Real
    C: Real

    def as_array(self) -> npt.NDArray[np.float64]:
        return np.stack(np.broadcast_arrays(self.A, self.B, self.C), axis=-1)

    @property
    def discriminant(self) -> Real:
        return self.B * self.B - 4 * self.A * self.C

    def scale(self) -> Real:
        return np.max(np.abs(self.as_array()), axis=-1)

    def residual(self, du: Real, dv: Real) -> Real:
        """Value of the quadratic form on (du, dv), normalised by coefficient size and |d|²."""
        q = self.A * dv * dv + self.B * du * dv + self.C * du * du
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.abs(q) / (self.scale() * (du * du + dv * dv))
