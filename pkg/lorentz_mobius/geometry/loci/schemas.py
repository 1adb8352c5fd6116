from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from common.enums import FormField, LocusKind
from geometry.surfaces.schemas import Array, Domain, SurfacePatch

Evaluator = Callable[[Array, Array], Array]


@dataclass(frozen=True)
class ScalarGrid:
    """
    Field samples at the cell centers of an nu×nv partition of `domain`.

    Masked entries carry no value. When `evaluator` is set, zero-set extraction
    refines crossings against the field itself instead of interpolating.
    """

    values: np.ma.MaskedArray
    domain: Domain
    field: FormField | None = None
    evaluator: Evaluator | None = None

    @property
    def nu(self) -> int:
        return self.values.shape[0]

    @property
    def nv(self) -> int:
        return self.values.shape[1]

    @property
    def cell(self) -> tuple[float, float]:
        return self.domain.cell_size(self.nu, self.nv)

    def node(self, i: Array, j: Array) -> tuple[Array, Array]:
        du, dv = self.cell
        return self.domain.u_min + (i + 0.5) * du, self.domain.v_min + (j + 0.5) * dv

    @classmethod
    def from_function(
        cls, fn: Evaluator, domain: Domain, nu: int, nv: int, field: FormField | None = None
    ) -> ScalarGrid:
        U, V = domain.centers(nu, nv)
        values = np.asarray(fn(U, V), dtype=float)
        return cls(
            values=np.ma.masked_invalid(values),
            domain=domain,
            field=field,
            evaluator=fn,
        )


@dataclass(frozen=True)
class LocusCurve:
    points: Array  # (k, 2) parameter pairs, in chain order
    kind: LocusKind | None
    closed: bool

    def __len__(self) -> int:
        return len(self.points)

    def ambient(self, patch: SurfacePatch) -> Array:
        return patch.position(self.points[:, 0], self.points[:, 1])
