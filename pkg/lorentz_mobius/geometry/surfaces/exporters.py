import logging
from dataclasses import dataclass
from pathlib import Path
from typing import TextIO

import numpy as np

from common.exporters import fmt, open_output
from geometry.surfaces.schemas import Array, SurfacePatch

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mesh:
    vertices: Array  # (k, 3)
    triangles: np.ndarray  # (t, 3), zero-based

    @property
    def is_empty(self) -> bool:
        return len(self.triangles) == 0


def triangulate(patch: SurfacePatch, nu: int, nv: int) -> Mesh:
    """Triangulated node grid; masked vertices and every triangle touching them are dropped."""
    if nu < 2 or nv < 2:
        raise ValueError(f"mesh grid must be at least 2x2, got {nu}x{nv}")
    U, V = patch.domain.nodes(nu, nv)
    keep = np.asarray(patch.mask(U, V), dtype=bool)
    positions = patch.position(U, V)
    keep &= np.all(np.isfinite(positions), axis=-1)

    index = np.full((nu, nv), -1, dtype=np.int64)
    index[keep] = np.arange(int(keep.sum()))

    a, b = index[:-1, :-1], index[1:, :-1]
    c, d = index[1:, 1:], index[:-1, 1:]
    quads = np.stack([a.ravel(), b.ravel(), c.ravel(), d.ravel()], axis=-1)
    quads = quads[np.all(quads >= 0, axis=1)]
    # each quad splits along its a-c diagonal; both halves stay adjacent in the file
    triangles = np.stack([quads[:, [0, 1, 2]], quads[:, [0, 2, 3]]], axis=1).reshape(-1, 3)
    return Mesh(vertices=positions[keep], triangles=triangles)


def write_obj(mesh: Mesh, stream: TextIO, comment: str = "") -> None:
    if comment:
        stream.write(f"# {comment}\n")
    for x0, x1, x2 in mesh.vertices:
        stream.write(f"v {fmt(x0)} {fmt(x1)} {fmt(x2)}\n")
    for i, j, k in mesh.triangles:
        stream.write(f"f {i + 1} {j + 1} {k + 1}\n")


def export_mesh(patch: SurfacePatch, nu: int, nv: int, path: str | Path) -> Mesh:
    mesh = triangulate(patch, nu, nv)
    if mesh.is_empty:
        log.warning("Mesh of %s is empty: every cell is masked", patch)
    with open_output(path) as stream:
        write_obj(mesh, stream, comment=f"{patch} {nu}x{nv}")
    log.info("Wrote %d vertices, %d triangles to %s", len(mesh.vertices), len(mesh.triangles), path)
    return mesh
