from __future__ import annotations

import logging
from collections import defaultdict

import numpy as np

from common.conf import setting
from common.enums import FormField, LocusKind
from common.parallel import parallel_map, row_chunks
from geometry.forms.services import field_values
from geometry.loci.schemas import LocusCurve, ScalarGrid
from geometry.surfaces.schemas import Array, SurfacePatch
from geometry.surfaces.services import patch_jets

log = logging.getLogger(__name__)

# Corners of cell (i, j) in order (i, j), (i+1, j), (i+1, j+1), (i, j+1); the first corner
# is the high bit of the case index. Saddle cases hold two alternatives, picked by the
# sign at the cell center.
MARCHING_SQUARES_TABLE = [
    (False, []),  # 0000
    (False, [((0, 3), (2, 3))]),  # 0001
    (False, [((1, 2), (2, 3))]),  # 0010
    (False, [((0, 3), (1, 2))]),  # 0011
    (False, [((0, 1), (1, 2))]),  # 0100
    (True, ([((0, 1), (1, 2)), ((0, 3), (2, 3))], [((0, 1), (0, 3)), ((1, 2), (2, 3))])),  # 0101
    (False, [((0, 1), (2, 3))]),  # 0110
    (False, [((0, 1), (0, 3))]),  # 0111
    (False, [((0, 1), (0, 3))]),  # 1000
    (False, [((0, 1), (2, 3))]),  # 1001
    (True, ([((0, 1), (0, 3)), ((1, 2), (2, 3))], [((0, 1), (1, 2)), ((0, 3), (2, 3))])),  # 1010
    (False, [((0, 1), (1, 2))]),  # 1011
    (False, [((0, 3), (1, 2))]),  # 1100
    (False, [((1, 2), (2, 3))]),  # 1101
    (False, [((0, 3), (2, 3))]),  # 1110
    (False, []),  # 1111
]

_CORNER_OFFSETS = ((0, 0), (1, 0), (1, 1), (0, 1))

EdgeKey = tuple[int, int, int, int]


def grid_sample(
    patch: SurfacePatch, field: FormField | str, nu: int, nv: int
) -> ScalarGrid:
    if nu < 2 or nv < 2:
        raise ValueError(f"grid must be at least 2x2, got {nu}x{nv}")
    field = FormField(field)
    U, V = patch.domain.centers(nu, nv)

    def evaluator(u: Array, v: Array) -> Array:
        with np.errstate(all="ignore"):
            return np.asarray(field_values(patch_jets(patch, u, v), field), dtype=float)

    def sample_rows(rows: range) -> Array:
        u, v = U[rows.start : rows.stop], V[rows.start : rows.stop]
        out = np.full(u.shape, np.nan)
        inside = np.asarray(patch.mask(u, v), dtype=bool)
        if inside.any():
            out[inside] = evaluator(u[inside], v[inside])
        return out

    values = np.concatenate(parallel_map(sample_rows, row_chunks(nu)), axis=0)
    grid = ScalarGrid(
        values=np.ma.masked_invalid(values), domain=patch.domain, field=field, evaluator=evaluator
    )
    log.debug(
        "Sampled %s on %s at %dx%d, %d cells masked",
        field.value,
        patch,
        nu,
        nv,
        int(np.ma.getmaskarray(grid.values).sum()),
    )
    return grid


def _edge_key(i: int, j: int, a: int, b: int) -> EdgeKey:
    pa = (i + _CORNER_OFFSETS[a][0], j + _CORNER_OFFSETS[a][1])
    pb = (i + _CORNER_OFFSETS[b][0], j + _CORNER_OFFSETS[b][1])
    lo, hi = sorted((pa, pb))
    return lo + hi


def _cell_segments(grid: ScalarGrid, data: Array) -> list[tuple[EdgeKey, EdgeKey]]:
    valid = np.isfinite(data)
    cell_ok = valid[:-1, :-1] & valid[1:, :-1] & valid[1:, 1:] & valid[:-1, 1:]
    pos = (data > 0).astype(np.int64)
    case = (pos[:-1, :-1] << 3) | (pos[1:, :-1] << 2) | (pos[1:, 1:] << 1) | pos[:-1, 1:]
    cells = np.argwhere(cell_ok & (case != 0) & (case != 15))

    saddles = [(i, j) for i, j in cells if MARCHING_SQUARES_TABLE[case[i, j]][0]]
    center_sign: dict[tuple[int, int], bool] = {}
    if saddles:
        si, sj = np.array(saddles).T
        if grid.evaluator is not None:
            cu, cv = grid.node(si + 0.5, sj + 0.5)
            centers = grid.evaluator(cu, cv)
        else:
            centers = (data[si, sj] + data[si + 1, sj] + data[si + 1, sj + 1] + data[si, sj + 1]) / 4
        center_sign = {(int(i), int(j)): bool(c > 0) for i, j, c in zip(si, sj, centers)}

    segments = []
    for i, j in cells:
        i, j = int(i), int(j)
        saddle, edges = MARCHING_SQUARES_TABLE[case[i, j]]
        if saddle:
            edges = edges[int(center_sign[(i, j)])]
        for (a0, a1), (b0, b1) in edges:
            segments.append((_edge_key(i, j, a0, a1), _edge_key(i, j, b0, b1)))
    return segments


def _crossings(
    grid: ScalarGrid, data: Array, keys: list[EdgeKey], refine_tol: float
) -> dict[EdgeKey, tuple[float, float]]:
    """Zero of the field along each edge: linear guess, then Illinois-modified false position."""
    k = np.array(keys, dtype=np.int64)
    pu, pv = grid.node(k[:, 0], k[:, 1])
    qu, qv = grid.node(k[:, 2], k[:, 3])
    fa = data[k[:, 0], k[:, 1]].astype(float)
    fb = data[k[:, 2], k[:, 3]].astype(float)
    a, b = np.zeros(len(k)), np.ones(len(k))
    t = fa / (fa - fb)

    if grid.evaluator is not None:
        side = np.zeros(len(k), dtype=np.int64)
        for _ in range(int(setting("LOCUS_REFINE_ITER", 20))):
            ft = grid.evaluator(pu + t * (qu - pu), pv + t * (qv - pv))
            active = np.isfinite(ft) & (np.abs(ft) > refine_tol)
            if not active.any():
                break
            right = active & (ft * fb > 0)
            left = active & ~right & (ft * fa > 0)
            fa = np.where(right & (side == -1), fa / 2, fa)
            fb = np.where(left & (side == 1), fb / 2, fb)
            b, fb = np.where(right, t, b), np.where(right, ft, fb)
            a, fa = np.where(left, t, a), np.where(left, ft, fa)
            side = np.where(right, -1, np.where(left, 1, side))
            with np.errstate(divide="ignore", invalid="ignore"):
                step = (fb * a - fa * b) / (fb - fa)
            t = np.where(active & np.isfinite(step), np.clip(step, a, b), t)

    u, v = pu + t * (qu - pu), pv + t * (qv - pv)
    return {key: (float(u[n]), float(v[n])) for n, key in enumerate(keys)}


def _chain(segments: list[tuple[EdgeKey, EdgeKey]]) -> list[tuple[list[EdgeKey], bool]]:
    adjacency: dict[EdgeKey, list[EdgeKey]] = defaultdict(list)
    for p, q in segments:
        adjacency[p].append(q)
        adjacency[q].append(p)

    used: set[EdgeKey] = set()

    def walk(start: EdgeKey) -> list[EdgeKey]:
        path, current = [start], start
        used.add(start)
        while True:
            following = [k for k in adjacency[current] if k not in used]
            if not following:
                return path
            current = following[0]
            used.add(current)
            path.append(current)

    chains = []
    keys = sorted(adjacency)
    for key in keys:
        if len(adjacency[key]) == 1 and key not in used:
            chains.append((walk(key), False))
    for key in keys:
        if key not in used:
            path = walk(key)
            chains.append((path, len(path) > 2 and path[0] in adjacency[path[-1]]))
    return chains


def extract_zero_set(
    grid: ScalarGrid, refine_tol: float | None = None, kind: LocusKind | None = None
) -> list[LocusCurve]:
    """Marching-squares contour of level 0; cells touching a masked sample are skipped."""
    data = np.ma.filled(grid.values.astype(float), np.nan)
    finite = data[np.isfinite(data)]
    if finite.size == 0:
        return []
    if refine_tol is not None and not refine_tol > 0:
        raise ValueError(f"refine_tol must be positive, got {refine_tol}")
    if refine_tol is None:
        relative = float(setting("LOCUS_REFINE_TOL", 1e-9))
        refine_tol = max(relative * float(np.max(np.abs(finite))), np.finfo(float).tiny)

    segments = _cell_segments(grid, data)
    if not segments:
        return []
    keys = sorted({key for segment in segments for key in segment})
    points = _crossings(grid, data, keys, refine_tol)

    curves = [
        LocusCurve(points=np.array([points[k] for k in path]), kind=kind, closed=closed)
        for path, closed in _chain(segments)
    ]
    log.debug("Extracted %d curve(s) from %dx%d grid", len(curves), grid.nu, grid.nv)
    return curves


def locus(
    patch: SurfacePatch,
    kind: LocusKind | str,
    nu: int | None = None,
    nv: int | None = None,
    refine_tol: float | None = None,
) -> list[LocusCurve]:
    kind = LocusKind(kind)
    nu = nu or int(setting("GRID_DEFAULT", 256))
    nv = nv or nu
    grid = grid_sample(patch, kind.field, nu, nv)
    return extract_zero_set(grid, refine_tol, kind)


def ld_locus(patch, nu=None, nv=None, refine_tol=None) -> list[LocusCurve]:
    return locus(patch, LocusKind.LD, nu, nv, refine_tol)


def lpl_locus(patch, nu=None, nv=None, refine_tol=None) -> list[LocusCurve]:
    return locus(patch, LocusKind.LPL, nu, nv, refine_tol)


def parabolic_locus(patch, nu=None, nv=None, refine_tol=None) -> list[LocusCurve]:
    return locus(patch, LocusKind.PARABOLIC, nu, nv, refine_tol)
