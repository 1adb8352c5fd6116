"""
Surface presets addressable by name from the command line:

    sphere:a,b,c,r
    ellipsoid:a,b,c,s0,s1,s2
    graph:<paraboloid|saddle|bowl|monkey|flat>[,half_width]
    plane:<xy|xz|lightlike>
    cylinder[:radius]
    desitter | hyperbolic
"""

from collections.abc import Callable

import numpy as np

from common.exceptions import GeometryError
from geometry.surfaces.schemas import Array, Domain, SurfacePatch
from geometry.surfaces.services import (
    builtin_cylinder,
    builtin_ellipsoid,
    builtin_graph,
    builtin_plane,
    builtin_quadric,
    builtin_sphere,
)


class UnknownPreset(GeometryError, ValueError):
    pass


def _paraboloid(u: Array, v: Array):
    return (u * u + v * v) / 2, u, v, 1.0, 0.0, 1.0


def _saddle(u: Array, v: Array):
    return (u * u - v * v) / 2, u, -v, 1.0, 0.0, -1.0


def _bowl(u: Array, v: Array):
    # shallow enough to stay Riemannian on the default domain
    return (u * u + v * v) / 6, u / 3, v / 3, 1 / 3, 0.0, 1 / 3


def _monkey(u: Array, v: Array):
    return u**3 - 3 * u * v * v, 3 * u * u - 3 * v * v, -6 * u * v, 6 * u, -6 * v, -6 * u


def _flat(u: Array, v: Array):
    return 0.0, 0.0, 0.0, 0.0, 0.0, 0.0


GRAPHS: dict[str, Callable] = {
    "paraboloid": _paraboloid,
    "saddle": _saddle,
    "bowl": _bowl,
    "monkey": _monkey,
    "flat": _flat,
}

GRAPH_HALF_WIDTH = 1.5


def graph(expr_id: str, half_width: float = GRAPH_HALF_WIDTH) -> SurfacePatch:
    try:
        height = GRAPHS[expr_id]
    except KeyError as e:
        raise UnknownPreset(f"unknown graph '{expr_id}', expected one of {sorted(GRAPHS)}") from e
    domain = Domain(-half_width, half_width, -half_width, half_width)
    return builtin_graph(height, domain, expr_id)


def _numbers(raw: str, count: int, preset: str) -> list[float]:
    try:
        values = [float(x) for x in raw.split(",") if x.strip()]
    except ValueError as e:
        raise UnknownPreset(f"{preset}: parameters must be decimal numbers, got '{raw}'") from e
    if len(values) != count:
        raise UnknownPreset(f"{preset}: expected {count} comma-separated numbers, got '{raw}'")
    return values


def resolve(spec: str) -> SurfacePatch:
    """Build a patch from a preset string such as 'sphere:2,0,0,1'."""
    kind, _, params = spec.strip().partition(":")
    kind = kind.lower()

    if kind == "sphere":
        a, b, c, r = _numbers(params, 4, kind)
        return builtin_sphere((a, b, c), r)
    if kind == "ellipsoid":
        a, b, c, s0, s1, s2 = _numbers(params, 6, kind)
        return builtin_ellipsoid((a, b, c), (s0, s1, s2))
    if kind == "graph":
        expr_id, _, width = params.partition(",")
        if width:
            return graph(expr_id, _numbers(width, 1, kind)[0])
        return graph(expr_id)
    if kind == "plane":
        try:
            return builtin_plane(params or "xy")
        except KeyError as e:
            raise UnknownPreset(f"unknown plane '{params}'") from e
    if kind == "cylinder":
        radius = _numbers(params, 1, kind)[0] if params else 1.0
        return builtin_cylinder(radius)
    if kind in ("desitter", "hyperbolic"):
        return builtin_quadric(kind)
    raise UnknownPreset(f"unknown surface preset '{spec}'")


def parse_vector(raw: str) -> np.ndarray:
    return np.asarray(_numbers(raw, 3, "vector"), dtype=float)
