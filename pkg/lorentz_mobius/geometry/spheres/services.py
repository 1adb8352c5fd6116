"""
Inverted Euclidean spheres S(p0, r), p0 = (a, b, c), in the chart

    x(u, v) = p0 + r (cos u sin v, sin u sin v, cos v).

With ρ = <x, x> the inverted sphere has K̄_M = r⁶ sin⁴v · f · g / ρ⁸, where

    f = -a² - b² + c² + r² + 4cr cos v + 2r² cos²v
    g = -a² - b² + c² + 4cr cos³v + 3r² cos 2v - 4r h(u) sin³v,  h = a cos u + b sin u,

so its parabolic set is {f = 0} ∪ {g = 0}.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt
from scipy.optimize import minimize_scalar

from common.conf import setting
from common.exceptions import GeometryError
from common.minkowski import Vec3, minkowski_dot
from common.parallel import parallel_map
from geometry.forms.services import euclidean_curvature, euclidean_normal
from geometry.spheres.schemas import OvaloidCheck, SphereSpec
from geometry.surfaces.schemas import Array, SurfacePatch
from geometry.surfaces.services import (
    invert_patch,
    lightcone_census,
    patch_jets,
    sphere_charts,
    translate,
)

log = logging.getLogger(__name__)


class NonconvexWitness(GeometryError):
    pass


class SearchExhausted(GeometryError):
    pass


# --- light cone ----------------------------------------------------------------


def dist_to_lightcone(p0: npt.ArrayLike) -> float:
    a, b, c = np.asarray(p0, dtype=float).reshape(3)
    return abs(math.hypot(a, b) - abs(c)) / math.sqrt(2)


def lightcone_distance_bruteforce(p0: npt.ArrayLike, n_azimuth: int = 720) -> float:
    """Numerical minimum over the generators (cos s, sin s, 1) t of the cone."""
    p = np.asarray(p0, dtype=float).reshape(3)
    norm2 = float(p @ p)

    def line_distance(s: float) -> float:
        d = np.array([math.cos(s), math.sin(s), 1.0]) / math.sqrt(2)
        return math.sqrt(max(norm2 - float(p @ d) ** 2, 0.0))

    grid = np.linspace(-math.pi, math.pi, n_azimuth, endpoint=False)
    values = [line_distance(s) for s in grid]
    k = int(np.argmin(values))
    width = 2 * math.pi / n_azimuth
    result = minimize_scalar(
        line_distance,
        bounds=(grid[k] - width, grid[k] + width),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(min(result.fun, values[k]))


def is_closed_after_inversion(s: SphereSpec) -> bool:
    return (s.planar - abs(s.c)) ** 2 > 2 * s.r * s.r


def meets_lightcone_bruteforce(s: SphereSpec, n: int = 1000) -> bool:
    meets, _ = lightcone_census(sphere_charts(s.center, s.r)[0], n, n)
    return meets


# --- parabolic functions -------------------------------------------------------


def _h(u: npt.ArrayLike, s: SphereSpec) -> Array:
    return s.a * np.cos(u) + s.b * np.sin(u)


def parabolic_f(u: npt.ArrayLike, v: npt.ArrayLike, s: SphereSpec) -> Array:
    _, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    cv = np.cos(v)
    a, b, c, r = s.a, s.b, s.c, s.r
    return -a * a - b * b + c * c + r * r + 4 * c * r * cv + 2 * r * r * cv * cv


def _g_base(v: npt.ArrayLike, s: SphereSpec) -> Array:
    cv = np.cos(v)
    a, b, c, r = s.a, s.b, s.c, s.r
    return -a * a - b * b + c * c + 4 * c * r * cv**3 + 3 * r * r * np.cos(2 * np.asarray(v))


def parabolic_g(u: npt.ArrayLike, v: npt.ArrayLike, s: SphereSpec) -> Array:
    return _g_base(v, s) - 4 * s.r * _h(u, s) * np.sin(v) ** 3


def g_envelopes(v: npt.ArrayLike, s: SphereSpec) -> tuple[Array, Array]:
    """Bounds of g over u at fixed v, from |h(u)| <= √(a² + b²)."""
    spread = 4 * s.r * s.planar * np.sin(v) ** 3
    base = _g_base(v, s)
    return base - spread, base + spread


def g_envelope_minimum(s: SphereSpec, n_samples: int = 10_000) -> float:
    """min over v in [0, π] of g_min: dense sampling, then a bounded local search."""
    v = np.linspace(0.0, math.pi, n_samples)
    g_min, _ = g_envelopes(v, s)
    k = int(np.argmin(g_min))
    lo, hi = v[max(k - 1, 0)], v[min(k + 1, n_samples - 1)]
    result = minimize_scalar(
        lambda t: float(g_envelopes(t, s)[0]),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    return float(min(result.fun, g_min[k]))


def f_cos_roots(s: SphereSpec) -> list[float]:
    """Real roots t = cos v in [-1, 1] of f, i.e. t = (-2c ± √2·√(a²+b²+c²-r²)) / 2r."""
    radicand = s.a**2 + s.b**2 + s.c**2 - s.r**2
    if radicand < 0:
        return []
    spread = math.sqrt(2) * math.sqrt(radicand)
    roots = {(-2 * s.c - spread) / (2 * s.r), (-2 * s.c + spread) / (2 * s.r)}
    return sorted(t for t in roots if -1.0 <= t <= 1.0)


def inverted_kbar(u: npt.ArrayLike, v: npt.ArrayLike, s: SphereSpec) -> Array:
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    e = np.stack([np.cos(u) * np.sin(v), np.sin(u) * np.sin(v), np.cos(v)], axis=-1)
    p = s.center + s.r * e
    rho = minkowski_dot(p, p)
    return s.r**6 * np.sin(v) ** 4 * parabolic_f(u, v, s) * parabolic_g(u, v, s) / rho**8


def is_ovaloid_inverted_sphere(s: SphereSpec) -> bool:
    return s.planar > 2 * s.r + math.hypot(s.c, s.r) or abs(s.c) > 2 * s.r + math.hypot(
        s.planar, s.r
    )


# --- curvature census ----------------------------------------------------------


def parabolic_census(
    patch: SurfacePatch, nu: int, nv: int
) -> tuple[bool, list[tuple[float, float]]]:
    """
    Sign census of the Euclidean Gauss curvature at cell centers.

    Returns whether the sign is constant and bounded away from zero, plus the
    midpoints of neighbouring samples where it changes.
    """
    U, V = patch.domain.centers(nu, nv)
    inside = np.asarray(patch.mask(U, V), dtype=bool)
    K = np.full(U.shape, np.nan)
    if inside.any():
        K[inside] = euclidean_curvature(patch_jets(patch, U[inside], V[inside]))
    finite = np.isfinite(K)
    if not finite.any():
        return True, []

    witnesses: list[tuple[float, float]] = []
    for axis in (0, 1):
        a = [slice(None), slice(None)]
        b = [slice(None), slice(None)]
        a[axis], b[axis] = slice(None, -1), slice(1, None)
        a, b = tuple(a), tuple(b)
        flips = finite[a] & finite[b] & (K[a] * K[b] < 0)
        for i, j in np.argwhere(flips):
            di, dj = (1, 0) if axis == 0 else (0, 1)
            witnesses.append(
                (
                    float((U[i, j] + U[i + di, j + dj]) / 2),
                    float((V[i, j] + V[i + di, j + dj]) / 2),
                )
            )

    values = np.abs(K[finite])
    floor = float(setting("LOCUS_REFINE_TOL", 1e-9)) * float(values.max())
    constant = not witnesses and float(values.min()) > floor
    return constant, witnesses


def parabolic_empty_bruteforce(patch: SurfacePatch, nu: int, nv: int) -> bool:
    empty, witnesses = parabolic_census(patch, nu, nv)
    if witnesses:
        log.debug("%s: %d sign changes of K, first at %s", patch, len(witnesses), witnesses[0])
    return empty


def sphere_parameters(s: SphereSpec, point: npt.ArrayLike) -> tuple[float, float]:
    """(u, v) of an ambient point in the z-polar chart of S(p0, r)."""
    e = (np.asarray(point, dtype=float) - s.center) / s.r
    u = math.atan2(e[1], e[0])
    eps0 = float(setting("SPHERE_EPS0", 1e-3))
    if u < eps0 - math.pi:
        u += 2 * math.pi
    return u, math.acos(float(np.clip(e[2], -1.0, 1.0)))


def ovaloid_check(s: SphereSpec, nu: int | None = None, nv: int | None = None) -> OvaloidCheck:
    """Closedness from the closed form; parabolic census of the inverted sphere in two charts."""
    nu = nu or int(setting("GRID_DEFAULT", 256))
    nv = nv or nu
    empty, witnesses = True, []
    for chart in sphere_charts(s.center, s.r):
        chart_empty, found = parabolic_census(invert_patch(chart), nu, nv)
        empty &= chart_empty
        for u, v in found:
            witnesses.append(sphere_parameters(s, chart.position(np.float64(u), np.float64(v))))
    witnesses.sort()
    check = OvaloidCheck(
        is_closed=is_closed_after_inversion(s), parabolic_empty=empty, witnesses=witnesses
    )
    log.debug("%s: closed=%s parabolic_empty=%s", s, check.is_closed, check.parabolic_empty)
    return check


def ovaloid_sweep(
    specs: Sequence[SphereSpec], nu: int, nv: int
) -> list[tuple[SphereSpec, bool, bool]]:
    """(spec, closed-form verdict, census verdict) for each sphere, in input order."""

    def check(s: SphereSpec) -> tuple[SphereSpec, bool, bool]:
        census = ovaloid_check(s, nu, nv)
        return s, is_ovaloid_inverted_sphere(s), census.is_ovaloid

    return parallel_map(check, specs)


# --- enclosing spheres and translations ----------------------------------------


def surface_sample(patch: SurfacePatch, sample_n: int) -> tuple[Array, Array]:
    """Sampled points and unit Euclidean normals pointing toward the sample centroid."""
    U, V = patch.domain.centers(sample_n, sample_n)
    inside = np.asarray(patch.mask(U, V), dtype=bool)
    j = patch_jets(patch, U[inside], V[inside])
    points = j.x
    normals = euclidean_normal(j)
    lengths = np.linalg.norm(normals, axis=-1)
    if np.any(lengths == 0):
        raise NonconvexWitness(f"{patch} has a singular sample; no normal there")
    normals = normals / lengths[:, None]
    inward = np.sum(normals * (points.mean(axis=0) - points), axis=-1)
    normals[inward < 0] *= -1
    return points, normals


def enclosing_radius(patch: SurfacePatch, sample_n: int = 16) -> float:
    """
    R with S \\ {p} inside the sphere of radius R tangent to S at p for every
    sampled p: R = sup_p d_max²/(2 c(p)) + 1, c(p) = min_q cos θ(q).
    """
    if sample_n < 16:
        raise ValueError(f"sample_n must be at least 16, got {sample_n}")
    points, normals = surface_sample(patch, sample_n)
    if len(points) < 2:
        raise NonconvexWitness(f"{patch} has fewer than two unmasked samples")

    worst = 0.0
    for p, n in zip(points, normals):
        offsets = np.delete(points - p, np.all(points == p, axis=1).nonzero()[0], axis=0)
        distances = np.linalg.norm(offsets, axis=-1)
        cosines = offsets @ n / distances
        c = float(cosines.min())
        if c <= 1e-12:
            raise NonconvexWitness(
                f"{patch}: cos θ = {c:.3e} at p = {np.round(p, 6).tolist()}, surface is not strictly convex"
            )
        worst = max(worst, float(distances.max()) ** 2 / (2 * c))
    radius = worst + 1
    log.debug("Enclosing radius of %s from %d samples: %g", patch, len(points), radius)
    return radius


def _translation_accepted(points: Array, centers: Array, R: float, t: Array) -> bool:
    shifted = points + t
    if np.any(minkowski_dot(shifted, shifted) <= 0):
        return False
    return all(is_ovaloid_inverted_sphere(SphereSpec.of(q + t, R)) for q in centers)


def translation_search(
    patch: SurfacePatch, sample_n: int = 16, radius: float | None = None
) -> Vec3:
    """
    Translation t = (t0, 0, 0) after which every tangent sphere of radius R
    inverts to an ovaloid and the surface misses the light cone.
    """
    R = enclosing_radius(patch, sample_n) if radius is None else radius
    points, normals = surface_sample(patch, sample_n)
    centers = points + R * normals
    scale = max(float(np.max(np.linalg.norm(points, axis=-1))), 1.0)
    max_doublings = int(setting("SEARCH_MAX_DOUBLINGS", 30))

    probes = [0.0] + [scale * 2.0**k for k in range(max_doublings + 1)]
    for t0 in probes:
        t = np.array([t0, 0.0, 0.0])
        if _translation_accepted(points, centers, R, t):
            log.info("Translation (%g, 0, 0) accepted for %s with R = %g", t0, patch, R)
            return Vec3.of(t)
    raise SearchExhausted(
        f"no translation up to {probes[-1]:g} along x0 for {patch} (R = {R:g})"
    )


def translation_sufficient(
    patch: SurfacePatch, t: npt.ArrayLike, nu: int | None = None, nv: int | None = None
) -> bool:
    """Census check that i_M(T(S)) is closed with empty parabolic set."""
    nu = nu or int(setting("GRID_DEFAULT", 256))
    nv = nv or nu
    moved = translate(patch, t)
    meets, _ = lightcone_census(moved, nu, nv)
    if meets:
        return False
    return parabolic_empty_bruteforce(invert_patch(moved), nu, nv)
