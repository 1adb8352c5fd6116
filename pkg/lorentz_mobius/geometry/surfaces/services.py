from __future__ import annotations

import logging
import math
from collections.abc import Callable
from dataclasses import replace

import numpy as np
import numpy.typing as npt
from scipy.optimize import least_squares

from common.conf import setting
from common.exceptions import GeometryError, Masked, OutOfDomain
from common.minkowski import lightcone_tol, minkowski_dot
from geometry.surfaces.schemas import Array, Domain, Jet2, SurfacePatch

log = logging.getLogger(__name__)

HeightFn = Callable[[Array, Array], tuple[Array, Array, Array, Array, Array, Array]]


class NonpositiveRadius(GeometryError, ValueError):
    pass


class NonpositiveSemiaxis(GeometryError, ValueError):
    pass


# Coordinate order of the trigonometric chart; "x" moves the chart poles onto the x-axis.
_POLAR_AXES = {"z": [0, 1, 2], "x": [2, 0, 1]}


def fd_step(patch: SurfacePatch) -> float:
    h_min = float(setting("FD_STEP_MIN", 1e-5))
    return max(h_min, h_min * patch.domain.extent)


def fd_jet(patch: SurfacePatch, u: npt.ArrayLike, v: npt.ArrayLike, h: float) -> Jet2:
    """Second-order central differences of the position map."""
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    p = patch.position
    x = p(u, v)
    pu, mu = p(u + h, v), p(u - h, v)
    pv, mv = p(u, v + h), p(u, v - h)
    xuv = (p(u + h, v + h) - p(u + h, v - h) - p(u - h, v + h) + p(u - h, v - h)) / (4 * h * h)
    return Jet2(
        x=x,
        xu=(pu - mu) / (2 * h),
        xv=(pv - mv) / (2 * h),
        xuu=(pu - 2 * x + mu) / (h * h),
        xuv=xuv,
        xvv=(pv - 2 * x + mv) / (h * h),
    )


def patch_jets(
    patch: SurfacePatch, u: npt.ArrayLike, v: npt.ArrayLike, h: float | None = None
) -> Jet2:
    """Batch jets without domain or mask checks; callers sample inside the mask."""
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    if patch.jet is not None:
        jet = patch.jet(u, v)
    else:
        jet = fd_jet(patch, u, v, h or fd_step(patch))
    return jet.oriented(patch.orientation)


def _check_point(patch: SurfacePatch, u: float, v: float) -> None:
    if not bool(patch.domain.contains(u, v)):
        raise OutOfDomain(f"({u:g}, {v:g}) is outside the domain of {patch}")
    if not bool(patch.mask(np.float64(u), np.float64(v))):
        raise Masked(f"({u:g}, {v:g}) is masked on {patch}")


def evaluate(patch: SurfacePatch, u: float, v: float) -> Array:
    _check_point(patch, u, v)
    return patch.position(np.float64(u), np.float64(v))


def jet2(patch: SurfacePatch, u: float, v: float, h: float | None = None) -> Jet2:
    _check_point(patch, u, v)
    if patch.jet is None:
        h = h or fd_step(patch)
        for du, dv in ((h, h), (-h, -h), (h, -h), (-h, h)):
            if not bool(patch.domain.contains(u + du, v + dv)):
                raise OutOfDomain(
                    f"({u:g}, {v:g}) is closer than the difference step {h:g} to the boundary"
                )
    return patch_jets(patch, u, v, h)


# --- presets -----------------------------------------------------------------


def _trig_jet(
    u: Array, v: Array, center: Array, semiaxes: Array, order: list[int]
) -> Jet2:
    cu, su, cv, sv = np.cos(u), np.sin(u), np.cos(v), np.sin(v)
    zero = np.zeros_like(u)

    def vec(a, b, c):
        stacked = np.stack([a, b, c], axis=-1)[..., order]
        return stacked * semiaxes

    e = vec(cu * sv, su * sv, cv)
    return Jet2(
        x=e + center,
        xu=vec(-su * sv, cu * sv, zero),
        xv=vec(cu * cv, su * cv, -sv),
        xuu=vec(-cu * sv, -su * sv, zero),
        xuv=vec(-su * cv, cu * cv, zero),
        xvv=vec(-cu * sv, -su * sv, -cv),
    )


def _trig_domain() -> Domain:
    eps0 = float(setting("SPHERE_EPS0", 1e-3))
    return Domain(eps0 - math.pi, eps0 + math.pi, 0.0, math.pi)


def builtin_ellipsoid(
    center: npt.ArrayLike, semiaxes: npt.ArrayLike, polar_axis: str = "z"
) -> SurfacePatch:
    center = np.asarray(center, dtype=float).reshape(3)
    axes = np.asarray(semiaxes, dtype=float).reshape(3)
    if np.any(axes <= 0):
        raise NonpositiveSemiaxis(f"semiaxes must be positive, got {axes.tolist()}")
    order = _POLAR_AXES[polar_axis]

    def jet(u: Array, v: Array) -> Jet2:
        return _trig_jet(u, v, center, axes, order)

    def position(u: Array, v: Array) -> Array:
        return jet(*np.broadcast_arrays(u, v)).x

    name = "ellipsoid({}; {})".format(
        ",".join(f"{c:g}" for c in center), ",".join(f"{a:g}" for a in axes)
    )
    if polar_axis != "z":
        name += f"[{polar_axis}-polar]"
    return SurfacePatch(name=name, position=position, domain=_trig_domain(), jet=jet)


def builtin_sphere(center: npt.ArrayLike, r: float, polar_axis: str = "z") -> SurfacePatch:
    if not r > 0:
        raise NonpositiveRadius(f"radius must be positive, got {r}")
    patch = builtin_ellipsoid(center, (r, r, r), polar_axis)
    c = np.asarray(center, dtype=float).reshape(3)
    name = "sphere({}; {:g})".format(",".join(f"{x:g}" for x in c), r)
    if polar_axis != "z":
        name += f"[{polar_axis}-polar]"
    return replace(patch, name=name)


def sphere_charts(center: npt.ArrayLike, r: float) -> tuple[SurfacePatch, SurfacePatch]:
    """Two charts whose pole pairs are disjoint, so together they cover the sphere."""
    return builtin_sphere(center, r, "z"), builtin_sphere(center, r, "x")


def builtin_graph(height: HeightFn, domain: Domain, name: str) -> SurfacePatch:
    def jet(u: Array, v: Array) -> Jet2:
        h, hu, hv, huu, huv, hvv = height(u, v)
        zero, one = np.zeros_like(u), np.ones_like(u)

        def vec(a, b, c):
            return np.stack(np.broadcast_arrays(a, b, c), axis=-1)

        return Jet2(
            x=vec(u, v, h),
            xu=vec(one, zero, hu),
            xv=vec(zero, one, hv),
            xuu=vec(zero, zero, huu),
            xuv=vec(zero, zero, huv),
            xvv=vec(zero, zero, hvv),
        )

    def position(u: Array, v: Array) -> Array:
        return jet(*np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))).x

    return SurfacePatch(name=f"graph:{name}", position=position, domain=domain, jet=jet)


def _linear_patch(name: str, a: Array, b: Array, domain: Domain) -> SurfacePatch:
    """x(u, v) = u·a + v·b."""

    def jet(u: Array, v: Array) -> Jet2:
        x = u[..., None] * a + v[..., None] * b
        zero = np.zeros_like(x)
        return Jet2(
            x=x,
            xu=np.broadcast_to(a, x.shape).copy(),
            xv=np.broadcast_to(b, x.shape).copy(),
            xuu=zero,
            xuv=zero.copy(),
            xvv=zero.copy(),
        )

    def position(u: Array, v: Array) -> Array:
        return jet(*np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))).x

    return SurfacePatch(name=name, position=position, domain=domain, jet=jet)


def builtin_plane(kind: str = "xy", half_width: float = 1.0) -> SurfacePatch:
    spans = {
        "xy": ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)),
        "xz": ((1.0, 0.0, 0.0), (0.0, 0.0, 1.0)),
        "lightlike": ((1.0, 0.0, 0.0), (0.0, 1.0, 1.0)),
    }
    a, b = spans[kind]
    domain = Domain(-half_width, half_width, -half_width, half_width)
    return _linear_patch(f"plane:{kind}", np.array(a), np.array(b), domain)


def builtin_cylinder(radius: float = 1.0, height: float = 1.0) -> SurfacePatch:
    """(r cos u, r sin u, v)."""

    def jet(u: Array, v: Array) -> Jet2:
        cu, su, zero = np.cos(u), np.sin(u), np.zeros_like(u)

        def vec(a, b, c):
            return np.stack(np.broadcast_arrays(a, b, c), axis=-1)

        return Jet2(
            x=vec(radius * cu, radius * su, v),
            xu=vec(-radius * su, radius * cu, zero),
            xv=vec(zero, zero, np.ones_like(u)),
            xuu=vec(-radius * cu, -radius * su, zero),
            xuv=vec(zero, zero, zero),
            xvv=vec(zero, zero, zero),
        )

    def position(u: Array, v: Array) -> Array:
        return jet(*np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))).x

    domain = Domain(-math.pi, math.pi, -height, height)
    return SurfacePatch(name=f"cylinder({radius:g})", position=position, domain=domain, jet=jet)


def builtin_quadric(kind: str) -> SurfacePatch:
    """
    The two fixed sets of the inversion: the de Sitter sphere <p,p> = 1 and the
    upper sheet of the hyperbolic plane <p,p> = -1, in hyperbolic polar charts.
    """

    def jet(u: Array, v: Array) -> Jet2:
        cu, su = np.cos(u), np.sin(u)
        ch, sh = np.cosh(v), np.sinh(v)
        zero = np.zeros_like(u)
        # radial profile (r(v), z(v)) and its derivatives
        if kind == "desitter":
            r, rv, rvv, z, zv, zvv = ch, sh, ch, sh, ch, sh
        else:
            r, rv, rvv, z, zv, zvv = sh, ch, sh, ch, sh, ch

        def vec(a, b, c):
            return np.stack(np.broadcast_arrays(a, b, c), axis=-1)

        return Jet2(
            x=vec(r * cu, r * su, z),
            xu=vec(-r * su, r * cu, zero),
            xv=vec(rv * cu, rv * su, zv),
            xuu=vec(-r * cu, -r * su, zero),
            xuv=vec(-rv * su, rv * cu, zero),
            xvv=vec(rvv * cu, rvv * su, zvv),
        )

    def position(u: Array, v: Array) -> Array:
        return jet(*np.broadcast_arrays(np.asarray(u, float), np.asarray(v, float))).x

    v_range = (-1.0, 1.0) if kind == "desitter" else (0.0, 1.5)
    domain = Domain(-math.pi, math.pi, *v_range)
    return SurfacePatch(name=kind, position=position, domain=domain, jet=jet)


# --- transforms --------------------------------------------------------------


def translate(patch: SurfacePatch, t: npt.ArrayLike) -> SurfacePatch:
    t = np.asarray(t, dtype=float).reshape(3)
    source_jet = patch.jet

    def position(u: Array, v: Array) -> Array:
        return patch.position(u, v) + t

    jet = None
    if source_jet is not None:

        def jet(u: Array, v: Array) -> Jet2:
            j = source_jet(u, v)
            return replace(j, x=j.x + t)

    def mask(u: Array, v: Array):
        return patch.mask(u, v)

    name = "{}+({})".format(patch.name, ",".join(f"{c:g}" for c in t))
    return replace(patch, name=name, position=position, jet=jet, mask=mask)


def inverted_jet(j: Jet2) -> Jet2:
    """Jet of i_M∘φ from the jet of φ; rational in φ and its partials."""
    dot = minkowski_dot
    x, xu, xv, xuu, xuv, xvv = j.vectors()
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        rho = dot(x, x)[..., None]
        ru = 2 * dot(x, xu)[..., None]
        rv = 2 * dot(x, xv)[..., None]
        ruu = 2 * (dot(xu, xu) + dot(x, xuu))[..., None]
        ruv = 2 * (dot(xu, xv) + dot(x, xuv))[..., None]
        rvv = 2 * (dot(xv, xv) + dot(x, xvv))[..., None]
        rho2, rho3 = rho * rho, rho * rho * rho
        return Jet2(
            x=x / rho,
            xu=xu / rho - x * ru / rho2,
            xv=xv / rho - x * rv / rho2,
            xuu=xuu / rho - 2 * xu * ru / rho2 - x * ruu / rho2 + 2 * x * ru * ru / rho3,
            xuv=xuv / rho
            - (xu * rv + xv * ru) / rho2
            - x * ruv / rho2
            + 2 * x * ru * rv / rho3,
            xvv=xvv / rho - 2 * xv * rv / rho2 - x * rvv / rho2 + 2 * x * rv * rv / rho3,
            orientation=j.orientation,
        )


def invert_patch(patch: SurfacePatch, tol: float | None = None) -> SurfacePatch:
    """i_M∘φ, masked where |<φ, φ>| <= tol; inversion reverses the chart orientation."""
    tol = lightcone_tol() if tol is None else tol

    def position(u: Array, v: Array) -> Array:
        p = patch.position(u, v)
        with np.errstate(divide="ignore", invalid="ignore"):
            return p / minkowski_dot(p, p)[..., None]

    def mask(u: Array, v: Array):
        p = patch.position(u, v)
        rho = minkowski_dot(p, p)
        return patch.mask(u, v) & np.isfinite(rho) & (np.abs(rho) > tol)

    jet = None
    if patch.jet is not None:

        def jet(u: Array, v: Array) -> Jet2:
            return inverted_jet(patch_jets(patch, u, v))

    return SurfacePatch(
        name=f"invert({patch.name})",
        position=position,
        domain=patch.domain,
        jet=jet,
        mask=mask,
        orientation=-patch.orientation,
    )


# --- census helpers ----------------------------------------------------------


def _sample_positions(patch: SurfacePatch, nu: int, nv: int) -> Array:
    U, V = patch.domain.centers(nu, nv)
    inside = patch.mask(U, V)
    return patch.position(U[inside], V[inside])


def lightcone_census(patch: SurfacePatch, nu: int, nv: int) -> tuple[bool, float]:
    """Whether the sampled surface meets LC (sign change or zero of <p,p>), and min |<p,p>|."""
    points = _sample_positions(patch, nu, nv)
    if points.size == 0:
        return False, math.inf
    rho = minkowski_dot(points, points)
    meets = bool(np.any(rho <= 0) and np.any(rho >= 0))
    return meets, float(np.min(np.abs(rho)))


def image_bound(patch: SurfacePatch, nu: int, nv: int) -> float:
    """Radius of a Euclidean ball about the origin that holds the sampled inverted image."""
    points = _sample_positions(patch, nu, nv)
    rho = np.abs(minkowski_dot(points, points))
    if np.any(rho == 0):
        return math.inf
    return float(np.max(1.0 / rho) * np.max(np.linalg.norm(points, axis=-1)))


def locate_parameters(
    patch: SurfacePatch, point: npt.ArrayLike, guess: tuple[float, float]
) -> tuple[float, float]:
    """Least-squares solve of position(u, v) = point, inside the domain."""
    target = np.asarray(point, dtype=float)
    d = patch.domain

    def residual(uv: Array) -> Array:
        return patch.position(np.float64(uv[0]), np.float64(uv[1])) - target

    result = least_squares(
        residual,
        np.asarray(guess, dtype=float),
        bounds=([d.u_min, d.v_min], [d.u_max, d.v_max]),
        xtol=1e-15,
        ftol=1e-15,
        gtol=1e-15,
    )
    log.debug("locate_parameters on %s: cost=%.3e nfev=%d", patch, result.cost, result.nfev)
    return float(result.x[0]), float(result.x[1])


def locate_preimage(
    patch: SurfacePatch, point: npt.ArrayLike, guess: tuple[float, float]
) -> tuple[float, float]:
    """(u, v) with i_M(φ(u, v)) = point."""
    return locate_parameters(invert_patch(patch), point, guess)
