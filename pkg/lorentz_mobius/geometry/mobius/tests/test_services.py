import math

import numpy as np
import pytest

from common.exceptions import GeometryError, NearLightCone, OnLD, ZeroRho
from geometry.mobius.services import (
    DegeneratePoint,
    alpha_coefficient,
    bde_scaling_factor,
    pushforward_first,
    pushforward_second,
    verify_pushforward,
)
from geometry.surfaces.presets import graph
from geometry.surfaces.schemas import Jet2
from geometry.surfaces.services import (
    builtin_ellipsoid,
    builtin_plane,
    builtin_sphere,
    invert_patch,
    translate,
)

PATCHES = [
    builtin_sphere((2, 0, 0), 1),
    builtin_sphere((4, 0, 0), 1),
    builtin_ellipsoid((4, 0, 0), (1.5, 1.0, 0.8)),
    translate(graph("paraboloid", 1.0), (3, 0, 0)),
]


def _random_points(patch, n, seed, margin=1e-2):
    rng = np.random.default_rng(seed)
    d = patch.domain
    us = rng.uniform(d.u_min + margin, d.u_max - margin, n)
    vs = rng.uniform(d.v_min + margin, d.v_max - margin, n)
    return zip(us.tolist(), vs.tolist())


def _jet(x, xu, xv):
    zero = np.zeros(3)
    return Jet2(np.array(x, float), np.array(xu, float), np.array(xv, float), zero, zero, zero)


def test_plane_pushforward_matches_with_the_inverted_orientation():
    report = verify_pushforward(builtin_plane("xy"), 0.5, 0.5)
    assert report.rho == pytest.approx(0.5)
    assert report.orientation == 1
    assert report.max_rel_err < 1e-9


@pytest.mark.parametrize("patch", PATCHES, ids=str)
def test_pushforward_law_holds_at_random_points(patch):
    inverted = invert_patch(patch)
    checked = 0
    for u, v in _random_points(patch, 200, seed=5):
        try:
            report = verify_pushforward(patch, u, v, inverted)
        except GeometryError:
            continue
        assert report.max_rel_err <= 1e-6, (u, v, report.max_rel_err)
        assert report.orientation == 1
        checked += 1
    assert checked > 150


@pytest.mark.parametrize("patch", PATCHES[:3], ids=str)
def test_bde_coefficients_scale_by_rho_to_the_minus_five(patch):
    inverted = invert_patch(patch)
    for u, v in _random_points(patch, 500, seed=9, margin=0.2):
        try:
            lam = bde_scaling_factor(patch, u, v, inverted)
        except DegeneratePoint:
            continue
        p = patch.position(np.float64(u), np.float64(v))
        rho = p[0] ** 2 + p[1] ** 2 - p[2] ** 2
        assert lam == pytest.approx(rho**-5, rel=1e-9)


def test_scaling_factor_examples():
    sphere = builtin_sphere((2, 0, 0), 1)
    assert bde_scaling_factor(sphere, math.pi, math.pi / 2) == pytest.approx(1, rel=1e-12)
    assert bde_scaling_factor(sphere, math.acos(-0.75), math.pi / 2) == pytest.approx(
        1 / 32, rel=1e-12
    )
    timelike = builtin_sphere((0, 0, math.sqrt(2)), 1)
    assert bde_scaling_factor(timelike, 0.4, math.pi / 2) == pytest.approx(-1, rel=1e-12)


def test_flat_plane_has_no_scaling_factor():
    with pytest.raises(DegeneratePoint):
        bde_scaling_factor(builtin_plane("xy"), 0.5, 0.5)


def test_pushforward_rejects_zero_rho():
    with pytest.raises(ZeroRho):
        pushforward_first(1.0, 0.0, 1.0, 0.0)
    with pytest.raises(ZeroDivisionError):
        pushforward_second(1.0, 0.0, 1.0, 1.0, 0.0, 1.0, 0.5, 0.0)


def test_pushforward_first_scales_by_rho_squared():
    assert pushforward_first(2.0, 1.0, -4.0, 2.0) == (0.5, 0.25, -1.0)


def test_alpha_needs_a_point_off_the_cone_and_off_ld():
    with pytest.raises(NearLightCone):
        alpha_coefficient(_jet((1, 0, 1), (1, 0, 0), (0, 1, 0)))
    with pytest.raises(OnLD):
        alpha_coefficient(_jet((2, 0, 0), (1, 0, 0), (0, 1, 1)))


def test_alpha_bar_is_twice_the_normal_pairing():
    j = _jet((0.5, 0.5, 0), (1, 0, 0), (0, 1, 0))
    alpha, alpha_bar = alpha_coefficient(j)
    # N = (0, 0, -1) is orthogonal to φ here
    assert alpha == pytest.approx(0)
    assert alpha_bar == pytest.approx(0)
