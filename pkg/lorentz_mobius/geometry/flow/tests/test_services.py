import math
from dataclasses import replace

import numpy as np
import pytest

from common.enums import StopReason
from geometry.flow.schemas import PrincipalLine
from geometry.flow.services import (
    AllZero,
    BadStart,
    ShortLine,
    bde_roots,
    integrate_line,
    integrate_lines,
    sample_residuals,
    verify_line_preserved,
)
from geometry.forms.schemas import BdeCoefficients
from geometry.forms.services import bde_coeffs
from geometry.surfaces.presets import graph
from geometry.surfaces.services import (
    builtin_ellipsoid,
    builtin_sphere,
    invert_patch,
    jet2,
)

ROOT_HALF = math.sqrt(0.5)


def test_roots_of_a_hyperbolic_pair():
    roots = bde_roots(BdeCoefficients(A=1.0, B=0.0, C=-1.0))
    assert roots.count == 2
    np.testing.assert_allclose(roots.d1, [ROOT_HALF, ROOT_HALF])
    np.testing.assert_allclose(roots.d2, [ROOT_HALF, -ROOT_HALF])


def test_roots_of_the_coordinate_pair():
    roots = bde_roots(BdeCoefficients(A=0.0, B=1.0, C=0.0))
    np.testing.assert_allclose(roots.d1, [0, 1])
    np.testing.assert_allclose(roots.d2, [1, 0])
    assert roots.branch(2) is roots.d2
    with pytest.raises(ValueError):
        roots.branch(3)


def test_double_root_is_reported_once():
    roots = bde_roots(BdeCoefficients(A=1.0, B=2.0, C=1.0))
    assert roots.count == 1
    np.testing.assert_allclose(roots.d1, [ROOT_HALF, -ROOT_HALF])
    assert roots.d2 is None


def test_negative_discriminant_has_no_real_roots():
    roots = bde_roots(BdeCoefficients(A=1.0, B=0.0, C=1.0))
    assert roots.count == 0
    assert roots.roots() == []


def test_vanishing_coefficients_raise():
    with pytest.raises(AllZero):
        bde_roots(BdeCoefficients(A=0.0, B=0.0, C=0.0))


def test_roots_do_not_depend_on_the_coefficient_scale():
    c = BdeCoefficients(A=0.3, B=-1.7, C=0.4)
    for k in (1e-6, -2.0, 1e6):
        scaled = bde_roots(BdeCoefficients(A=k * c.A, B=k * c.B, C=k * c.C))
        np.testing.assert_allclose(scaled.d1, bde_roots(c).d1, atol=1e-14)
        np.testing.assert_allclose(scaled.d2, bde_roots(c).d2, atol=1e-14)


def test_saddle_line_along_the_axis_stays_on_it():
    line = integrate_line(graph("saddle"), (0.3, 0.0), branch=2, step=1e-3, n_steps=200)
    assert line.stop_reason == StopReason.COMPLETED
    assert len(line) == 201
    assert np.all(line.samples[:, 1] == 0.0)
    assert line.samples[-1, 0] == pytest.approx(0.5, abs=1e-12)


def test_saddle_line_bends_slightly_off_the_axis():
    line = integrate_line(graph("saddle"), (0.1, 0.1), branch=1, step=1e-3, n_steps=200)
    du, dv = line.samples[-1] - line.samples[0]
    assert du > 0.19
    assert abs(dv) < 5e-3
    assert line.residual_max < 1e-5


def test_start_on_the_lpl_is_rejected():
    with pytest.raises(BadStart):
        integrate_line(graph("saddle"), (ROOT_HALF, ROOT_HALF), branch=1)


def test_line_stops_at_the_domain_boundary():
    line = integrate_line(graph("saddle"), (1.3, 0.0), branch=2, step=0.05, n_steps=10)
    assert line.stop_reason == StopReason.DOMAIN_BOUNDARY
    assert line.samples[-1, 0] <= 1.5


def test_paraboloid_lines_are_circles():
    line = integrate_line(graph("paraboloid"), (0.5, 0.0), branch=1, step=1e-3, n_steps=300)
    radii = np.hypot(line.samples[:, 0], line.samples[:, 1])
    np.testing.assert_allclose(radii, 0.5, atol=1e-8)


@pytest.mark.parametrize("center", [(2, 0, 0), (0, 0, 3)])
def test_sphere_meridians_keep_u_constant(center):
    patch = builtin_sphere(center, 1)
    # A and C vanish only up to rounding, so the meridian may be either branch
    d1 = bde_roots(bde_coeffs(jet2(patch, 0.5, 1.0))).d1
    branch = 1 if abs(d1[1]) > abs(d1[0]) else 2
    line = integrate_line(patch, (0.5, 1.0), branch=branch, step=1e-3, n_steps=500)
    np.testing.assert_allclose(line.samples[:, 0], 0.5, atol=1e-6)
    assert abs(line.samples[-1, 1] - 1.0) == pytest.approx(0.5, abs=1e-9)


def test_tangents_never_reverse():
    line = integrate_line(graph("saddle"), (0.5, 0.4), branch=1, step=1e-2, n_steps=30)
    dots = np.sum(line.tangents[1:] * line.tangents[:-1], axis=1)
    assert np.all(dots > 0)


def test_halving_the_step_reduces_the_chord_residual():
    patch = graph("saddle")
    coarse = integrate_line(patch, (0.5, 0.4), branch=1, step=2e-2, n_steps=15)
    fine = integrate_line(patch, (0.5, 0.4), branch=1, step=1e-2, n_steps=30)
    assert coarse.stop_reason == fine.stop_reason == StopReason.COMPLETED
    assert 0 < fine.residual_max <= 0.5 * coarse.residual_max


def test_sphere_lines_survive_inversion():
    patch = builtin_sphere((2, 0, 0), 1)
    inverted = invert_patch(patch)
    rng = np.random.default_rng(21)
    seeds = list(zip(rng.uniform(-2, 2, 10), rng.uniform(0.3, 2.5, 10)))
    lines = integrate_lines(patch, seeds[:5], 1, n_steps=100)
    lines += integrate_lines(patch, seeds[5:], 2, n_steps=100)
    for line in lines:
        assert verify_line_preserved(patch, line, inverted=inverted) <= 1e-6


def test_integrate_lines_skips_bad_seeds():
    lines = integrate_lines(graph("saddle"), [(0.3, 0.0), (ROOT_HALF, ROOT_HALF)], 2, n_steps=5)
    assert lines[0] is not None
    assert lines[1] is None


def test_straight_segment_is_not_preserved():
    line = PrincipalLine.straight((0.5, 1.0), 0.3, 1e-2, 20)
    residual = verify_line_preserved(builtin_sphere((2, 0, 0), 1), line)
    assert residual == pytest.approx(math.cos(0.3) * math.sin(0.3), rel=1e-6)
    assert residual > 1e-2


def test_root_tangents_do_not_hide_a_straight_segment():
    patch = builtin_sphere((2, 0, 0), 1)
    segment = PrincipalLine.straight((0.5, 1.0), 0.3, 1e-2, 20)
    tangents = np.array(
        [bde_roots(bde_coeffs(jet2(patch, float(u), float(v)))).d1 for u, v in segment.samples]
    )
    line = replace(segment, tangents=tangents)
    assert verify_line_preserved(patch, line) > 1e-2


def test_residuals_are_taken_on_the_chords_and_skip_the_endpoints():
    line = PrincipalLine.straight((0.5, 1.0), 0.3, 1e-2, 20)
    residuals = sample_residuals(builtin_sphere((2, 0, 0), 1), line)
    assert residuals.shape == (21,)
    assert math.isnan(residuals[0]) and math.isnan(residuals[-1])
    assert np.all(np.isfinite(residuals[1:-1]))


def test_inverted_residuals_match_the_source_residuals_on_the_chords():
    patch = builtin_ellipsoid((4, 0, 0), (1.5, 1.0, 0.8))
    line = PrincipalLine.straight((0.5, 1.0), 0.7, 1e-2, 20)
    chords = line.samples[2:] - line.samples[:-2]
    source = [
        float(bde_coeffs(jet2(patch, float(u), float(v))).residual(d[0], d[1]))
        for (u, v), d in zip(line.samples[1:-1], chords)
    ]
    np.testing.assert_allclose(sample_residuals(patch, line)[1:-1], source, rtol=1e-7, atol=1e-10)


def test_lines_shorter_than_three_samples_cannot_be_verified():
    line = PrincipalLine.straight((0.5, 1.0), 0.3, 1e-2, 1)
    with pytest.raises(ShortLine):
        sample_residuals(builtin_sphere((2, 0, 0), 1), line)


def test_inversion_keeps_the_root_pairs():
    patch = builtin_ellipsoid((4, 0, 0), (1.5, 1.0, 0.8))
    inverted = invert_patch(patch)
    rng = np.random.default_rng(4)
    compared = 0
    for u, v in zip(rng.uniform(-3, 3, 100), rng.uniform(0.1, 3.0, 100)):
        source = bde_coeffs(jet2(patch, u, v))
        if source.discriminant < 1e-6 * source.scale() ** 2:
            continue
        before = bde_roots(source)
        after = bde_roots(bde_coeffs(jet2(inverted, u, v)))
        assert after.count == before.count == 2
        np.testing.assert_allclose(after.d1, before.d1, atol=1e-8)
        np.testing.assert_allclose(after.d2, before.d2, atol=1e-8)
        compared += 1
    assert compared > 0
