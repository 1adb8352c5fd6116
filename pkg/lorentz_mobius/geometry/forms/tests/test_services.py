import numpy as np
import pytest

from common.enums import FormField
from common.exceptions import OnLD
from geometry.forms.services import (
    bde_coeffs,
    euclidean_curvature,
    field_values,
    first_forms,
    form_bundle,
    gauss_K,
    gauss_kbar,
    on_ld,
    second_forms_bar,
    unit_normal,
)
from geometry.surfaces.presets import graph
from geometry.surfaces.schemas import Jet2
from geometry.surfaces.services import builtin_plane, builtin_sphere, jet2


def _random_jets(n=1000, seed=7):
    rng = np.random.default_rng(seed)
    return Jet2(*(rng.normal(size=(n, 3)) for _ in range(6)))


def test_spacelike_plane_forms():
    j = jet2(builtin_plane("xy"), 0.5, 0.5)
    E, F, G, delta = first_forms(j)
    assert (E, F, G, delta) == (1, 0, 1, -1)
    np.testing.assert_allclose(unit_normal(j), [0, 0, -1])
    assert gauss_K(j) == 0


def test_timelike_plane_has_spacelike_normal():
    j = jet2(builtin_plane("xz"), 0.0, 0.0)
    E, F, G, delta = first_forms(j)
    assert (E, F, G, delta) == (1, 0, -1, 1)
    np.testing.assert_allclose(unit_normal(j), [0, -1, 0])


def test_lightlike_plane_is_all_ld():
    j = jet2(builtin_plane("lightlike"), 0.2, -0.3)
    assert bool(on_ld(*first_forms(j)[:3]))
    with pytest.raises(OnLD):
        unit_normal(j)
    with pytest.raises(OnLD):
        gauss_K(j)
    # the bar coefficients stay defined on LD
    assert np.isfinite(gauss_kbar(j))


def test_saddle_bde_coefficients():
    patch = graph("saddle")
    for u, v in [(0.3, 0.0), (0.1, 0.1), (-0.7, 0.4)]:
        j = jet2(patch, u, v)
        E, F, G, _ = first_forms(j)
        assert E == pytest.approx(1 - u * u)
        assert F == pytest.approx(u * v)
        assert G == pytest.approx(1 - v * v)
        assert second_forms_bar(j) == pytest.approx((1, 0, -1))
        c = bde_coeffs(j)
        assert (c.A, c.B, c.C) == pytest.approx((u * v, 2 - u * u - v * v, u * v))


def test_saddle_lpl_is_where_u_plus_or_minus_v_reaches_root_two():
    c = bde_coeffs(jet2(graph("saddle"), np.sqrt(2) / 2, np.sqrt(2) / 2))
    assert c.discriminant == pytest.approx(0, abs=1e-12)


def test_lpl_discriminant_is_the_shape_operator_discriminant():
    j = _random_jets()
    b = form_bundle(j)
    trace = b.E * b.nbar + b.G * b.lbar - 2 * b.F * b.mbar
    expected = trace * trace - 4 * (b.E * b.G - b.F * b.F) * b.kbar
    np.testing.assert_allclose(b.lpl_disc, expected, rtol=1e-9, atol=1e-10)


def test_bde_quadratic_is_minus_the_commutator_determinant():
    j = _random_jets(n=200, seed=11)
    b = form_bundle(j)
    c = bde_coeffs(j)
    rng = np.random.default_rng(3)
    du, dv = rng.normal(size=(2, 200))
    first = np.stack([b.E * du + b.F * dv, b.F * du + b.G * dv], axis=-1)
    second = np.stack([b.lbar * du + b.mbar * dv, b.mbar * du + b.nbar * dv], axis=-1)
    det = first[:, 0] * second[:, 1] - first[:, 1] * second[:, 0]
    quad = c.C * du * du + c.B * du * dv + c.A * dv * dv
    np.testing.assert_allclose(det, -quad, rtol=1e-9, atol=1e-10)


def test_kbar_is_a_product_of_euclidean_determinants():
    j = _random_jets()

    def det(a, b, c):
        return np.linalg.det(np.stack([a, b, c], axis=-2))

    lbar = det(j.xu, j.xv, j.xuu)
    mbar = det(j.xu, j.xv, j.xuv)
    nbar = det(j.xu, j.xv, j.xvv)
    np.testing.assert_allclose(gauss_kbar(j), lbar * nbar - mbar * mbar, rtol=1e-10, atol=1e-12)


def test_reversed_orientation_flips_the_bar_coefficients_only():
    j = _random_jets(n=10)
    flipped = j.oriented(-1)
    for a, b in zip(second_forms_bar(j), second_forms_bar(flipped)):
        np.testing.assert_allclose(a, -b)
    np.testing.assert_allclose(gauss_kbar(j), gauss_kbar(flipped))


def test_euclidean_curvature_of_a_round_sphere():
    patch = builtin_sphere((1, -1, 3), 2)
    U, V = patch.domain.centers(6, 6)
    j = patch.jet(U, V)
    np.testing.assert_allclose(euclidean_curvature(j), 0.25, rtol=1e-10)


def test_field_values_dispatch():
    j = jet2(graph("saddle"), 0.3, 0.2)
    b = form_bundle(j)
    assert field_values(j, FormField.DELTA) == pytest.approx(b.delta)
    assert field_values(j, "lpl_disc") == pytest.approx(b.lpl_disc)
    assert field_values(j, "kbar") == pytest.approx(b.kbar)
    with pytest.raises(ValueError):
        field_values(j, "curvature")
