"""
Fundamental forms of a jet in R^3_1.

The second form is kept in its bar form l̄ = <x_u × x_v, x_uu> = det(x_u, x_v, x_uu),
scaled by the unnormalised normal, so every quantity below stays finite across
the locus of degeneracy.
"""

from __future__ import annotations

import numpy as np

from common.conf import setting
from common.enums import FormField
from common.exceptions import OnLD
from common.minkowski import lorentz_cross, minkowski_dot, minkowski_norm
from geometry.forms.schemas import BdeCoefficients, FormBundle, Real
from geometry.surfaces.schemas import Array, Jet2


def ld_tol() -> float:
    return float(setting("LD_TOL", 1e-10))


def first_forms(j: Jet2) -> tuple[Real, Real, Real, Real]:
    E = minkowski_dot(j.xu, j.xu)
    F = minkowski_dot(j.xu, j.xv)
    G = minkowski_dot(j.xv, j.xv)
    return E, F, G, F * F - E * G


def normal_vector(j: Jet2) -> Array:
    """Unnormalised oriented normal x_u × x_v."""
    return j.orientation * lorentz_cross(j.xu, j.xv)


def second_forms_bar(j: Jet2) -> tuple[Real, Real, Real]:
    c = normal_vector(j)
    return minkowski_dot(c, j.xuu), minkowski_dot(c, j.xuv), minkowski_dot(c, j.xvv)


def gauss_kbar(j: Jet2) -> Real:
    lbar, mbar, nbar = second_forms_bar(j)
    return lbar * nbar - mbar * mbar


def on_ld(E: Real, F: Real, G: Real, tol: float | None = None) -> np.ndarray:
    tol = ld_tol() if tol is None else tol
    scale = np.max(np.abs(np.stack(np.broadcast_arrays(E, F, G), axis=-1)), axis=-1)
    return np.abs(E * G - F * F) <= tol * scale * scale


def _require_off_ld(j: Jet2, tol: float | None) -> tuple[Real, Real, Real, Real]:
    E, F, G, delta = first_forms(j)
    if np.any(on_ld(E, F, G, tol)):
        raise OnLD("the induced metric is degenerate (EG - F² ≈ 0)")
    return E, F, G, delta


def gauss_K(j: Jet2, tol: float | None = None) -> Real:
    """(ln - m²)/(EG - F²) with l = l̄/‖x_u × x_v‖."""
    E, F, G, _ = _require_off_ld(j, tol)
    c = normal_vector(j)
    return gauss_kbar(j) / ((E * G - F * F) * np.abs(minkowski_dot(c, c)))


def unit_normal(j: Jet2, tol: float | None = None) -> Array:
    _require_off_ld(j, tol)
    c = normal_vector(j)
    return c / minkowski_norm(c)[..., None]


def bde_coeffs(j: Jet2) -> BdeCoefficients:
    E, F, G, _ = first_forms(j)
    lbar, mbar, nbar = second_forms_bar(j)
    return bde_from_forms(E, F, G, lbar, mbar, nbar)


def bde_from_forms(E, F, G, lbar, mbar, nbar) -> BdeCoefficients:
    return BdeCoefficients(A=G * mbar - F * nbar, B=G * lbar - E * nbar, C=F * lbar - E * mbar)


def lpl_discriminant(j: Jet2) -> Real:
    return bde_coeffs(j).discriminant


def bundle_from_forms(E, F, G, lbar, mbar, nbar) -> FormBundle:
    return FormBundle(
        E=E,
        F=F,
        G=G,
        lbar=lbar,
        mbar=mbar,
        nbar=nbar,
        delta=F * F - E * G,
        kbar=lbar * nbar - mbar * mbar,
        lpl_disc=bde_from_forms(E, F, G, lbar, mbar, nbar).discriminant,
    )


def form_bundle(j: Jet2) -> FormBundle:
    E, F, G, _ = first_forms(j)
    return bundle_from_forms(E, F, G, *second_forms_bar(j))


def field_values(j: Jet2, field: FormField | str) -> Real:
    field = FormField(field)
    if field == FormField.DELTA:
        return first_forms(j)[3]
    if field == FormField.LPL_DISC:
        return lpl_discriminant(j)
    return gauss_kbar(j)


def euclidean_normal(j: Jet2) -> Array:
    return np.cross(j.xu, j.xv)


def euclidean_curvature(j: Jet2) -> Real:
    """
    Euclidean Gauss curvature K̄ / |x_u × x_v|⁴.

    It does not depend on the chart, so sign censuses can combine several charts
    and stay meaningful where a chart degenerates.
    """
    n2 = np.sum(euclidean_normal(j) ** 2, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return gauss_kbar(j) / (n2 * n2)
