"""
Closed-form transport of the fundamental forms under p -> p/<p,p>.

Let ρ = <φ, φ>. Then E_M = E/ρ² (likewise F, G) and l̄_M = (l̄ + ᾱE)/ρ³
(likewise m̄ with F, n̄ with G). Here ᾱ = 2<x_u × x_v, φ/ρ> = -‖x_u × x_v‖·α
with α = -2<N, φ/ρ>. The inverted chart carries the reversed orientation, so the
law holds for the bar coefficients as computed on the inverted patch. In every
BDE coefficient the ᾱ terms cancel, which leaves (A_M, B_M, C_M) = (A, B, C)/ρ⁵.
"""

from __future__ import annotations

import logging

import numpy as np

from common.conf import setting
from common.exceptions import GeometryError, NearLightCone, ZeroRho
from common.minkowski import lightcone_tol, minkowski_dot, minkowski_norm
from geometry.forms.schemas import Real
from geometry.forms.services import (
    bde_coeffs,
    bundle_from_forms,
    first_forms,
    form_bundle,
    normal_vector,
    second_forms_bar,
    unit_normal,
)
from geometry.mobius.schemas import PushforwardReport
from geometry.surfaces.schemas import Jet2, SurfacePatch
from geometry.surfaces.services import invert_patch, jet2

log = logging.getLogger(__name__)


class DegeneratePoint(GeometryError):
    pass


def _require_rho(rho: Real) -> None:
    if np.any(np.asarray(rho) == 0):
        raise ZeroRho("ρ = <φ, φ> vanishes; the point lies on the light cone")


def pushforward_first(E: Real, F: Real, G: Real, rho: Real) -> tuple[Real, Real, Real]:
    _require_rho(rho)
    rho2 = rho * rho
    return E / rho2, F / rho2, G / rho2


def pushforward_second(
    lbar: Real, mbar: Real, nbar: Real, E: Real, F: Real, G: Real, alpha: Real, rho: Real
) -> tuple[Real, Real, Real]:
    _require_rho(rho)
    rho3 = rho * rho * rho
    return (lbar + alpha * E) / rho3, (mbar + alpha * F) / rho3, (nbar + alpha * G) / rho3


def alpha_coefficient(j: Jet2, tol: float | None = None) -> tuple[float, float]:
    """(α, ᾱ) at a source jet; α needs the unit normal, so LD points raise OnLD."""
    rho = minkowski_dot(j.x, j.x)
    if np.any(np.abs(rho) <= lightcone_tol()):
        raise NearLightCone("ρ = <φ, φ> is within the light-cone tolerance")
    n = unit_normal(j, tol)
    alpha = -2 * minkowski_dot(n, j.x / rho[..., None])
    alpha_bar = -minkowski_norm(normal_vector(j)) * alpha
    return alpha, alpha_bar


def _relative_error(predicted: np.ndarray, observed: np.ndarray) -> float:
    scale = float(np.max(np.abs(observed)))
    diff = float(np.max(np.abs(predicted - observed)))
    return diff / scale if scale > 0 else diff


def verify_pushforward(
    patch: SurfacePatch, u: float, v: float, inverted: SurfacePatch | None = None
) -> PushforwardReport:
    j = jet2(patch, u, v)
    rho = float(minkowski_dot(j.x, j.x))
    if abs(rho) <= lightcone_tol():
        raise NearLightCone(f"ρ = {rho:.3e} at ({u:g}, {v:g}) on {patch}")
    alpha, alpha_bar = alpha_coefficient(j)

    E, F, G, _ = first_forms(j)
    lbar, mbar, nbar = second_forms_bar(j)
    predicted = bundle_from_forms(
        *pushforward_first(E, F, G, rho),
        *pushforward_second(lbar, mbar, nbar, E, F, G, alpha_bar, rho),
    )

    inverted = inverted or invert_patch(patch)
    observed = form_bundle(jet2(inverted, u, v))

    pred, obs = predicted.coefficients(), observed.coefficients()
    flipped = pred * np.array([1, 1, 1, -1, -1, -1])
    err_direct, err_flipped = _relative_error(pred, obs), _relative_error(flipped, obs)
    orientation = 1 if err_direct <= err_flipped else -1
    if orientation < 0:
        log.warning("Pushforward on %s matches only with the normal reversed", patch)

    return PushforwardReport(
        rho=rho,
        alpha=float(alpha),
        alpha_bar=float(alpha_bar),
        predicted=predicted,
        observed=observed,
        max_rel_err=min(err_direct, err_flipped),
        orientation=orientation,
    )


def _degenerate_threshold(j: Jet2) -> float:
    first = max(np.linalg.norm(j.xu), np.linalg.norm(j.xv))
    second = max(np.linalg.norm(j.xuu), np.linalg.norm(j.xuv), np.linalg.norm(j.xvv))
    return float(setting("DEGENERATE_TOL", 1e-12)) * first**4 * second


def bde_scaling_factor(
    patch: SurfacePatch, u: float, v: float, inverted: SurfacePatch | None = None
) -> float:
    """λ with (A_M, B_M, C_M) = λ·(A, B, C), fitted by least squares."""
    j = jet2(patch, u, v)
    source = bde_coeffs(j).as_array()
    if np.max(np.abs(source)) <= _degenerate_threshold(j):
        raise DegeneratePoint(f"all BDE coefficients vanish at ({u:g}, {v:g}) on {patch}")
    inverted = inverted or invert_patch(patch)
    image = bde_coeffs(jet2(inverted, u, v)).as_array()
    return float(np.dot(image, source) / np.dot(source, source))
