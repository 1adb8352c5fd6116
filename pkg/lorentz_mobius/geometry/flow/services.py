"""
Curvature lines as integral curves of the principal BDE

    A dv² + B du dv + C du² = 0.

The two roots form a line field, so directions carry no sign; integration keeps
the branch by picking, at every stage, the root closest to the previous
direction and aligning it with that direction.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable

import numpy as np

from common.conf import setting
from common.enums import StopReason
from common.exceptions import GeometryError, Masked, OutOfDomain
from common.parallel import parallel_map
from geometry.flow.schemas import DirectionPair, PrincipalLine
from geometry.forms.schemas import BdeCoefficients
from geometry.forms.services import bde_coeffs
from geometry.surfaces.schemas import Array, SurfacePatch
from geometry.surfaces.services import invert_patch, jet2

log = logging.getLogger(__name__)


class AllZero(GeometryError):
    """A = B = C = 0: umbilic or degenerate point, no principal direction."""


class BadStart(GeometryError):
    pass


class MaskedSample(GeometryError):
    pass


class ShortLine(GeometryError):
    """Fewer than three samples: no interior chord to check."""


class _Stop(Exception):
    def __init__(self, reason: StopReason):
        super().__init__(reason.label)
        self.reason = reason


def root_tol() -> float:
    return float(setting("BDE_ROOT_TOL", 1e-12))


def _canonical(d: Array) -> Array:
    d = d / np.hypot(d[0], d[1])
    if d[0] < 0 or (d[0] == 0 and d[1] < 0):
        d = -d
    return d


def bde_roots(c: BdeCoefficients, tol: float | None = None) -> DirectionPair:
    tol = root_tol() if tol is None else tol
    coeffs = np.asarray(c.as_array(), dtype=float)
    scale = float(np.max(np.abs(coeffs)))
    if not math.isfinite(scale) or scale <= tol:
        raise AllZero("every BDE coefficient vanishes")
    a, b, cc = coeffs / scale
    disc = b * b - 4 * a * cc

    if disc < -tol:
        return DirectionPair(d1=None, d2=None, count=0)
    if abs(disc) <= tol:
        d = np.array([2 * a, -b]) if abs(a) >= abs(cc) else np.array([-b, 2 * cc])
        return DirectionPair(d1=_canonical(d), d2=None, count=1)

    # the larger-magnitude root first; the other follows from the product of roots
    q = -(b + math.copysign(math.sqrt(disc), b if b != 0 else 1.0)) / 2
    first, second = _canonical(np.array([a, q])), _canonical(np.array([q, cc]))
    if math.atan2(first[1], first[0]) < math.atan2(second[1], second[0]):
        first, second = second, first
    return DirectionPair(d1=first, d2=second, count=2)


def _normalized_discriminant(c: BdeCoefficients) -> float:
    coeffs = c.as_array()
    scale = float(np.max(np.abs(coeffs)))
    if scale == 0:
        return 0.0
    return float(c.discriminant) / (scale * scale)


def _roots_at(patch: SurfacePatch, u: float, v: float) -> tuple[DirectionPair, float]:
    try:
        c = bde_coeffs(jet2(patch, u, v))
    except OutOfDomain as e:
        raise _Stop(StopReason.DOMAIN_BOUNDARY) from e
    except Masked as e:
        raise _Stop(StopReason.MASKED) from e
    try:
        roots = bde_roots(c)
    except AllZero as e:
        raise _Stop(StopReason.UMBILIC) from e
    if roots.count < 2:
        raise _Stop(StopReason.LPL)
    return roots, _normalized_discriminant(c)


def _follow(roots: DirectionPair, previous: Array) -> Array:
    best = max(roots.roots(), key=lambda d: abs(float(np.dot(d, previous))))
    return best if np.dot(best, previous) >= 0 else -best


def direction_field(patch: SurfacePatch, point: Array, previous: Array) -> Array:
    """Unit principal direction at `point` continuing `previous`."""
    roots, _ = _roots_at(patch, float(point[0]), float(point[1]))
    return _follow(roots, previous)


def _rk4_step(patch: SurfacePatch, p: Array, d: Array, h: float) -> tuple[Array, Array]:
    k1 = direction_field(patch, p, d)
    k2 = direction_field(patch, p + 0.5 * h * k1, k1)
    k3 = direction_field(patch, p + 0.5 * h * k2, k2)
    k4 = direction_field(patch, p + h * k3, k3)
    return p + h * (k1 + 2 * k2 + 2 * k3 + k4) / 6, k4


def chord_residual(patch: SurfacePatch, samples: Array) -> float:
    """Max normalized BDE residual of the central-difference chords at interior samples."""
    worst = 0.0
    for i in range(1, len(samples) - 1):
        chord = samples[i + 1] - samples[i - 1]
        c = bde_coeffs(jet2(patch, float(samples[i, 0]), float(samples[i, 1])))
        worst = max(worst, float(c.residual(chord[0], chord[1])))
    return worst


def integrate_line(
    patch: SurfacePatch,
    start: tuple[float, float],
    branch: int,
    step: float | None = None,
    n_steps: int | None = None,
) -> PrincipalLine:
    step = float(setting("FLOW_STEP", 1e-3)) if step is None else float(step)
    n_steps = int(setting("FLOW_MAX_STEPS", 10000)) if n_steps is None else int(n_steps)
    if step <= 0 or n_steps < 1:
        raise ValueError("step must be positive and n_steps at least 1")
    max_halvings = int(setting("FLOW_MAX_HALVINGS", 8))

    u0, v0 = float(start[0]), float(start[1])
    try:
        roots, disc = _roots_at(patch, u0, v0)
    except _Stop as e:
        raise BadStart(f"no principal pair at ({u0:g}, {v0:g}) on {patch}: {e.reason.label}") from e
    d = roots.branch(branch)

    p = np.array([u0, v0])
    samples, tangents = [p], [d]
    h, halvings = step, 0
    reason = StopReason.COMPLETED
    for _ in range(n_steps):
        while disc < h * h and halvings < max_halvings:
            h, halvings = h / 2, halvings + 1
        if disc < h * h:
            reason = StopReason.LPL
            break
        try:
            p_next, d_guess = _rk4_step(patch, p, d, h)
            roots, disc = _roots_at(patch, float(p_next[0]), float(p_next[1]))
        except _Stop as e:
            if e.reason == StopReason.LPL and halvings < max_halvings:
                h, halvings = h / 2, halvings + 1
                continue
            reason = e.reason
            break
        d = _follow(roots, d_guess)
        p = p_next
        samples.append(p)
        tangents.append(d)

    samples_arr = np.array(samples)
    line = PrincipalLine(
        samples=samples_arr,
        tangents=np.array(tangents),
        branch=branch,
        step=step,
        residual_max=chord_residual(patch, samples_arr),
        stop_reason=reason,
    )
    log.debug(
        "Line from (%g, %g) branch %d on %s: %d samples, stop %s",
        u0,
        v0,
        branch,
        patch,
        len(line),
        reason.value,
    )
    return line


def integrate_lines(
    patch: SurfacePatch,
    seeds: Iterable[tuple[float, float]],
    branch: int,
    step: float | None = None,
    n_steps: int | None = None,
) -> list[PrincipalLine | None]:
    """Lines for every seed, in seed order; seeds without a principal pair give None."""

    def run(seed: tuple[float, float]) -> PrincipalLine | None:
        try:
            return integrate_line(patch, seed, branch, step, n_steps)
        except BadStart as e:
            log.warning("Skipping seed: %s", e)
            return None

    return parallel_map(run, list(seeds))


def sample_residuals(
    patch: SurfacePatch, line: PrincipalLine, inverted: SurfacePatch | None = None
) -> Array:
    """
    Normalized residual of the inverted patch's BDE on the central-difference
    chords of the samples; nan at the two endpoints, which have no chord.
    """
    if len(line) < 3:
        raise ShortLine(f"line from {line.start} has {len(line)} samples, at least 3 needed")
    inverted = inverted or invert_patch(patch)
    u, v = line.samples[:, 0], line.samples[:, 1]
    inside = np.asarray(inverted.domain.contains(u, v), dtype=bool)
    inside[inside] = np.asarray(inverted.mask(u[inside], v[inside]), dtype=bool)
    if not inside.all():
        k = int(np.argmin(inside))
        raise MaskedSample(f"sample {k} at ({u[k]:g}, {v[k]:g}) is masked on {inverted}")

    residuals = np.full(len(line), np.nan)
    chords = line.samples[2:] - line.samples[:-2]
    for i, chord in enumerate(chords, start=1):
        c = bde_coeffs(jet2(inverted, float(u[i]), float(v[i])))
        residuals[i] = float(c.residual(chord[0], chord[1]))
    return residuals


def verify_line_preserved(
    patch: SurfacePatch,
    line: PrincipalLine,
    tol: float | None = None,
    inverted: SurfacePatch | None = None,
) -> float:
    worst = float(np.nanmax(sample_residuals(patch, line, inverted)))
    tol = float(setting("VERIFY_TOL", 1e-6)) if tol is None else tol
    if worst > tol:
        log.info("Line from %s exceeds %.1e: residual %.3e", line.start, tol, worst)
    return worst
