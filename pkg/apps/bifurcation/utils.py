import math

import numpy as np
from scipy import optimize

from apps.bifurcation.models import Branch, BranchPoint, ShotResult, TerminationReason
from apps.core.exceptions import (
    DegenerateZero, InvalidParameters, NonFinite, NumericalFailure, RootLost,
)
from apps.core.models import RadialState
from apps.integrate.models import IntegratorConfig
from apps.integrate.utils import integrate, locate_sign_change
from apps.spectrum.utils import half_eigenvalues
from pucci import settings
from pucci.logging import logger


def nodal_count(traj, r_hi):
    """Interior sign changes of u on (r_min, r_hi).

    A sign change closer to r_hi than the boundary gap belongs to the boundary
    zero and is not counted.
    """
    amplitude = traj.sup_norm(traj.r_min, r_hi)
    if amplitude == 0.0:
        raise DegenerateZero(traj.r_min, 0.0)

    count = 0
    for bracket in traj.sign_change_brackets(traj.r_min, r_hi):
        root = locate_sign_change(traj, bracket)
        if root > r_hi - settings.BOUNDARY_ZERO_GAP * (1.0 + r_hi):
            continue
        slope = traj.du_at(root)
        if abs(slope) < settings.SIMPLICITY_FLOOR * amplitude:
            raise DegenerateZero(root, slope)
        count += 1
    return count


def shoot_evb(alpha, mu, nl, params, cfg=None):
    """Integrate u(0) = alpha, u'(0) = 0 over [0, 1] and report u(1) and the nodal count."""
    cfg = (cfg or IntegratorConfig()).with_horizon(1.0)
    traj = integrate(RadialState(0.0, float(alpha), 0.0), mu, nl, params, cfg)
    return ShotResult(traj.u_at(1.0), traj, nodal_count(traj, 1.0))


def search_window(sign, k, params, cfg=None):
    """(mu^sign_k, initial bracket half-width) for the branch emanating from mu^sign_k."""
    spectrum = [0.0] + [record.mu for record in half_eigenvalues(sign, k + 1, params, cfg)]
    gap = min(spectrum[k] - spectrum[k - 1], spectrum[k + 1] - spectrum[k])
    return spectrum[k], settings.BRACKET_HALF_WIDTH * gap


def _terminal_value(alpha, mu, nl, params, cfg):
    try:
        return shoot_evb(alpha, mu, nl, params, cfg).terminal_value
    except NonFinite:
        return math.nan
    except DegenerateZero:
        return math.nan


def _candidate_roots(alpha, nl, params, cfg, lo, hi):
    grid = np.linspace(lo, hi, settings.BRACKET_SAMPLES + 1)
    values = [_terminal_value(alpha, mu, nl, params, cfg) for mu in grid]

    def residual(mu):
        return shoot_evb(alpha, mu, nl, params, cfg).terminal_value

    roots = []
    for (a, b), (fa, fb) in zip(zip(grid, grid[1:]), zip(values, values[1:])):
        if not (math.isfinite(fa) and math.isfinite(fb)):
            continue
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0:
            try:
                roots.append(float(optimize.brentq(
                    residual, a, b, xtol=settings.ROOT_TOL, rtol=settings.ROOT_TOL
                )))
            except NumericalFailure:
                continue
    if math.isfinite(values[-1]) and values[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def mu_for_alpha(alpha, k, sign, nl, params, cfg=None, bracket_hint=None, half_width=None):
    """mu with u(1) = 0 and exactly k-1 interior zeros for the profile starting at alpha.

    The search starts on [c - w, c + w] around ``bracket_hint`` (default mu^sign_k),
    doubling w until a root with the right nodal count appears. Among those, the
    one closest to the centre wins.
    """
    if alpha == 0 or (alpha > 0) != (sign.value > 0):
        raise InvalidParameters('alpha', f"must be nonzero with the {sign.label} sign, got {alpha!r}")
    if k < 1:
        raise InvalidParameters('k', f"must be >= 1, got {k!r}")
    cfg = cfg or IntegratorConfig()

    if bracket_hint is None or half_width is None:
        base_mu, width = search_window(sign, k, params, cfg)
        centre = base_mu if bracket_hint is None else bracket_hint
        half_width = width if half_width is None else half_width
    else:
        centre = bracket_hint

    for expansion in range(settings.BRACKET_MAX_EXPANSIONS + 1):
        width = half_width * settings.BRACKET_EXPANSION ** expansion
        lo, hi = centre - width, centre + width
        matching = []
        for root in _candidate_roots(alpha, nl, params, cfg, lo, hi):
            try:
                shot = shoot_evb(alpha, root, nl, params, cfg)
            except NumericalFailure:
                continue
            if shot.nodal_count == k - 1:
                matching.append(root)
        if matching:
            return min(matching, key=lambda root: abs(root - centre))
        logger.debug(f"alpha={alpha!r}: no root on [{lo!r}, {hi!r}], expanding the bracket")
    raise RootLost(f"no root with {k - 1} interior zeros near mu={centre!r} for alpha={alpha!r}")


def branch_point(alpha, mu, nl, params, cfg=None):
    shot = shoot_evb(alpha, mu, nl, params, cfg)
    return BranchPoint(
        alpha=float(alpha),
        mu=float(mu),
        sup_norm=shot.trajectory.sup_norm(0.0, 1.0),
        nodal_count=shot.nodal_count,
        boundary_derivative=shot.trajectory.du_at(1.0),
    )


def alpha_schedule(alpha_min, alpha_max, steps, sign):
    """Geometric amplitudes from alpha_min to alpha_max carrying the branch sign."""
    if not 0 < alpha_min < alpha_max:
        raise InvalidParameters('alpha_min', f"need 0 < alpha_min < alpha_max, got {alpha_min!r}, {alpha_max!r}")
    if steps < 2:
        raise InvalidParameters('steps', f"must be >= 2, got {steps!r}")
    return [sign.value * float(a) for a in np.geomspace(alpha_min, alpha_max, steps)]


def turns_back(points):
    """True when mu along the points changes direction, i.e. d mu / d alpha changes sign."""
    steps = np.sign(np.diff([point.mu for point in points]))
    steps = steps[steps != 0]
    return bool(np.any(steps[1:] != steps[:-1]))


def trace_branch(k, sign, nl, alpha_min, alpha_max, steps, params, cfg=None):
    """Natural-parameter continuation of the branch through (mu^sign_k, 0).

    Folds are not traversed: a lost root ends the branch. It is recorded as a
    fold only when mu had already turned back along the points found so far.
    """
    schedule = alpha_schedule(alpha_min, alpha_max, steps, sign)
    cfg = cfg or IntegratorConfig()
    base_mu, half_width = search_window(sign, k, params, cfg)

    points = []
    reason = TerminationReason.AMPLITUDE_LIMIT
    hint = base_mu
    for alpha in schedule:
        try:
            mu = mu_for_alpha(alpha, k, sign, nl, params, cfg, bracket_hint=hint, half_width=half_width)
            point = branch_point(alpha, mu, nl, params, cfg)
        except RootLost:
            reason = TerminationReason.FOLD_DETECTED if turns_back(points) else TerminationReason.ROOT_LOST
            break
        except NumericalFailure as e:
            logger.warning(f"branch {sign.label} k={k} stopped at alpha={alpha!r}: {e}")
            reason = TerminationReason.ROOT_LOST
            break
        points.append(point)
        hint = mu

    logger.info(
        f"branch {sign.label} k={k} ({nl.describe()}): {len(points)} points, {reason.value}"
    )
    return Branch(sign, k, nl, points, reason, base_mu)
