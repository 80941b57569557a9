import math

import numpy as np

from apps.core.exceptions import (
    DegenerateZero, HorizonExceeded, InvalidParameters, NumericalFailure, ViolationFound,
)
from apps.core.models import Nonlinearity, Operator, PucciParams, RadialState, Sign
from apps.core.utils import linear_regime
from apps.integrate.models import IntegratorConfig
from apps.integrate.utils import integrate, locate_sign_change, zeros
from apps.spectrum.models import (
    Eigenfunction, HalfEigenvalue, InterlacingCheck, InterlacingReport,
)
from pucci import settings
from pucci.logging import logger


def normalized_solution(sign, params, cfg=None):
    """w with w(0) = +-1, w'(0) = 0 for the equation with mu = 1."""
    cfg = cfg or IntegratorConfig()
    initial = RadialState(0.0, float(sign.value), 0.0)
    return integrate(initial, 1.0, Nonlinearity.zero(), params, cfg)


def initial_horizon(count, params):
    return (count + 1) * math.pi / math.sqrt(min(1.0, params.lambda_lo))


def half_eigenvalues(sign, count, params, cfg=None, radius=1.0):
    """First ``count`` radial half-eigenvalues of the given sign on the ball B_radius.

    The k-th zero beta_k of w gives mu_k = (beta_k / radius)^2. The horizon is
    doubled until ``count`` zeros are visible; w is oscillatory, so running
    out of doublings points at the integrator, not at the mathematics.
    """
    if count < 1:
        raise InvalidParameters('count', f"must be >= 1, got {count!r}")
    if not radius > 0:
        raise InvalidParameters('radius', f"must be positive, got {radius!r}")
    cfg = cfg or IntegratorConfig()

    horizon = initial_horizon(count, params)
    for doubling in range(settings.HORIZON_DOUBLINGS + 1):
        traj = normalized_solution(sign, params, cfg.with_horizon(horizon))
        brackets = traj.sign_change_brackets()
        if len(brackets) >= count:
            return _records(traj, sign, brackets[:count], radius)
        logger.debug(
            f"{sign.label}: {len(brackets)}/{count} zeros below r={horizon!r}, doubling horizon"
        )
        horizon *= 2
    raise HorizonExceeded(
        f"found fewer than {count} zeros of w^{sign.label} before r={horizon / 2!r}"
    )


def _records(traj, sign, brackets, radius):
    records = []
    for k, bracket in enumerate(brackets, start=1):
        beta = locate_sign_change(traj, bracket)
        dw = traj.du_at(beta)
        amplitude = float(np.max(np.abs(traj.u[traj.r <= beta]), initial=1.0))
        if abs(dw) < settings.SIMPLICITY_FLOOR * amplitude:
            raise DegenerateZero(beta, dw)
        records.append(HalfEigenvalue.from_zero(sign, k, beta, dw, radius, trajectory=traj))
    return records


def half_eigenvalue(sign, k, params, cfg=None, radius=1.0):
    return half_eigenvalues(sign, k, params, cfg, radius)[k - 1]


def eigenfunction(record, n_samples, params, cfg=None):
    """phi(r) = w(beta r / radius) sampled at n_samples + 1 equispaced radii.

    Sampling uses the dense output of the trajectory the zero was found on,
    so phi vanishes at the boundary to the zero-refinement tolerance.
    """
    if n_samples < 1:
        raise InvalidParameters('n_samples', f"must be >= 1, got {n_samples!r}")
    traj, beta = record.trajectory, record.beta
    if traj is None or traj.r_max < beta:
        # records read back from a file carry no trajectory; find the zero again
        cfg = (cfg or IntegratorConfig()).with_horizon(1.01 * beta)
        traj = normalized_solution(record.sign, params, cfg)
        found = zeros(traj)
        if len(found) < record.k:
            raise HorizonExceeded(f"zero {record.k} of w^{record.sign.label} not found again")
        beta = found[record.k - 1]

    radii = np.linspace(0.0, record.radius, n_samples + 1)
    values = np.asarray(traj.u_at(beta * radii / record.radius), dtype=float)
    scale = beta / record.radius
    phi = Eigenfunction(
        parent=record,
        radii=radii,
        values=values,
        boundary_derivative=scale * traj.du_at(beta),
    )
    _check_eigenfunction(phi, traj.abs_tol)
    return phi


def _check_eigenfunction(phi, abs_tol):
    record = phi.parent
    if abs(phi.values[0] - record.sign.value) > abs_tol:
        raise NumericalFailure(f"phi(0)={phi.values[0]!r}, expected {record.sign.value}")
    if abs(phi.values[-1]) > max(abs_tol, settings.ZERO_TOL):
        raise NumericalFailure(f"phi(radius)={phi.values[-1]!r} is not zero")
    # Simple zeros away from the samples: exactly k-1 interior sign changes.
    if len(phi.values) > 4 * record.k and phi.interior_sign_changes() != record.k - 1:
        raise NumericalFailure(
            f"phi^{record.sign.label}_{record.k} has {phi.interior_sign_changes()} interior "
            f"sign changes, expected {record.k - 1}"
        )
    # Hopf: the last lobe has sign sign*(-1)^(k-1) and leaves the boundary transversally.
    lobe = record.sign.value * (-1) ** (record.k - 1)
    if lobe * phi.boundary_derivative >= 0:
        raise NumericalFailure(f"boundary derivative {phi.boundary_derivative!r} has the wrong sign")


def interlacing_report(plus, minus, params=None):
    """mu-_k < mu+_{k+1} and mu+_k < mu-_{k+1}, plus the first-pair ordering.

    The ordering of mu+_k and mu-_k for k >= 2 is recorded, never asserted.
    """
    available = min(len(plus), len(minus))
    if available < 2:
        raise InvalidParameters('plus', "need at least two half-eigenvalues of each sign")

    report = InterlacingReport()
    for k in range(1, available):
        report.checks.append(InterlacingCheck('mu-_k < mu+_k+1', k, plus[k].mu - minus[k - 1].mu))
        report.checks.append(InterlacingCheck('mu+_k < mu-_k+1', k, minus[k].mu - plus[k - 1].mu))

    strict = params is not None and not params.is_laplacian
    if params is not None and params.operator is Operator.MIN:
        report.checks.append(InterlacingCheck('mu-_1 <= mu+_1', 1, plus[0].mu - minus[0].mu, strict))
    else:
        report.checks.append(InterlacingCheck('mu+_1 <= mu-_1', 1, minus[0].mu - plus[0].mu, strict))

    for k in range(2, available + 1):
        p, m = plus[k - 1].mu, minus[k - 1].mu
        report.orderings.append((k, '<' if p < m else '>' if p > m else '='))
    return report


def check_interlacing(plus, minus, params=None):
    report = interlacing_report(plus, minus, params)
    if not report.passed:
        raise ViolationFound(sorted({check.k for check in report.failures}))
    return report


def gap_ratio(params, cfg=None):
    """(mu-_1/mu+_1, mu-_2/mu+_2)."""
    plus = half_eigenvalues(Sign.PLUS, 2, params, cfg)
    minus = half_eigenvalues(Sign.MINUS, 2, params, cfg)
    return minus[0].mu / plus[0].mu, minus[1].mu / plus[1].mu


def lambda_sweep(sign, k, lambda_grid, Lambda_fixed, dim, cfg=None, operator=Operator.MAX):
    """mu^sign_k as a function of the lower ellipticity constant, Lambda fixed."""
    grid = [float(x) for x in lambda_grid]
    if not grid:
        raise InvalidParameters('lambda_grid', "must not be empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InvalidParameters('lambda_grid', "must be strictly increasing")
    if grid[0] <= 0 or grid[-1] > Lambda_fixed:
        raise InvalidParameters('lambda_grid', f"must lie inside (0, {Lambda_fixed!r}]")

    sweep = []
    for lam in grid:
        params = PucciParams(lam, Lambda_fixed, dim, operator)
        sweep.append((lam, half_eigenvalue(sign, k, params, cfg).mu))
        logger.debug(f"sweep {sign.label} k={k}: lambda={lam!r} mu={sweep[-1][1]!r}")
    return sweep


def regime_residual(traj, mu, params, r_lo=1e-3, r_hi=None, samples=4000):
    """Max residual of the constant-coefficient linear form selected by (sign u'', sign u').

    On every stretch with fixed signs the radial equation is
    w'' + (d-1)/r w' + mu w / kappa = 0 with (d, kappa) from ``linear_regime``.
    u'' comes from centred differences of the sampled u', so samples whose
    stencil straddles a change of sign pattern are skipped.
    """
    r_hi = traj.r_max if r_hi is None else r_hi
    radii = np.linspace(r_lo, r_hi, samples)
    u, du = traj(radii)
    ddu = np.gradient(du, radii, edge_order=2)
    forms = [linear_regime(a, b, params) for a, b in zip(ddu, du)]
    pattern = np.array([(a > 0, b > 0) for a, b in zip(ddu, du)])
    same = np.all(pattern[1:] == pattern[:-1], axis=1)
    interior = np.ones(samples, dtype=bool)
    interior[1:] &= same
    interior[:-1] &= same

    worst = 0.0
    for i in np.flatnonzero(interior):
        d, kappa = forms[i]
        worst = max(worst, abs(ddu[i] + (d - 1) / radii[i] * du[i] + mu * u[i] / kappa))
    return float(worst)
