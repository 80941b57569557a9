from dataclasses import replace

import numpy as np
from scipy import linalg

from apps.core.exceptions import (
    ConeEscape, InvalidParameters, MaxPrincipleViolation, NoConvergence, NonPositiveInput,
)
from apps.core.models import Sign
from apps.crosscheck.models import CoefficientField, HowardResult, MaxPrincipleVerdict
from pucci import settings
from pucci.logging import logger


def _dirichlet(u, grid):
    u = grid.check(u).copy()
    u[-1] = 0.0
    return u


def differences(u, grid):
    """(d2, q) at nodes 0..n-1: second difference and the u'/r quotient.

    At r = 0 the ghost value u_{-1} = u_1 gives d2_0 = 2(u_1 - u_0)/h^2, and u'/r
    takes the same limit. Between node 1 and ``grid.central_start`` the
    quotient is 2(u_{i+1} - u_i)/(r_{i+1}^2 - r_i^2); beyond it, the central
    difference divided by r_i.
    """
    u = _dirichlet(u, grid)
    n, h2 = grid.n, grid.h ** 2
    up, centre = u[1:], u[:-1]
    down = np.concatenate(([u[1]], u[:-2]))
    d2 = (up - 2.0 * centre + down) / h2

    q = np.empty(n)
    q[0] = d2[0]
    split = min(grid.central_start, n)
    i = np.arange(n, dtype=float)
    forward = slice(1, split)
    q[forward] = 2.0 * (up[forward] - centre[forward]) / (h2 * (2.0 * i[forward] + 1.0))
    central = slice(split, n)
    q[central] = (up[central] - down[central]) / (2.0 * h2 * i[central])
    return d2, q


def _theta(s, params):
    return np.where(s > 0, params.lambda_hi * s, params.lambda_lo * s)


def apply_pucci(u, grid):
    """Discrete M+(D^2 u): theta(d2) + (N-1) theta(u'/r), N theta(d2) at the origin."""
    p = grid.params
    d2, q = differences(u, grid)
    out = grid.zeros()
    out[:-1] = _theta(d2, p) + (p.dim - 1) * _theta(q, p)
    return out


def policy_field(u, grid):
    """Coefficient field attaining the maximum in ``apply_pucci`` at u (lambda on ties)."""
    p = grid.params
    d2, q = differences(u, grid)
    a = np.where(d2 > 0, p.lambda_hi, p.lambda_lo)
    b = np.where(q > 0, p.lambda_hi, p.lambda_lo)
    return CoefficientField(a, b, p.lambda_lo, p.lambda_hi)


def linear_operator_bands(grid, field):
    """(lower, diag, upper) of the linear discrete operator L_field on nodes 0..n-1.

    ``lower[i]`` multiplies u_{i-1} and ``upper[i]`` multiplies u_{i+1}; u_n = 0 is
    eliminated, so upper[n-1] only matters to ``apply_linear``.
    """
    if len(field) != grid.n:
        raise InvalidParameters('field', f"expected {grid.n} nodes, got {len(field)}")
    n, h2, dim = grid.n, grid.h ** 2, grid.params.dim
    i = np.arange(n, dtype=float)

    d2_lo = np.full(n, 1.0 / h2)
    d2_di = np.full(n, -2.0 / h2)
    d2_up = np.full(n, 1.0 / h2)
    d2_lo[0], d2_up[0] = 0.0, 2.0 / h2

    q_lo, q_di, q_up = np.zeros(n), np.zeros(n), np.zeros(n)
    q_di[0], q_up[0] = -2.0 / h2, 2.0 / h2
    split = min(grid.central_start, n)
    forward = slice(1, split)
    q_di[forward] = -2.0 / (h2 * (2.0 * i[forward] + 1.0))
    q_up[forward] = 2.0 / (h2 * (2.0 * i[forward] + 1.0))
    central = slice(split, n)
    q_lo[central] = -1.0 / (2.0 * h2 * i[central])
    q_up[central] = 1.0 / (2.0 * h2 * i[central])

    a, b = field.a, field.b
    return (
        a * d2_lo + (dim - 1) * b * q_lo,
        a * d2_di + (dim - 1) * b * q_di,
        a * d2_up + (dim - 1) * b * q_up,
    )


def apply_linear(u, grid, field):
    u = _dirichlet(u, grid)
    lower, diag, upper = linear_operator_bands(grid, field)
    out = grid.zeros()
    out[:-1] = diag * u[:-1] + upper * u[1:]
    out[1:-1] += lower[1:] * u[:-2]
    return out


def _solve(grid, field, mu, g):
    """u with (-L_field - mu) u = g on nodes 0..n-1 and u_n = 0."""
    lower, diag, upper = linear_operator_bands(grid, field)
    ab = np.zeros((3, grid.n))
    ab[0, 1:] = -upper[:-1]
    ab[1] = -diag - mu
    ab[2, :-1] = -lower[1:]
    u = grid.zeros()
    u[:-1] = linalg.solve_banded((1, 1), ab, g[:-1])
    return u


def pucci_residual(u, grid, mu, g):
    """max |-M+(D^2 u) - mu u - g| over nodes 0..n-1."""
    res = -apply_pucci(u, grid) - mu * u - g
    return float(np.max(np.abs(res[:-1])))


def policy_iteration(grid, mu, g, initial=None, max_iters=settings.HOWARD_MAX_ITERS):
    """Howard's algorithm for -M+(D^2 u) - mu u = g, u_n = 0.

    Each round takes the maximizing field at the current iterate and solves the
    linear system exactly. For mu below the discrete mu+_1 every policy matrix
    is monotone, so iterates increase and the finite policy set forces a stop.
    """
    g = grid.check(g, 'g')
    u = grid.zeros() if initial is None else _dirichlet(initial, grid)
    field = policy_field(u, grid)
    iterates, residuals = [], []
    for iteration in range(1, max_iters + 1):
        u = _solve(grid, field, mu, g)
        residuals.append(pucci_residual(u, grid, mu, g))
        settled = bool(iterates) and np.max(np.abs(u - iterates[-1])) <= 1e-14 * max(1.0, np.max(np.abs(u)))
        iterates.append(u)
        new_field = policy_field(u, grid)
        if new_field == field or settled:
            logger.debug(f"howard n={grid.n} mu={mu!r}: {iteration} iterations, residual {residuals[-1]!r}")
            return HowardResult(u, field, iteration, residuals, iterates)
        field = new_field
    raise NoConvergence(f"policy iteration did not settle in {max_iters} rounds at mu={mu!r}")


def policy_solve(grid, mu, g, initial=None):
    return policy_iteration(grid, mu, g, initial).u


def first_half_eigenvalue_fd(sign, grid, tol=settings.POWER_TOL, max_iters=settings.POWER_MAX_ITERS):
    """Inverse power iteration for mu^sign_1 inside the cone of sign ``sign``."""
    u = sign.value * (1.0 - grid.r ** 2)
    mu_prev = None
    for iteration in range(1, max_iters + 1):
        nxt = policy_solve(grid, 0.0, u, initial=u)
        escaped = np.flatnonzero(sign.value * nxt[:-1] <= 0)
        if escaped.size:
            raise ConeEscape(iteration, int(escaped[0]))
        norm = float(np.max(np.abs(nxt)))
        mu = float(np.max(np.abs(u))) / norm
        u = nxt / norm
        if mu_prev is not None and abs(mu - mu_prev) < tol * max(1.0, mu):
            logger.debug(f"fd mu{sign.label}_1 n={grid.n}: {mu!r} after {iteration} iterations")
            return mu, u
        mu_prev = mu
    raise NoConvergence(f"power iteration for mu{sign.label}_1 did not converge in {max_iters} steps")


def linear_principal_eigenvalue(grid, field, tol=settings.LINEAR_POWER_TOL,
                                max_iters=settings.POWER_MAX_ITERS):
    """Principal Dirichlet eigenvalue of -L_field by inverse power iteration."""
    u = 1.0 - grid.r ** 2
    mu_prev = None
    for _ in range(max_iters):
        nxt = _solve(grid, field, 0.0, u)
        norm = float(np.max(np.abs(nxt)))
        mu = float(np.max(np.abs(u))) / norm
        u = nxt / norm
        if mu_prev is not None and abs(mu - mu_prev) < tol * max(1.0, mu):
            return mu
        mu_prev = mu
    raise NoConvergence(f"linear power iteration did not converge in {max_iters} steps")


def random_linear_eigenvalue(grid, seed):
    rng = np.random.default_rng(seed)
    return linear_principal_eigenvalue(grid, CoefficientField.random(grid, rng))


def rayleigh_lower_bound(u, grid):
    """min_i -M+(D^2 u)_i / u_i over nodes 0..n-1, a lower bound for the discrete mu+_1."""
    u = grid.check(u)
    inner = u[:-1]
    if np.any(inner <= 0):
        raise NonPositiveInput('u', f"must be positive at nodes 0..n-1, first failure at {int(np.argmax(inner <= 0))}")
    return float(np.min(-apply_pucci(u, grid)[:-1] / inner))


def max_principle_trial(mu, g, grid, tol=settings.MAX_PRINCIPLE_TOL):
    """Solve M+(D^2 u) + mu u = g with u_n = 0 and check the sign of u.

    g >= 0 expects u <= 0 (needs mu < mu+_1); g <= 0 expects u >= 0.
    """
    g = grid.check(g, 'g').copy()
    g[-1] = 0.0
    if np.all(g >= 0):
        side = 'a'
    elif np.all(g <= 0):
        side = 'b'
    else:
        raise InvalidParameters('g', "must be one-signed")

    u = policy_solve(grid, mu, -g)
    scale = tol * float(np.max(np.abs(g)))
    node = int(np.argmax(u)) if side == 'a' else int(np.argmin(u))
    verdict = MaxPrincipleVerdict(side, mu, float(u[node]), node, scale)
    if not verdict.passed:
        raise MaxPrincipleViolation(node, verdict.extreme)
    return verdict


def b_side_mu(mu_plus, mu_minus, factor=0.9):
    """Trial level for the g <= 0 side: factor*mu-_1, capped at factor*mu+_1.

    With g <= 0, g != 0 and mu above mu+_1 the equation has no solution, since a
    nonnegative one would be a positive supersolution beyond mu+_1.
    """
    mu = factor * mu_minus
    if mu < mu_plus:
        return mu, False
    logger.warning(f"b-side level {mu!r} is above mu+_1={mu_plus!r}; capped at {factor * mu_plus!r}")
    return factor * mu_plus, True


def max_principle_trials(grid, side, mu, trials, seed, capped=False):
    """Run ``trials`` seeded random one-signed right-hand sides; returns the verdicts."""
    rng = np.random.default_rng(seed)
    sign = 1.0 if side == 'a' else -1.0
    verdicts = []
    for _ in range(trials):
        g = sign * rng.uniform(0.0, 1.0, grid.n + 1)
        verdict = max_principle_trial(mu, g, grid)
        verdicts.append(replace(verdict, capped=capped))
    return verdicts


def torsion_norm(mu, grid):
    """||phi||_inf for -M+(D^2 phi) - mu phi = 1, phi_n = 0."""
    phi = policy_solve(grid, mu, np.ones(grid.n + 1))
    if np.any(phi[:-1] <= 0):
        raise NonPositiveInput('mu', f"torsion function is not positive at mu={mu!r}")
    return float(np.max(phi))


def torsion_ladder(grid, mu_plus, fractions=(0.5, 0.9, 0.99, 0.999)):
    return [(f * mu_plus, torsion_norm(f * mu_plus, grid)) for f in fractions]


def supersolution_slack(mu, phi, grid):
    """max_i (M+(D^2 phi)_i + mu phi_i) over nodes 0..n-1."""
    phi = grid.check(phi, 'phi')
    return float(np.max((apply_pucci(phi, grid) + mu * phi)[:-1]))


def envelope_gap(u, grid, fields):
    """max over fields and nodes of L_field u - M+(D^2 u); never positive up to roundoff."""
    d2, q = differences(u, grid)
    a = np.array([field.a for field in fields])
    b = np.array([field.b for field in fields])
    linear = a * d2 + (grid.params.dim - 1) * b * q
    return float(np.max(linear - apply_pucci(u, grid)[:-1]))


def fd_half_pair(grid):
    """(mu+_1, mu-_1) of the discrete operator."""
    return (first_half_eigenvalue_fd(Sign.PLUS, grid)[0],
            first_half_eigenvalue_fd(Sign.MINUS, grid)[0])
