"""Zeros of Bessel functions of the first kind, used as a closed-form oracle.

j_{nu,k} is found by Newton's method from McMahon's estimate. Below
``SERIES_LIMIT`` J_nu is summed from its power series; beyond that the
series loses too many digits to cancellation and ``scipy.special.jv`` is
used instead. Each Newton step is safeguarded by a sign-change bracket.
"""
import math

import numpy as np
from scipy import special

from apps.core.exceptions import InvalidParameters, NoConvergence

SERIES_LIMIT = 12.0
SERIES_TERMS = 80


def _series(nu, x):
    """J_nu(x) and J_nu'(x) from the ascending series."""
    half = 0.5 * x
    value = []
    slope = []
    for m in range(SERIES_TERMS):
        coeff = (-1) ** m * special.rgamma(m + 1) * special.rgamma(m + nu + 1)
        if coeff == 0.0:
            continue
        power = 2 * m + nu
        term = coeff * half ** power
        value.append(term)
        slope.append(coeff * power * half ** (power - 1) * 0.5)
        if m > half and abs(term) < 1e-18 * max(1.0, abs(math.fsum(value))):
            break
    return math.fsum(value), math.fsum(slope)


def bessel_j(nu, x):
    """J_nu(x) and its derivative for x > 0."""
    if x <= SERIES_LIMIT:
        return _series(nu, x)
    return float(special.jv(nu, x)), float(special.jvp(nu, x))


def mcmahon_guess(nu, k):
    beta = (k + 0.5 * nu - 0.25) * math.pi
    mu = 4.0 * nu * nu
    return beta - (mu - 1) / (8 * beta) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * beta) ** 3)


def bessel_zero(nu, k, tol=1e-14, max_iter=60):
    """k-th positive zero of J_nu for real nu >= -1/2."""
    if nu < -0.5:
        raise InvalidParameters('nu', f"order must be >= -1/2, got {nu!r}")
    if k < 1:
        raise InvalidParameters('k', f"index must be >= 1, got {k!r}")
    if nu == -0.5:
        return (k - 0.5) * math.pi

    lo, hi = _bracket(nu, k)
    lo_sign = math.copysign(1.0, bessel_j(nu, lo)[0])
    x = min(max(mcmahon_guess(nu, k), lo), hi)
    for _ in range(max_iter):
        value, slope = bessel_j(nu, x)
        if value == 0.0:
            return x
        if math.copysign(1.0, value) == lo_sign:
            lo = x
        else:
            hi = x
        step = value / slope if slope != 0.0 else math.inf
        candidate = x - step
        if not (lo < candidate < hi):
            candidate = 0.5 * (lo + hi)
        if abs(candidate - x) <= tol * candidate:
            return candidate
        x = candidate
    raise NoConvergence(f"Newton iteration for j_({nu},{k}) did not converge")


def _bracket(nu, k):
    """Interval holding exactly the k-th zero, found by scanning for sign changes."""
    grid = np.linspace(1e-3, mcmahon_guess(nu, k) + 2 * math.pi, 64 * (k + 4))
    values = np.array([bessel_j(nu, x)[0] for x in grid])
    changes = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    if len(changes) < k:
        raise NoConvergence(f"could not bracket j_({nu},{k})")
    i = changes[k - 1]
    return float(grid[i]), float(grid[i + 1])


def laplacian_first_eigenvalue(dim):
    """First Dirichlet eigenvalue of -Laplacian on the unit ball of R^dim: j_{dim/2-1,1}^2."""
    return bessel_zero(0.5 * dim - 1.0, 1) ** 2


def laplacian_radial_eigenvalue(dim, k):
    return bessel_zero(0.5 * dim - 1.0, k) ** 2
