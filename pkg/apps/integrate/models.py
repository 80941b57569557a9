import math
from dataclasses import dataclass, replace

import numpy as np

from apps.core.exceptions import InvalidParameters
from apps.core.models import RadialState
from pucci import settings


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = settings.REL_TOL
    abs_tol: float = settings.ABS_TOL
    max_step: float = settings.MAX_STEP
    max_r: float = settings.MAX_R

    def __post_init__(self):
        for name in ('rel_tol', 'abs_tol'):
            value = getattr(self, name)
            if not (0 < value < 1):
                raise InvalidParameters(name, f"must lie in (0, 1), got {value!r}")
        for name in ('max_step', 'max_r'):
            value = getattr(self, name)
            if not (value > 0):
                raise InvalidParameters(name, f"must be positive, got {value!r}")

    def with_horizon(self, max_r):
        return replace(self, max_r=max_r)

    def as_dict(self):
        return {
            'rel_tol': self.rel_tol,
            'abs_tol': self.abs_tol,
            'max_step': self.max_step,
            'max_r': self.max_r,
        }


class Trajectory:
    """Accepted steps of one radial integration plus their dense output.

    ``r`` holds the accepted radii (strictly increasing), ``u`` and ``du`` the
    stored states, and ``dense`` the piecewise interpolant returned by the
    Runge-Kutta pair, valid on [r[0], r[-1]].
    """

    def __init__(self, r, u, du, dense, abs_tol):
        self.r = np.asarray(r, dtype=float)
        self.u = np.asarray(u, dtype=float)
        self.du = np.asarray(du, dtype=float)
        self.dense = dense
        self.abs_tol = abs_tol

    def __len__(self):
        return len(self.r)

    def __repr__(self):
        return f'<Trajectory r=[{self.r_min!r}, {self.r_max!r}] nodes={len(self)}>'

    @property
    def r_min(self):
        return float(self.r[0])

    @property
    def r_max(self):
        return float(self.r[-1])

    def states(self):
        return [RadialState(float(r), float(u), float(du)) for r, u, du in zip(self.r, self.u, self.du)]

    def __call__(self, r):
        """Dense (u, u') at ``r`` (scalar or array)."""
        if self.dense is None:
            shape = np.shape(r)
            return np.array([np.full(shape, self.u[0]), np.full(shape, self.du[0])])
        return self.dense(r)

    def u_at(self, r):
        value = self(r)[0]
        return float(value) if np.ndim(value) == 0 else value

    def du_at(self, r):
        value = self(r)[1]
        return float(value) if np.ndim(value) == 0 else value

    def sup_norm(self, r_lo=None, r_hi=None, samples=2001):
        """max |u| over [r_lo, r_hi] from the stored nodes and a uniform dense sample."""
        r_lo = self.r_min if r_lo is None else r_lo
        r_hi = self.r_max if r_hi is None else r_hi
        inside = (self.r >= r_lo) & (self.r <= r_hi)
        grid = np.linspace(r_lo, r_hi, samples)
        return float(max(np.max(np.abs(self.u_at(grid))), np.max(np.abs(self.u[inside]), initial=0.0)))

    def sign_change_brackets(self, r_lo=None, r_hi=None):
        """Consecutive node pairs inside [r_lo, r_hi] across which u changes sign.

        Nodes where u vanishes exactly are skipped, so a zero sitting on a node
        is bracketed by its nonzero neighbours.
        """
        r_lo = self.r_min if r_lo is None else r_lo
        r_hi = self.r_max if r_hi is None else r_hi
        inside = (self.r > r_lo) & (self.r < r_hi)
        radii = np.concatenate(([r_lo], self.r[inside], [r_hi]))
        values = np.concatenate(([self.u_at(r_lo)], self.u[inside], [self.u_at(r_hi)]))
        nonzero = values != 0.0
        radii, signs = radii[nonzero], np.sign(values[nonzero])
        changes = np.flatnonzero(signs[:-1] != signs[1:])
        return [(float(radii[i]), float(radii[i + 1])) for i in changes]

    def is_finite(self):
        return bool(np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.du)))


def wavelength_step(mu, params):
    """Step cap pi/(10 sqrt(1 + mu/lambda)): at most one zero of u per step."""
    return math.pi / (10.0 * math.sqrt(1.0 + abs(mu) / params.lambda_lo))
