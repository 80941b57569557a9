import math
from dataclasses import dataclass, field

import numpy as np

from apps.core.exceptions import DimensionMismatch, InvalidParameters
from apps.core.models import PucciParams

BOUND_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class GridProblem:
    """Radial grid r_i = i/n, i = 0..n, Dirichlet at r_n = 1, symmetric at r_0 = 0."""
    params: PucciParams
    n: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 16:
            raise InvalidParameters('n', f"must be an integer >= 16, got {self.n!r}")
        object.__setattr__(self, 'n', int(self.n))

    @property
    def h(self):
        return 1.0 / self.n

    @property
    def r(self):
        return np.linspace(0.0, 1.0, self.n + 1)

    @property
    def central_start(self):
        """First node at which the central u'/r stencil keeps nonnegative neighbour weights.

        Below it (N-1) u'/r is taken from the forward quotient in r^2. The bound
        2 i lambda >= (N-1) Lambda covers every admissible coefficient pair.
        """
        p = self.params
        return max(1, math.ceil((p.dim - 1) * p.lambda_hi / (2.0 * p.lambda_lo)))

    def check(self, u, name='u'):
        u = np.asarray(u, dtype=float)
        if u.shape != (self.n + 1,):
            raise DimensionMismatch(name, f"expected {self.n + 1} grid values, got shape {u.shape}")
        return u

    def zeros(self):
        return np.zeros(self.n + 1)

    def with_n(self, n):
        return GridProblem(self.params, n)


@dataclass(frozen=True, eq=False)
class CoefficientField:
    """Per interior node i = 0..n-1, the pair (a_i, b_i) in [lambda, Lambda]^2.

    a_i multiplies the second difference, b_i the (N-1) u'/r term.
    """
    a: np.ndarray
    b: np.ndarray
    lambda_lo: float
    lambda_hi: float

    def __post_init__(self):
        a, b = np.asarray(self.a, dtype=float), np.asarray(self.b, dtype=float)
        if a.shape != b.shape or a.ndim != 1:
            raise DimensionMismatch('b', f"a and b must be vectors of one length, got {a.shape}, {b.shape}")
        for name, values in (('a', a), ('b', b)):
            if np.any(values < self.lambda_lo - BOUND_SLACK) or np.any(values > self.lambda_hi + BOUND_SLACK):
                raise InvalidParameters(name, f"coefficients must lie in [{self.lambda_lo!r}, {self.lambda_hi!r}]")
        object.__setattr__(self, 'a', a)
        object.__setattr__(self, 'b', b)

    def __len__(self):
        return len(self.a)

    def __eq__(self, other):
        if not isinstance(other, CoefficientField):
            return NotImplemented
        return np.array_equal(self.a, other.a) and np.array_equal(self.b, other.b)

    @classmethod
    def constant(cls, grid, a, b=None):
        b = a if b is None else b
        p = grid.params
        return cls(np.full(grid.n, float(a)), np.full(grid.n, float(b)), p.lambda_lo, p.lambda_hi)

    @classmethod
    def random(cls, grid, rng):
        """Uniform draws in [lambda, Lambda] at every node, for both coefficients."""
        p = grid.params
        a = rng.uniform(p.lambda_lo, p.lambda_hi, grid.n)
        b = rng.uniform(p.lambda_lo, p.lambda_hi, grid.n)
        return cls(a, b, p.lambda_lo, p.lambda_hi)


@dataclass
class HowardResult:
    u: np.ndarray
    field: CoefficientField
    iterations: int
    residuals: list = field(default_factory=list)
    iterates: list = field(default_factory=list, repr=False)

    def is_monotone(self, tol=0.0):
        """Iterates after the first solve are nondecreasing node by node."""
        return all(np.all(b >= a - tol) for a, b in zip(self.iterates, self.iterates[1:]))


@dataclass(frozen=True)
class MaxPrincipleVerdict:
    """Outcome of one discrete maximum-principle trial.

    Side 'a' solves with g >= 0 and expects u <= tol; side 'b' uses g <= 0 and expects u >= -tol.
    """
    side: str
    mu: float
    extreme: float
    node: int
    tol: float
    capped: bool = False

    @property
    def passed(self):
        if self.side == 'a':
            return self.extreme <= self.tol
        return self.extreme >= -self.tol
