from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from apps.core.exceptions import InvalidParameters
from apps.core.models import Sign


@dataclass(frozen=True)
class HalfEigenvalue:
    """k-th radial half-eigenvalue of one sign, mu = (beta/radius)^2."""
    sign: Sign
    k: int
    beta: float
    mu: float
    dw_at_beta: float
    radius: float = 1.0
    trajectory: Optional[object] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.k < 1:
            raise InvalidParameters('k', f"must be >= 1, got {self.k!r}")
        if not self.beta > 0:
            raise InvalidParameters('beta', f"must be positive, got {self.beta!r}")
        if self.mu != (self.beta / self.radius) ** 2:
            raise InvalidParameters('mu', f"must equal (beta/radius)^2, got {self.mu!r}")
        if self.dw_at_beta == 0:
            raise InvalidParameters('dw_at_beta', "zero must be simple")

    @classmethod
    def from_zero(cls, sign, k, beta, dw_at_beta, radius=1.0, trajectory=None):
        return cls(sign, k, beta, (beta / radius) ** 2, dw_at_beta, radius, trajectory)

    def as_row(self):
        return {
            'sign': self.sign.label,
            'k': self.k,
            'beta': self.beta,
            'mu': self.mu,
            'dw_at_beta': self.dw_at_beta,
        }


@dataclass(frozen=True, eq=False)
class Eigenfunction:
    """Samples of phi(r) = w(beta r / radius) on [0, radius]."""
    parent: HalfEigenvalue
    radii: np.ndarray
    values: np.ndarray
    boundary_derivative: float

    def __post_init__(self):
        if len(self.radii) != len(self.values):
            raise InvalidParameters('values', "radii and values differ in length")

    @property
    def samples(self):
        return list(zip(self.radii.tolist(), self.values.tolist()))

    def interior_sign_changes(self, tol=0.0):
        """Sign changes among interior samples with |value| > tol."""
        inner = self.values[1:-1]
        signs = np.sign(inner[np.abs(inner) > tol])
        return int(np.count_nonzero(signs[:-1] != signs[1:]))

    def sup_normalized(self):
        return self.values / np.max(np.abs(self.values))


@dataclass(frozen=True)
class InterlacingCheck:
    label: str
    k: int
    margin: float
    strict: bool = True

    @property
    def passed(self):
        return self.margin > 0 if self.strict else self.margin >= 0


@dataclass
class InterlacingReport:
    """Outcome of the interlacing checks; orderings for k >= 2 are data only."""
    checks: list = field(default_factory=list)
    orderings: list = field(default_factory=list)

    @property
    def passed(self):
        return all(check.passed for check in self.checks)

    @property
    def failures(self):
        return [check for check in self.checks if not check.passed]
