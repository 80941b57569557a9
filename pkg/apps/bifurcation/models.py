from dataclasses import dataclass, field
from enum import Enum
from typing import NamedTuple

from apps.core.exceptions import InvalidParameters
from apps.core.models import Nonlinearity, Sign


class TerminationReason(str, Enum):
    AMPLITUDE_LIMIT = 'AmplitudeLimit'
    FOLD_DETECTED = 'FoldDetected'
    ROOT_LOST = 'RootLost'


class ShotResult(NamedTuple):
    terminal_value: float
    trajectory: object
    nodal_count: int


@dataclass(frozen=True)
class BranchPoint:
    """(alpha, mu) solving u(0) = alpha, u'(0) = 0, u(1) = 0 with a fixed nodal count."""
    alpha: float
    mu: float
    sup_norm: float
    nodal_count: int
    boundary_derivative: float

    def __post_init__(self):
        if self.sup_norm < 0:
            raise InvalidParameters('sup_norm', f"must be nonnegative, got {self.sup_norm!r}")
        if self.alpha != 0 and self.sup_norm == 0:
            raise InvalidParameters('sup_norm', "must be positive for a nonzero amplitude")
        if self.nodal_count < 0:
            raise InvalidParameters('nodal_count', f"must be >= 0, got {self.nodal_count!r}")

    def as_row(self):
        return {
            'alpha': self.alpha,
            'mu': self.mu,
            'sup_norm': self.sup_norm,
            'nodal_count': self.nodal_count,
            'boundary_derivative': self.boundary_derivative,
        }


@dataclass
class Branch:
    sign: Sign
    k: int
    nonlinearity: Nonlinearity
    points: list = field(default_factory=list)
    termination_reason: TerminationReason = TerminationReason.AMPLITUDE_LIMIT
    base_mu: float = None

    def __post_init__(self):
        counts = {point.nodal_count for point in self.points}
        if len(counts) > 1:
            raise InvalidParameters('points', f"nodal count changes along the branch: {sorted(counts)}")
        if any(point.alpha * self.sign.value <= 0 for point in self.points):
            raise InvalidParameters('points', f"every amplitude must carry the {self.sign.label} sign")
        magnitudes = [abs(point.alpha) for point in self.points]
        if any(b <= a for a, b in zip(magnitudes, magnitudes[1:])):
            raise InvalidParameters('points', "amplitudes must be strictly monotone")

    def __len__(self):
        return len(self.points)

    @property
    def alphas(self):
        return [point.alpha for point in self.points]

    @property
    def mus(self):
        return [point.mu for point in self.points]

    @property
    def nodal_count(self):
        return self.points[0].nodal_count if self.points else None

    def rows(self):
        return [point.as_row() for point in self.points]
