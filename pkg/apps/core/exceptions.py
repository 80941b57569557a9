class PucciError(Exception):
    """Base class for every error raised by the toolkit."""


class InvalidParameters(PucciError, ValueError):
    """A parameter or configuration value is out of its admissible range."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DimensionMismatch(InvalidParameters):
    pass


class NonPositiveInput(InvalidParameters):
    pass


class NumericalFailure(PucciError):
    """A computation could not produce a trustworthy number."""


class NonFinite(NumericalFailure):
    """The radial state left the finite range (blow-up)."""

    def __init__(self, r, message='state is not finite'):
        self.r = r
        super().__init__(f"{message} at r={r!r}")


class HorizonExceeded(NumericalFailure):
    pass


class NoBracket(NumericalFailure):
    pass


class DegenerateZero(NumericalFailure):
    """A zero with vanishing derivative; by uniqueness the profile is identically zero."""

    def __init__(self, r, derivative):
        self.r = r
        self.derivative = derivative
        super().__init__(f"degenerate zero at r={r!r} (u'={derivative!r})")


class RootLost(NumericalFailure):
    pass


class NoConvergence(NumericalFailure):
    pass


class ConeEscape(NumericalFailure):
    """A power-iteration iterate left the positive (or negative) cone."""

    def __init__(self, iteration, node):
        self.iteration = iteration
        self.node = node
        super().__init__(f"iterate {iteration} changed sign at node {node}")


class VerificationFailure(PucciError):
    """A proved structural property did not hold numerically."""


class ViolationFound(VerificationFailure):
    def __init__(self, indices, message='interlacing violated'):
        self.indices = list(indices)
        super().__init__(f"{message} at k={self.indices}")


class MaxPrincipleViolation(VerificationFailure):
    def __init__(self, node, value):
        self.node = node
        self.value = value
        super().__init__(f"maximum principle violated at node {node}: u={value!r}")
