import math
from dataclasses import dataclass
from enum import Enum

from apps.core.exceptions import InvalidParameters


class Operator(str, Enum):
    MAX = 'max'
    MIN = 'min'


class Sign(Enum):
    PLUS = 1
    MINUS = -1

    @property
    def label(self):
        return self.name.lower()

    @classmethod
    def from_label(cls, label):
        try:
            return cls[label.upper()]
        except KeyError:
            raise InvalidParameters('sign', f"expected 'plus' or 'minus', got {label!r}") from None


class NonlinearityFamily(str, Enum):
    ZERO = 'zero'
    ODD_POWER = 'oddpower'
    LIONS_POWER = 'lions'


@dataclass(frozen=True)
class PucciParams:
    """Ellipticity pair, space dimension and operator selector."""
    lambda_lo: float
    lambda_hi: float
    dim: int
    operator: Operator = Operator.MAX

    def __post_init__(self):
        if not (math.isfinite(self.lambda_lo) and self.lambda_lo > 0):
            raise InvalidParameters('lambda_lo', f"must be a positive number, got {self.lambda_lo!r}")
        if not (math.isfinite(self.lambda_hi) and self.lambda_hi >= self.lambda_lo):
            raise InvalidParameters(
                'lambda_hi', f"must satisfy lambda_lo <= lambda_hi, got {self.lambda_hi!r}"
            )
        if int(self.dim) != self.dim or self.dim < 1:
            raise InvalidParameters('dim', f"must be an integer >= 1, got {self.dim!r}")
        object.__setattr__(self, 'dim', int(self.dim))
        object.__setattr__(self, 'operator', Operator(self.operator))

    @property
    def tilde_n_plus(self):
        return self.lambda_lo * (self.dim - 1) / self.lambda_hi + 1

    @property
    def tilde_n_minus(self):
        return self.lambda_hi * (self.dim - 1) / self.lambda_lo + 1

    @property
    def is_laplacian(self):
        return self.lambda_lo == self.lambda_hi

    def with_operator(self, operator):
        return PucciParams(self.lambda_lo, self.lambda_hi, self.dim, Operator(operator))

    def as_dict(self):
        return {
            'lambda': self.lambda_lo,
            'Lambda': self.lambda_hi,
            'dim': self.dim,
            'operator': self.operator.value,
        }


@dataclass(frozen=True)
class RadialState:
    """Phase point (r, v(r), v'(r)) of the radial ODE."""
    r: float
    u: float
    du: float

    def __post_init__(self):
        if not all(math.isfinite(x) for x in (self.r, self.u, self.du)):
            raise InvalidParameters('state', f"all fields must be finite, got {self!r}")
        if self.r < 0:
            raise InvalidParameters('r', f"must be nonnegative, got {self.r!r}")

    def flipped(self):
        return RadialState(self.r, -self.u, -self.du)


@dataclass(frozen=True)
class Nonlinearity:
    """The closed family of forcing terms f(s, mu) = o(|s|)."""
    family: NonlinearityFamily = NonlinearityFamily.ZERO
    c: float = 0.0
    p: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, 'family', NonlinearityFamily(self.family))
        if not (math.isfinite(self.p) and self.p > 1):
            raise InvalidParameters('p', f"exponent must exceed 1, got {self.p!r}")
        if not math.isfinite(self.c):
            raise InvalidParameters('c', f"coefficient must be finite, got {self.c!r}")

    def __call__(self, s, mu):
        if self.is_zero or s == 0.0:
            return 0.0
        if self.family is NonlinearityFamily.ODD_POWER:
            return self.c * math.copysign(abs(s) ** self.p, s)
        return -mu * math.copysign(abs(s) ** self.p, s)

    @property
    def is_zero(self):
        return self.family is NonlinearityFamily.ZERO

    @classmethod
    def zero(cls):
        return cls(NonlinearityFamily.ZERO)

    @classmethod
    def odd_power(cls, c, p):
        return cls(NonlinearityFamily.ODD_POWER, c=c, p=p)

    @classmethod
    def lions_power(cls, p):
        return cls(NonlinearityFamily.LIONS_POWER, p=p)

    @classmethod
    def parse(cls, text):
        """Parse ``zero``, ``oddpower:c=-1,p=3`` or ``lions:p=2``."""
        name, _, rest = text.strip().partition(':')
        try:
            family = NonlinearityFamily(name.strip().lower())
        except ValueError:
            raise InvalidParameters('nonlinearity', f"unknown family {name!r}") from None
        kwargs = {}
        for item in filter(None, (part.strip() for part in rest.split(','))):
            key, sep, value = item.partition('=')
            if not sep or key.strip() not in ('c', 'p'):
                raise InvalidParameters('nonlinearity', f"bad parameter {item!r}")
            try:
                kwargs[key.strip()] = float(value)
            except ValueError:
                raise InvalidParameters('nonlinearity', f"bad number in {item!r}") from None
        if family is NonlinearityFamily.ODD_POWER and 'c' not in kwargs:
            raise InvalidParameters('nonlinearity', "oddpower needs a coefficient c")
        return cls(family, **kwargs)

    def describe(self):
        if self.is_zero:
            return 'zero'
        if self.family is NonlinearityFamily.ODD_POWER:
            return f'oddpower:c={self.c!r},p={self.p!r}'
        return f'lions:p={self.p!r}'
