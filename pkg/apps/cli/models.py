from dataclasses import dataclass
from typing import Optional

from apps.core.exceptions import InvalidParameters
from apps.core.models import Nonlinearity, Operator, PucciParams
from apps.integrate.models import IntegratorConfig
from pucci import settings

OUTPUT_FORMATS = ('csv', 'json')

# option dest -> flag name used in diagnostics
FLAG_NAMES = {
    'lambda_lo': 'lambda',
    'lambda_hi': 'Lambda',
    'dim': 'dim',
    'operator': 'operator',
    'rel_tol': 'rel-tol',
    'abs_tol': 'abs-tol',
    'max_step': 'max-step',
}


def _flag_error(error):
    """Re-raise an InvalidParameters from a domain type under the flag that set it."""
    flag = FLAG_NAMES.get(error.field, error.field)
    message = str(error).split(': ', 1)[-1]
    return InvalidParameters(flag, message)


@dataclass(frozen=True)
class RunConfig:
    """Validated options of one command run."""
    params: Optional[PucciParams]
    integrator: IntegratorConfig
    nonlinearity: Nonlinearity
    output_format: str = 'csv'
    out: Optional[str] = None
    seed: int = settings.DEFAULT_SEED

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidParameters('format', f"expected one of {OUTPUT_FORMATS}, got {self.output_format!r}")
        if not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidParameters('seed', f"must be a nonnegative integer, got {self.seed!r}")

    @classmethod
    def from_options(cls, options, require_params=True):
        """Build from parsed command options; every missing or bad value names its flag."""
        given = [options.get(name) is not None for name in ('lambda_lo', 'lambda_hi', 'dim')]
        if require_params or any(given):
            for name, present in zip(('lambda_lo', 'lambda_hi', 'dim'), given):
                if not present:
                    raise InvalidParameters(FLAG_NAMES[name], "is required")

        try:
            params = None
            if all(given):
                params = PucciParams(
                    options['lambda_lo'], options['lambda_hi'], options['dim'],
                    Operator(options.get('operator') or Operator.MAX),
                )
            integrator = IntegratorConfig(
                rel_tol=_or_default(options.get('rel_tol'), settings.REL_TOL),
                abs_tol=_or_default(options.get('abs_tol'), settings.ABS_TOL),
                max_step=_or_default(options.get('max_step'), settings.MAX_STEP),
            )
        except InvalidParameters as e:
            raise _flag_error(e) from e

        nonlinearity = Nonlinearity.parse(options.get('nonlinearity') or 'zero')
        return cls(
            params=params,
            integrator=integrator,
            nonlinearity=nonlinearity,
            output_format=options.get('format') or 'csv',
            out=options.get('out'),
            seed=_or_default(options.get('seed'), settings.DEFAULT_SEED),
        )

    def meta(self, command, **extra):
        """Metadata object of the JSON output."""
        meta = {
            'command': command,
            'tool_version': settings.TOOL_VERSION,
            'seed': self.seed,
            'params': self.params.as_dict() if self.params else None,
            'tolerances': self.integrator.as_dict(),
            'nonlinearity': self.nonlinearity.describe(),
        }
        meta.update(extra)
        return meta


def _or_default(value, default):
    return default if value is None else value


@dataclass(frozen=True)
class CheckResult:
    """One line of a verification suite; informational lines (asserted=False) never fail a run."""
    suite: str
    name: str
    passed: bool
    margin: float
    detail: str = ''
    asserted: bool = True

    @property
    def status(self):
        if not self.asserted:
            return 'INFO'
        return 'PASS' if self.passed else 'FAIL'

    @property
    def failed(self):
        return self.asserted and not self.passed
