from apps.cli.base import PucciCommand
from apps.cli.utils import EIGENFUNCTION_HEADERS, emit, render
from apps.core.exceptions import InvalidParameters
from apps.core.models import Sign
from apps.spectrum.utils import eigenfunction, half_eigenvalue
from pucci import settings


class Command(PucciCommand):
    help = "Sample the radial eigenfunction of one half-eigenvalue on [0, 1]"
    command_defaults = {'k': 1, 'sign': 'plus', 'samples': settings.DEFAULT_SAMPLES}

    def add_command_arguments(self, parser):
        parser.add_argument('--k', type=int)
        parser.add_argument('--sign', choices=['plus', 'minus'])
        parser.add_argument('--samples', type=int)

    def run(self, config, options):
        if options['k'] < 1:
            raise InvalidParameters('k', f"must be >= 1, got {options['k']!r}")
        record = half_eigenvalue(Sign.from_label(options['sign']), options['k'], config.params, config.integrator)
        phi = eigenfunction(record, options['samples'], config.params, config.integrator)
        rows = [{'r': r, 'value': value} for r, value in phi.samples]
        header = (('mu', record.mu), ('boundary_derivative', phi.boundary_derivative))
        meta = config.meta(
            'eigenfunction', sign=record.sign.label, k=record.k,
            mu=record.mu, boundary_derivative=phi.boundary_derivative,
        )
        emit(render(config, EIGENFUNCTION_HEADERS, rows, meta, preamble=header), config.out, self.stdout)
