from apps.cli.base import PucciCommand
from apps.cli.utils import SPECTRUM_HEADERS, emit, render
from apps.core.models import Sign
from apps.spectrum.utils import half_eigenvalues


class Command(PucciCommand):
    help = "Compute the first radial half-eigenvalues mu+_k and/or mu-_k on the unit ball"
    command_defaults = {'count': 5, 'sign': 'both'}

    def add_command_arguments(self, parser):
        parser.add_argument('--count', type=int, help='number K of half-eigenvalues per sign')
        parser.add_argument('--sign', choices=['plus', 'minus', 'both'])

    def run(self, config, options):
        signs = [Sign.PLUS, Sign.MINUS] if options['sign'] == 'both' else [Sign.from_label(options['sign'])]
        rows = []
        for sign in signs:
            records = half_eigenvalues(sign, options['count'], config.params, config.integrator)
            rows += [record.as_row() for record in records]
        meta = config.meta('spectrum', count=options['count'], sign=options['sign'])
        emit(render(config, SPECTRUM_HEADERS, rows, meta), config.out, self.stdout)
