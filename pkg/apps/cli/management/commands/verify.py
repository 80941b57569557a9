from django.core.management.base import CommandError

from apps.cli.base import EXIT_VERIFICATION, PucciCommand
from apps.cli.suites import SUITES, VerifyContext, run_suite
from apps.cli.utils import emit, format_value


class Command(PucciCommand):
    help = "Run a verification suite; one PASS/FAIL line per check, exit 3 on any failure"
    require_params = False
    command_defaults = {'suite': 'all'}

    def add_command_arguments(self, parser):
        parser.add_argument('--suite', choices=[*SUITES, 'all'])
        parser.add_argument('--n', type=int, help='finite-difference grid size')
        parser.add_argument('--count', type=int, help='number of half-eigenvalues per sign')

    def run(self, config, options):
        ctx = VerifyContext(
            params=config.params,
            cfg=config.integrator,
            seed=config.seed,
            n=options.get('n'),
            count=options.get('count'),
        )
        results = run_suite(options['suite'], ctx)
        lines = [
            f"{result.status} {result.suite} {result.name} margin={format_value(float(result.margin))}"
            + (f" {result.detail}" if result.detail else '')
            for result in results
        ]
        emit(''.join(f"{line}\n" for line in lines), config.out, self.stdout)

        failed = [result for result in results if result.failed]
        if failed:
            raise CommandError(f"{len(failed)} of {len(results)} checks failed", returncode=EXIT_VERIFICATION)
