import sys

from django.core.management.base import BaseCommand, CommandError

from apps.cli.models import RunConfig
from apps.core.exceptions import InvalidParameters, NumericalFailure
from pucci import settings
from pucci.logging import configure_logging, logger

EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFICATION = 3


class PucciCommand(BaseCommand):
    """Shared flags, config-file merging and exit-code mapping for the commands.

    Exit codes: 1 usage or invalid parameters, 2 numerical failure, 3 failed
    verification (raised by the verify command itself).
    """
    requires_system_checks = []
    require_params = True
    command_defaults = {}

    def create_parser(self, prog_name, subcommand, **kwargs):
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        # usage errors raise CommandError (exit 1) instead of argparse's exit 2
        parser.called_from_command_line = False
        self.parser = parser
        return parser

    def run_from_argv(self, argv):
        # parse errors surface before BaseCommand installs its own CommandError handler
        try:
            super().run_from_argv(argv)
        except CommandError as e:
            if '--traceback' in argv:
                raise
            self.stderr.write(f"{e.__class__.__name__}: {e}")
            sys.exit(e.returncode)

    def add_arguments(self, parser):
        parser.add_argument('--config', help='flat key=value file pre-populating the flags')
        parser.add_argument('--lambda', dest='lambda_lo', type=float, help='lower ellipticity constant')
        parser.add_argument('--Lambda', dest='lambda_hi', type=float, help='upper ellipticity constant')
        parser.add_argument('--dim', type=int, help='space dimension N')
        parser.add_argument('--operator', choices=['max', 'min'], help='M+ (max, default) or M- (min)')
        parser.add_argument('--rel-tol', type=float)
        parser.add_argument('--abs-tol', type=float)
        parser.add_argument('--max-step', type=float)
        parser.add_argument('--format', choices=['csv', 'json'])
        parser.add_argument('--out', help='output file (default: stdout)')
        parser.add_argument('--seed', type=int)
        parser.add_argument('--log-level', help='loguru level of the stderr sink')
        parser.add_argument('--log-path', help='rotating log file')
        self.add_command_arguments(parser)

    def add_command_arguments(self, parser):
        pass

    def merge_config_file(self, options):
        """Fill flags that were not given on the command line from ``--config``."""
        path = options.get('config')
        if not path:
            return options
        try:
            values = settings.load_config_file(path)
        except (OSError, ValueError) as e:
            raise CommandError(f"config: {e}", returncode=EXIT_USAGE)
        argv = []
        for key, value in values.items():
            argv += [f"--{key.replace('_', '-')}", value]
        from_file = vars(self.parser.parse_args(argv))
        merged = dict(options)
        for dest, value in from_file.items():
            if merged.get(dest) is None and value is not None:
                merged[dest] = value
        return merged

    def apply_defaults(self, options):
        options = dict(options)
        for dest, value in self.command_defaults.items():
            if options.get(dest) is None:
                options[dest] = value
        return options

    def handle(self, *args, **options):
        options = self.apply_defaults(self.merge_config_file(options))
        configure_logging(options.get('log_level'), options.get('log_path'))
        try:
            config = RunConfig.from_options(options, require_params=self.require_params)
            self.run(config, options)
        except InvalidParameters as e:
            raise CommandError(str(e), returncode=EXIT_USAGE)
        except NumericalFailure as e:
            logger.error(f"{self.__module__.rsplit('.', 1)[-1]}: {e}")
            raise CommandError(f"numerical failure: {e}", returncode=EXIT_NUMERICAL)

    def run(self, config, options):
        raise NotImplementedError
