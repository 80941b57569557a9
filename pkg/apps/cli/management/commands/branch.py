from apps.bifurcation.utils import trace_branch
from apps.cli.base import PucciCommand
from apps.cli.utils import BRANCH_HEADERS, emit, render
from apps.core.models import Sign


class Command(PucciCommand):
    help = "Trace the bifurcation branch emanating from (mu^sign_k, 0)"
    command_defaults = {'k': 1, 'sign': 'plus', 'alpha_min': 1e-3, 'alpha_max': 1.0, 'steps': 10}

    def add_command_arguments(self, parser):
        parser.add_argument('--k', type=int)
        parser.add_argument('--sign', choices=['plus', 'minus'])
        parser.add_argument('--nonlinearity', help="zero, oddpower:c=-1,p=3 or lions:p=2")
        parser.add_argument('--alpha-min', type=float)
        parser.add_argument('--alpha-max', type=float)
        parser.add_argument('--steps', type=int)

    def run(self, config, options):
        branch = trace_branch(
            options['k'], Sign.from_label(options['sign']), config.nonlinearity,
            options['alpha_min'], options['alpha_max'], options['steps'],
            config.params, config.integrator,
        )
        meta = config.meta(
            'branch', sign=branch.sign.label, k=branch.k, base_mu=branch.base_mu,
            termination_reason=branch.termination_reason.value,
        )
        trailer = (('termination_reason', branch.termination_reason.value),)
        emit(render(config, BRANCH_HEADERS, branch.rows(), meta, trailer=trailer), config.out, self.stdout)
