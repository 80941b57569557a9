import factory

from apps.integrate.models import IntegratorConfig


class IntegratorConfigFactory(factory.Factory):
    rel_tol = 1e-10
    abs_tol = 1e-12
    max_step = 1.0
    max_r = 10.0

    class Meta:
        model = IntegratorConfig
