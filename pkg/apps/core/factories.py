import factory

from apps.core.models import Nonlinearity, NonlinearityFamily, Operator, PucciParams


class PucciParamsFactory(factory.Factory):
    lambda_lo = factory.Faker('pyfloat', min_value=0.5, max_value=1.0)
    lambda_hi = factory.Faker('pyfloat', min_value=1.0, max_value=4.0)
    dim = factory.Iterator([1, 2, 3, 5])
    operator = Operator.MAX

    class Meta:
        model = PucciParams


class NonlinearityFactory(factory.Factory):
    family = NonlinearityFamily.ODD_POWER
    c = -1.0
    p = 3.0

    class Meta:
        model = Nonlinearity
