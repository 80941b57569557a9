import factory

from apps.core.factories import PucciParamsFactory
from apps.crosscheck.models import GridProblem


class GridProblemFactory(factory.Factory):
    params = factory.SubFactory(PucciParamsFactory, lambda_lo=1.0, lambda_hi=2.0, dim=3)
    n = factory.Iterator([64, 128, 256])

    class Meta:
        model = GridProblem
