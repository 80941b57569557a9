import factory.random
import pytest
from pytest_factoryboy import register


from apps.core.factories import (
    PucciParamsFactory,
    NonlinearityFactory,
)
from apps.crosscheck.factories import GridProblemFactory
from apps.integrate.factories import IntegratorConfigFactory


register(PucciParamsFactory)
register(NonlinearityFactory)
register(IntegratorConfigFactory)
register(GridProblemFactory)


@pytest.fixture(autouse=True)
def seeded_factories():
    factory.random.reseed_random('pucci')
