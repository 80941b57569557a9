import math

import pytest
from scipy import special

from apps.core.bessel import (
    bessel_j, bessel_zero, laplacian_first_eigenvalue, laplacian_radial_eigenvalue, mcmahon_guess,
)
from apps.core.exceptions import InvalidParameters


def test_j01():
    assert bessel_zero(0.0, 1) == pytest.approx(2.404825557695773, rel=1e-13)


@pytest.mark.parametrize("order", [0, 1, 2, 5])
def test_integer_orders_match_scipy(order):
    expected = special.jn_zeros(order, 5)
    for k in range(1, 6):
        assert bessel_zero(float(order), k) == pytest.approx(expected[k - 1], rel=1e-12)


@pytest.mark.parametrize("k", [1, 2, 3, 7])
def test_half_orders_are_closed_form(k):
    assert bessel_zero(0.5, k) == pytest.approx(k * math.pi, rel=1e-12)
    assert bessel_zero(-0.5, k) == pytest.approx((k - 0.5) * math.pi, rel=1e-15)


@pytest.mark.parametrize("nu, x", [(0.0, 0.5), (1.5, 3.0), (0.5, 11.9), (2.0, 20.0)])
def test_bessel_j_matches_scipy(nu, x):
    value, slope = bessel_j(nu, x)
    assert value == pytest.approx(special.jv(nu, x), abs=1e-11)
    assert slope == pytest.approx(special.jvp(nu, x), abs=1e-11)


def test_mcmahon_guess_is_close():
    assert abs(mcmahon_guess(0.0, 3) - special.jn_zeros(0, 3)[-1]) < 1e-3


@pytest.mark.parametrize("dim, expected", [
    (1, math.pi ** 2 / 4),
    (2, 2.404825557695773 ** 2),
    (3, math.pi ** 2),
])
def test_laplacian_first_eigenvalue(dim, expected):
    assert laplacian_first_eigenvalue(dim) == pytest.approx(expected, rel=1e-12)


def test_laplacian_radial_eigenvalue():
    assert laplacian_radial_eigenvalue(3, 2) == pytest.approx(4 * math.pi ** 2, rel=1e-12)


@pytest.mark.parametrize("nu, k", [(-1.0, 1), (0.0, 0)])
def test_bessel_zero_rejects(nu, k):
    with pytest.raises(InvalidParameters):
        bessel_zero(nu, k)
