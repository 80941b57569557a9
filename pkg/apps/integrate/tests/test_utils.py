import math

import numpy as np
import pytest

from apps.core.exceptions import NoBracket, NonFinite
from apps.core.models import Nonlinearity, PucciParams, RadialState
from apps.integrate.models import IntegratorConfig
from apps.integrate.utils import integrate, locate_sign_change, zeros

LAPLACIAN_1D = PucciParams(1.0, 1.0, 1)
LAPLACIAN_3D = PucciParams(1.0, 1.0, 3)


@pytest.fixture
def cosine():
    cfg = IntegratorConfig(max_r=2 * math.pi)
    return integrate(RadialState(0.0, 1.0, 0.0), 1.0, Nonlinearity.zero(), LAPLACIAN_1D, cfg)


@pytest.fixture
def sinc():
    cfg = IntegratorConfig(max_r=7.0)
    return integrate(RadialState(0.0, 1.0, 0.0), 1.0, Nonlinearity.zero(), LAPLACIAN_3D, cfg)


def test_cosine_closed_form(cosine):
    assert abs(cosine.u_at(math.pi / 2)) <= 1e-9
    r = np.linspace(0.0, 2 * math.pi, 101)
    assert np.max(np.abs(cosine.u_at(r) - np.cos(r))) <= 1e-8
    assert cosine.r_max == pytest.approx(2 * math.pi)


def test_sinc_closed_form(sinc):
    assert abs(sinc.u_at(math.pi)) <= 1e-9
    r = np.linspace(0.1, 7.0, 70)
    assert np.max(np.abs(sinc.u_at(r) - np.sin(r) / r)) <= 1e-8


def test_zero_initial_state_stays_zero(pucci_params_factory):
    params = pucci_params_factory()
    traj = integrate(RadialState(0.0, 0.0, 0.0), 3.0, Nonlinearity.zero(), params, IntegratorConfig(max_r=2.0))
    assert np.all(traj.u == 0.0)
    assert np.all(traj.du == 0.0)


def test_dense_output_matches_nodes(sinc):
    u, du = sinc(sinc.r)
    assert np.max(np.abs(u - sinc.u)) <= sinc.abs_tol
    assert np.max(np.abs(du - sinc.du)) <= sinc.abs_tol


def test_locate_sign_change(cosine, sinc):
    assert locate_sign_change(cosine, (1.5, 1.6)) == pytest.approx(math.pi / 2, abs=1e-10)
    assert locate_sign_change(sinc, (3.0, 3.3)) == pytest.approx(math.pi, abs=1e-10)


def test_locate_sign_change_needs_a_bracket(cosine):
    with pytest.raises(NoBracket):
        locate_sign_change(cosine, (0.1, 0.2))


def test_zeros_of_cosine(cosine):
    assert zeros(cosine) == pytest.approx([math.pi / 2, 3 * math.pi / 2], abs=1e-10)


def test_no_step_skips_two_zeros():
    params = PucciParams(1.0, 1.0, 1)
    traj = integrate(RadialState(0.0, 1.0, 0.0), 400.0, Nonlinearity.zero(), params, IntegratorConfig(max_r=1.0))
    # cos(20 r) has 6 zeros in (0, 1)
    assert len(zeros(traj)) == 6
    assert np.max(np.diff(traj.r)) <= math.pi / (10 * math.sqrt(401.0)) + 1e-15


def test_blow_up_is_reported():
    params = PucciParams(1.0, 2.0, 3)
    with pytest.raises(NonFinite):
        integrate(RadialState(0.0, 10.0, 0.0), 1.0, Nonlinearity.odd_power(-1.0, 3.0), params,
                  IntegratorConfig(max_r=2.0))


def test_fifth_order_under_a_step_cap():
    # tolerances loose enough that the cap sets every step
    steps = [0.2, 0.1, 0.05]
    errors = []
    for h in steps:
        cfg = IntegratorConfig(rel_tol=0.5, abs_tol=0.5, max_step=h, max_r=2 * math.pi)
        traj = integrate(RadialState(0.0, 1.0, 0.0), 1.0, Nonlinearity.zero(), LAPLACIAN_1D, cfg)
        errors.append(np.max(np.abs(traj.u - np.cos(traj.r))))
    order = np.polyfit(np.log(steps), np.log(errors), 1)[0]
    assert order >= 4
