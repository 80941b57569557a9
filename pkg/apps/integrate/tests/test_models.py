import math

import numpy as np
import pytest

from apps.core.exceptions import InvalidParameters
from apps.core.models import PucciParams
from apps.integrate.models import IntegratorConfig, Trajectory, wavelength_step


def test_defaults_come_from_settings():
    cfg = IntegratorConfig()
    assert (cfg.rel_tol, cfg.abs_tol) == (1e-10, 1e-12)
    assert cfg.max_r == 10.0


def test_factory_config(integrator_config_factory):
    cfg = integrator_config_factory(max_r=3.0)
    assert cfg.max_r == 3.0
    assert cfg.with_horizon(7.0).max_r == 7.0
    assert cfg.with_horizon(7.0).rel_tol == cfg.rel_tol
    assert set(cfg.as_dict()) == {'rel_tol', 'abs_tol', 'max_step', 'max_r'}


@pytest.mark.parametrize("kwargs, field", [
    ({'rel_tol': 0.0}, 'rel_tol'),
    ({'abs_tol': 1.5}, 'abs_tol'),
    ({'max_step': -1.0}, 'max_step'),
    ({'max_r': 0.0}, 'max_r'),
])
def test_config_rejects(kwargs, field):
    with pytest.raises(InvalidParameters) as exc:
        IntegratorConfig(**kwargs)
    assert exc.value.field == field


def test_wavelength_step():
    params = PucciParams(0.5, 2.0, 3)
    assert wavelength_step(0.0, params) == pytest.approx(math.pi / 10)
    assert wavelength_step(1.5, params) == pytest.approx(math.pi / 20)


def _piecewise_linear(r, u):
    r, u = np.asarray(r, dtype=float), np.asarray(u, dtype=float)
    du = np.gradient(u, r)

    def dense(x):
        return np.array([np.interp(x, r, u), np.interp(x, r, du)])

    return Trajectory(r, u, du, dense, 1e-12)


def test_sign_change_brackets_skip_exact_zeros():
    traj = _piecewise_linear([0, 1, 2, 3, 4, 5], [1.0, 0.0, -1.0, -2.0, 0.0, 0.0])
    assert traj.sign_change_brackets() == [(0.0, 2.0)]


def test_sign_change_brackets_window():
    traj = _piecewise_linear([0, 1, 2, 3, 4], [1.0, -1.0, 2.0, -1.0, 3.0])
    assert traj.sign_change_brackets(1.5, 3.5) == [(2.0, 3.0), (3.0, 3.5)]


def test_sup_norm_and_states():
    traj = _piecewise_linear([0, 1, 2], [0.5, -2.0, 1.0])
    assert traj.sup_norm() == pytest.approx(2.0)
    assert traj.sup_norm(1.5, 2.0) == pytest.approx(1.0)
    assert [s.u for s in traj.states()] == [0.5, -2.0, 1.0]
    assert (traj.r_min, traj.r_max, len(traj)) == (0.0, 2.0, 3)
    assert traj.is_finite()


def test_single_node_trajectory_is_constant():
    traj = Trajectory([2.0], [0.3], [-0.1], None, 1e-12)
    assert traj.u_at(5.0) == 0.3
    assert traj.du_at(5.0) == -0.1
