import numpy as np
from scipy import integrate as scipy_integrate
from scipy import optimize

from apps.core.exceptions import NoBracket, NonFinite
from apps.core.utils import make_rhs
from apps.integrate.models import Trajectory, wavelength_step
from pucci import settings
from pucci.logging import logger


def _blowup_event(r, y):
    return settings.BLOWUP_LIMIT - max(abs(y[0]), abs(y[1]))


_blowup_event.terminal = True


def integrate(initial, mu, nl, params, cfg):
    """Integrate the radial equation from ``initial`` up to ``cfg.max_r``.

    Dormand-Prince 5(4) with dense output. The RHS is only piecewise smooth
    (kinks where u' or the argument of M change sign); the embedded error
    estimate shrinks the steps that straddle a kink. The step is also capped by
    ``wavelength_step`` so that no step can hold two zeros of u.
    """
    if initial.r >= cfg.max_r:
        return Trajectory([initial.r], [initial.u], [initial.du], None, cfg.abs_tol)

    max_step = min(cfg.max_step, wavelength_step(mu, params))
    result = scipy_integrate.solve_ivp(
        make_rhs(mu, nl, params),
        (initial.r, cfg.max_r),
        [initial.u, initial.du],
        method='RK45',
        rtol=cfg.rel_tol,
        atol=cfg.abs_tol,
        max_step=max_step,
        dense_output=True,
        events=_blowup_event,
    )
    if result.status == 1:
        raise NonFinite(float(result.t_events[0][0]), 'solution blew up')
    traj = Trajectory(result.t, result.y[0], result.y[1], result.sol, cfg.abs_tol)
    if result.status != 0 or not traj.is_finite():
        raise NonFinite(float(result.t[-1]), result.message)

    logger.debug(
        f"integrated mu={mu!r} on [{initial.r!r}, {cfg.max_r!r}]: "
        f"{len(result.t)} nodes, {result.nfev} rhs evaluations"
    )
    return traj


def locate_sign_change(traj, bracket):
    """Root of the dense output of u inside ``bracket`` (Brent's method)."""
    a, b = bracket
    u_a, u_b = traj.u_at(a), traj.u_at(b)
    if u_a == 0.0:
        return float(a)
    if u_b == 0.0:
        return float(b)
    if np.sign(u_a) == np.sign(u_b):
        raise NoBracket(f"u has the same sign at both ends of [{a!r}, {b!r}]")
    return float(optimize.brentq(
        traj.u_at, a, b, xtol=settings.ZERO_XTOL, rtol=4 * np.finfo(float).eps, maxiter=200
    ))


def zeros(traj, r_lo=None, r_hi=None):
    """Every sign change of u inside (r_lo, r_hi), refined on the dense output."""
    return [locate_sign_change(traj, bracket) for bracket in traj.sign_change_brackets(r_lo, r_hi)]
