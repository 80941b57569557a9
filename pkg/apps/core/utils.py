from apps.core.models import Operator
from pucci import settings


def eval_m(s, params):
    """m(s): Lambda*s for s > 0, lambda*s for s <= 0."""
    return params.lambda_hi * s if s > 0 else params.lambda_lo * s


def eval_M(s, params):
    """M(s): s/Lambda for s > 0, s/lambda for s <= 0. Inverse of m."""
    return s / params.lambda_hi if s > 0 else s / params.lambda_lo


def curvature_at_origin(u0, mu, f_val, params):
    """Limiting v''(0), the fixed point of s = M(-(N-1) m(s) - mu*u0 - f_val).

    With q = mu*u0 + f_val the fixed point is -q/(lambda*N) for q > 0 and
    -q/(Lambda*N) for q < 0; in both cases s and the argument of M share a sign.
    """
    q = mu * u0 + f_val
    if q > 0:
        return -q / (params.lambda_lo * params.dim)
    if q < 0:
        return -q / (params.lambda_hi * params.dim)
    return 0.0


def _max_op_second_derivative(r, u, du, mu, nl, lo, hi, dim):
    f_val = nl(u, mu)
    if r < settings.R_EPS:
        q = mu * u + f_val
        if q > 0:
            return -q / (lo * dim)
        if q < 0:
            return -q / (hi * dim)
        return 0.0
    m_du = hi * du if du > 0 else lo * du
    arg = -(dim - 1) / r * m_du - mu * u - f_val
    return arg / hi if arg > 0 else arg / lo


def rhs(state, mu, nl, params):
    """(u', u'') of the radial equation -M(D^2 u) = mu*u + f(u, mu).

    The minimal operator is evaluated on the sign-flipped state through
    M+(-X) = -M-(X); every family in ``Nonlinearity`` is odd, so f is unchanged.
    """
    lo, hi, dim = params.lambda_lo, params.lambda_hi, params.dim
    if params.operator is Operator.MIN:
        ddu = _max_op_second_derivative(state.r, -state.u, -state.du, mu, nl, lo, hi, dim)
        return state.du, -ddu
    return state.du, _max_op_second_derivative(state.r, state.u, state.du, mu, nl, lo, hi, dim)


def make_rhs(mu, nl, params):
    """Return ``fun(r, y)`` in the form expected by ``scipy.integrate.solve_ivp``."""
    lo, hi, dim = params.lambda_lo, params.lambda_hi, params.dim
    flip = -1.0 if params.operator is Operator.MIN else 1.0

    def fun(r, y):
        u, du = y[0], y[1]
        ddu = _max_op_second_derivative(r, flip * u, flip * du, mu, nl, lo, hi, dim)
        return [du, flip * ddu]

    return fun


def linear_regime(ddu, du, params):
    """Exponent d and coefficient kappa of the linear form active at a sign pattern.

    On a stretch where the signs of u'' and u' are fixed, the radial equation is
    {w' r^(d-1)}' = -r^(d-1) mu w / kappa.
    """
    if params.operator is Operator.MIN:
        ddu, du = -ddu, -du
    if ddu <= 0:
        if du <= 0:
            return params.dim, params.lambda_lo
        return params.tilde_n_minus, params.lambda_lo
    if du > 0:
        return params.dim, params.lambda_hi
    return params.tilde_n_plus, params.lambda_hi
