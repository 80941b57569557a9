"""Verification suites run by ``manage.py verify``.

Every suite takes a ``VerifyContext`` and returns a list of ``CheckResult``.
When the command gives no ellipticity pair and dimension, each suite runs over
its own default parameter set.
"""
import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from apps.bifurcation.utils import mu_for_alpha, shoot_evb
from apps.cli.models import CheckResult
from apps.core.bessel import laplacian_first_eigenvalue
from apps.core.exceptions import MaxPrincipleViolation, NumericalFailure
from apps.core.models import Nonlinearity, Operator, PucciParams, RadialState, Sign
from apps.crosscheck.models import CoefficientField, GridProblem
from apps.crosscheck.utils import (
    b_side_mu, envelope_gap, first_half_eigenvalue_fd, linear_principal_eigenvalue,
    max_principle_trial, max_principle_trials, random_linear_eigenvalue,
    supersolution_slack, torsion_ladder,
)
from apps.integrate.models import IntegratorConfig
from apps.integrate.utils import integrate, zeros
from apps.spectrum.utils import (
    eigenfunction, gap_ratio, half_eigenvalue, half_eigenvalues, interlacing_report, lambda_sweep,
)
from pucci.logging import logger

STRUCTURE_GRID = [
    PucciParams(lo, hi, dim)
    for (lo, hi), dim in itertools.product([(1.0, 2.0), (1.0, 5.0), (0.5, 1.0)], [2, 3, 5])
]
CROSSCHECK_GRID = [PucciParams(1.0, 2.0, 2), PucciParams(1.0, 2.0, 3), PucciParams(1.0, 5.0, 3)]
ENVELOPE_PARAMS = PucciParams(1.0, 2.0, 2)
SWEEP_PARAMS = PucciParams(2.0, 2.0, 3)
SINGLE_PARAMS = PucciParams(1.0, 2.0, 3)

TRIALS = 100
FIELDS = 100
ENVELOPE_FUNCTIONS = 100
ENVELOPE_FIELDS = 1000


@dataclass(frozen=True)
class VerifyContext:
    params: Optional[PucciParams] = None
    cfg: IntegratorConfig = IntegratorConfig()
    seed: int = 42
    n: Optional[int] = None
    count: Optional[int] = None

    def param_set(self, default):
        if self.params is not None:
            return [self.params]
        return list(default) if isinstance(default, (list, tuple)) else [default]

    def grid_size(self, default):
        return self.n or default


def _tag(params):
    tag = f"lambda={params.lambda_lo:g} Lambda={params.lambda_hi:g} dim={params.dim}"
    return tag if params.operator is Operator.MAX else f"{tag} operator=min"


def _first_pair(params, cfg):
    """(smaller, larger) first half-eigenvalues: (mu+_1, mu-_1) for M+, swapped for M-."""
    plus = half_eigenvalue(Sign.PLUS, 1, params, cfg).mu
    minus = half_eigenvalue(Sign.MINUS, 1, params, cfg).mu
    return (plus, minus) if params.operator is Operator.MAX else (minus, plus)


def interlacing(ctx):
    results = []
    count = ctx.count or 6
    for params in ctx.param_set(STRUCTURE_GRID):
        plus = half_eigenvalues(Sign.PLUS, count + 1, params, ctx.cfg)
        minus = half_eigenvalues(Sign.MINUS, count + 1, params, ctx.cfg)
        report = interlacing_report(plus, minus, params)
        margin = min(check.margin for check in report.checks)
        orderings = ','.join(f"{k}{mark}" for k, mark in report.orderings)
        failures = ' '.join(f"{c.label}@k={c.k}" for c in report.failures)
        detail = f"k=1..{count} plus-vs-minus={orderings}" + (f" failed={failures}" if failures else '')
        results.append(CheckResult('interlacing', _tag(params), report.passed, margin, detail))
    return results


def gap(ctx):
    results = []
    for params in ctx.param_set(STRUCTURE_GRID):
        first, second = gap_ratio(params, ctx.cfg)
        if params.operator is Operator.MIN:
            first, second = 1.0 / first, 1.0 / second
        margin = first - second
        passed = margin >= -1e-10
        if params.is_laplacian:
            passed = passed and abs(first - 1.0) <= 1e-12 and abs(second - 1.0) <= 1e-12
        detail = f"ratio1={first!r} ratio2={second!r}"
        results.append(CheckResult('gap', _tag(params), passed, margin, detail))
    return results


def bounds(ctx):
    results = []
    for params in ctx.param_set(STRUCTURE_GRID):
        j2 = laplacian_first_eigenvalue(params.dim)
        low, high = _first_pair(params, ctx.cfg)
        low_margin = params.lambda_lo * j2 - low
        high_margin = high - params.lambda_hi * j2
        results.append(CheckResult(
            'bounds', f"{_tag(params)} first<=lambda*j^2", low_margin >= -1e-10 * max(1.0, low),
            low_margin, f"mu={low!r} bound={params.lambda_lo * j2!r}",
        ))
        results.append(CheckResult(
            'bounds', f"{_tag(params)} second>=Lambda*j^2", high_margin >= -1e-10 * max(1.0, high),
            high_margin, f"mu={high!r} bound={params.lambda_hi * j2!r}",
        ))
        order_margin = high - low
        strict = not params.is_laplacian
        results.append(CheckResult(
            'bounds', f"{_tag(params)} first-pair order",
            order_margin > 0 if strict else order_margin >= -1e-10 * max(1.0, high),
            order_margin,
        ))
    return results


def _max_jump(values):
    return float(np.max(np.abs(np.diff(values))))


def refinement_ratio(mus):
    """Largest jump of ``log mu`` on every other grid point over the largest on the full grid.

    The grid is meant to be geometric in lambda. The first half-eigenvalues
    behave like powers of lambda near the small end, so in these coordinates
    a continuous curve is close to affine and the ratio sits near 2, while a
    jump in mu keeps it near 1.
    """
    logs = np.log(np.asarray(mus, dtype=float))
    return _max_jump(logs[::2]) / _max_jump(logs)


def monotonicity(ctx):
    results = []
    for params in ctx.param_set(SWEEP_PARAMS):
        uniform = np.linspace(params.lambda_hi / 8, params.lambda_hi, 8)
        geometric = np.geomspace(params.lambda_hi / 8, params.lambda_hi, 15)
        for sign, direction in ((Sign.PLUS, 1.0), (Sign.MINUS, -1.0)):
            if params.operator is Operator.MIN:
                direction = -direction
            sweep = lambda_sweep(
                sign, 1, np.union1d(uniform, geometric), params.lambda_hi, params.dim,
                ctx.cfg, params.operator,
            )
            mus = np.array([mu for _, mu in sweep])
            margin = float(np.min(direction * np.diff(mus)))
            label = 'nondecreasing' if direction > 0 else 'nonincreasing'
            results.append(CheckResult(
                'monotonicity', f"{_tag(params)} mu{sign.label}_1 {label}", margin >= -1e-10, margin,
            ))
            on_geometric = np.isin([lam for lam, _ in sweep], geometric)
            refinement = refinement_ratio(mus[on_geometric])
            results.append(CheckResult(
                'monotonicity', f"{_tag(params)} mu{sign.label}_1 continuity", refinement >= 1.8,
                refinement - 1.8, f"log jump ratio under 2x refinement={refinement!r}",
            ))
    return results


def _fd_pair(grid):
    plus, phi = first_half_eigenvalue_fd(Sign.PLUS, grid)
    minus, _ = first_half_eigenvalue_fd(Sign.MINUS, grid)
    return plus, minus, phi


def maxprinciple(ctx):
    results = []
    for params in ctx.param_set(ENVELOPE_PARAMS):
        grid = GridProblem(params.with_operator(Operator.MAX), ctx.grid_size(1000))
        mu_plus, mu_minus, _ = _fd_pair(grid)
        b_mu, capped = b_side_mu(mu_plus, mu_minus)
        for side, mu, seed in (('a', 0.9 * mu_plus, ctx.seed), ('b', b_mu, ctx.seed + 1)):
            name = f"{_tag(params)} side={side} mu={mu!r}"
            try:
                verdicts = max_principle_trials(grid, side, mu, TRIALS, seed, capped=capped and side == 'b')
            except MaxPrincipleViolation as e:
                results.append(CheckResult('maxprinciple', name, False, -abs(e.value), f"node={e.node}"))
                continue
            margins = [v.tol - v.extreme if side == 'a' else v.extreme + v.tol for v in verdicts]
            detail = f"{sum(v.passed for v in verdicts)}/{TRIALS} trials" + (' capped' if capped and side == 'b' else '')
            results.append(CheckResult('maxprinciple', name, True, min(margins), detail))
    return results


def _convergence_order(errors, sizes):
    errors = np.maximum(np.asarray(errors, dtype=float), 1e-300)
    return float(np.polyfit(np.log(sizes), np.log(errors), 1)[0]) * -1.0


def crosscheck(ctx):
    results = []
    n = ctx.grid_size(4000)
    sizes = [n // 16, n // 8, n // 4, n // 2]
    for params in ctx.param_set(CROSSCHECK_GRID):
        params = params.with_operator(Operator.MAX)
        shooting = {
            Sign.PLUS: half_eigenvalue(Sign.PLUS, 1, params, ctx.cfg).mu,
            Sign.MINUS: half_eigenvalue(Sign.MINUS, 1, params, ctx.cfg).mu,
        }
        grid = GridProblem(params, n)
        fd_plus, fd_minus, phi = _fd_pair(grid)
        for sign, fd in ((Sign.PLUS, fd_plus), (Sign.MINUS, fd_minus)):
            rel = abs(fd - shooting[sign]) / shooting[sign]
            results.append(CheckResult(
                'crosscheck', f"{_tag(params)} mu{sign.label}_1 n={n}", rel <= 5e-3, 5e-3 - rel,
                f"fd={fd!r} shooting={shooting[sign]!r}",
            ))
            errors = [
                abs(first_half_eigenvalue_fd(sign, grid.with_n(size))[0] - shooting[sign])
                for size in sizes
            ]
            order = _convergence_order(errors, sizes)
            results.append(CheckResult(
                'crosscheck', f"{_tag(params)} mu{sign.label}_1 order", order >= 1.5, order - 1.5,
                f"n={sizes} order={order!r}",
            ))

        slack = supersolution_slack(0.99 * fd_plus, phi, grid)
        results.append(CheckResult(
            'crosscheck', f"{_tag(params)} supersolution at 0.99*mu+_1", slack <= 1e-6, 1e-6 - slack,
        ))
        ladder = torsion_ladder(grid, fd_plus)
        norms = [norm for _, norm in ladder]
        growth = float(np.min(np.diff(norms)))
        results.append(CheckResult(
            'crosscheck', f"{_tag(params)} torsion growth", growth > 0, growth,
            'sup=' + ','.join(f"{norm:.6g}" for norm in norms),
        ))
        results.append(_sharpness(params, grid, fd_plus, ctx.seed))
    return results


def _sharpness(params, grid, mu_plus, seed):
    mu = 1.01 * mu_plus
    g = np.random.default_rng(seed).uniform(0.0, 1.0, grid.n + 1)
    try:
        verdict = max_principle_trial(mu, g, grid)
        outcome, margin = 'held', verdict.tol - verdict.extreme
    except MaxPrincipleViolation as e:
        outcome, margin = f"violated at node {e.node}", -abs(e.value)
    except NumericalFailure as e:
        outcome, margin = f"no solution ({type(e).__name__})", math.nan
    logger.info(f"sharpness trial at mu={mu!r}: {outcome}")
    return CheckResult('crosscheck', f"{_tag(params)} sharpness at 1.01*mu+_1", True, margin, outcome, asserted=False)


def envelope(ctx):
    results = []
    for params in ctx.param_set(ENVELOPE_PARAMS):
        params = params.with_operator(Operator.MAX)
        grid = GridProblem(params, ctx.grid_size(1000))
        plus = half_eigenvalue(Sign.PLUS, 1, params, ctx.cfg).mu
        minus = half_eigenvalue(Sign.MINUS, 1, params, ctx.cfg).mu
        values = [random_linear_eigenvalue(grid, ctx.seed + i) for i in range(FIELDS)]
        margin = min(min(values) - (plus - 1e-2), (minus + 1e-2) - max(values))
        results.append(CheckResult(
            'envelope', f"{_tag(params)} random fields", margin >= 0, margin,
            f"{FIELDS} fields in [{min(values)!r}, {max(values)!r}]",
        ))

        j2 = laplacian_first_eigenvalue(params.dim)
        for value in (params.lambda_lo, params.lambda_hi):
            mu = linear_principal_eigenvalue(grid, CoefficientField.constant(grid, value))
            rel = abs(mu - value * j2) / (value * j2)
            results.append(CheckResult(
                'envelope', f"{_tag(params)} constant field {value:g}", rel <= 1e-3, 1e-3 - rel,
                f"mu={mu!r} expected={value * j2!r}",
            ))

        small = GridProblem(params, 64)
        rng = np.random.default_rng(ctx.seed)
        fields = [CoefficientField.random(small, rng) for _ in range(ENVELOPE_FIELDS)]
        worst = max(envelope_gap(rng.standard_normal(small.n + 1), small, fields)
                    for _ in range(ENVELOPE_FUNCTIONS))
        results.append(CheckResult(
            'envelope', f"{_tag(params)} discrete sup over fields", worst <= 1e-9, -worst,
            f"{ENVELOPE_FUNCTIONS} functions x {ENVELOPE_FIELDS} fields",
        ))
    return results


def oscillation(ctx):
    results = []
    count = ctx.count or 20
    for params in ctx.param_set(STRUCTURE_GRID):
        for sign in Sign:
            records = half_eigenvalues(sign, count, params, ctx.cfg)
            traj = records[-1].trajectory
            amplitude = traj.sup_norm(0.0, records[-1].beta)
            ratio = min(abs(record.dw_at_beta) for record in records) / amplitude
            results.append(CheckResult(
                'oscillation', f"{_tag(params)} sign={sign.label} K={count}", ratio >= 1e-6, ratio - 1e-6,
                f"beta_K={records[-1].beta!r}",
            ))
    return results


def scaling(ctx):
    results = []
    for params in ctx.param_set(SINGLE_PARAMS):
        for sign in Sign:
            base = half_eigenvalues(sign, 3, params, ctx.cfg)
            for radius in (0.5, 2.0):
                scaled = half_eigenvalues(sign, 3, params, ctx.cfg, radius=radius)
                rel = max(abs(s.mu * radius ** 2 / b.mu - 1.0) for s, b in zip(scaled, base))
                results.append(CheckResult(
                    'scaling', f"{_tag(params)} sign={sign.label} R={radius:g}", rel <= 1e-10, 1e-10 - rel,
                ))
                rel = _rescaled_zero_error(sign, base, radius, params, ctx.cfg)
                results.append(CheckResult(
                    'scaling', f"{_tag(params)} sign={sign.label} R={radius:g} re-integrated",
                    rel <= 1e-8, 1e-8 - rel,
                ))
    return results


def _rescaled_zero_error(sign, base, radius, params, cfg):
    """Integrate at mu_k(B_1)/R^2 and compare the k-th zero with R."""
    worst = 0.0
    for record in base:
        mu = record.mu / radius ** 2
        horizon = radius * (record.k + 0.5) / record.k
        traj = integrate(RadialState(0.0, float(sign.value), 0.0), mu, Nonlinearity.zero(),
                         params, cfg.with_horizon(horizon))
        found = zeros(traj)
        worst = max(worst, abs(found[record.k - 1] / radius - 1.0))
    return worst


def bifurcation(ctx):
    results = []
    nl = Nonlinearity.odd_power(-1.0, 3.0)
    alphas = (1e-2, 1e-3, 1e-4)
    for params in ctx.param_set(SINGLE_PARAMS):
        for k, sign in itertools.product((1, 2), Sign):
            record = half_eigenvalue(sign, k, params, ctx.cfg)
            mus = [mu_for_alpha(sign.value * a, k, sign, nl, params, ctx.cfg) for a in alphas]
            distance = abs(mus[-1] - record.mu)
            tag = f"{_tag(params)} k={k} sign={sign.label}"
            results.append(CheckResult(
                'bifurcation', f"{tag} limit", distance <= 1e-4, 1e-4 - distance,
                'mu(alpha)=' + ','.join(repr(mu) for mu in mus),
            ))

            shot = shoot_evb(sign.value * alphas[-1], mus[-1], nl, params, ctx.cfg)
            results.append(CheckResult(
                'bifurcation', f"{tag} nodal count", shot.nodal_count == k - 1, 0.0,
                f"count={shot.nodal_count}",
            ))
            if k == 1 and sign is Sign.PLUS:
                inside = shot.trajectory.r < 1.0 - 1e-9
                lowest = float(np.min(shot.trajectory.u[inside]))
                results.append(CheckResult('bifurcation', f"{tag} positive profile", lowest > 0, lowest))

            phi = eigenfunction(record, 1000, params, ctx.cfg)
            profile = np.asarray(shot.trajectory.u_at(phi.radii))
            profile = profile / np.max(np.abs(profile))
            distance = float(np.max(np.abs(profile - phi.sup_normalized())))
            results.append(CheckResult(
                'bifurcation', f"{tag} normalized profile", distance <= 1e-3, 1e-3 - distance,
            ))
    return results


SUITES = {
    'interlacing': interlacing,
    'gap': gap,
    'monotonicity': monotonicity,
    'bounds': bounds,
    'maxprinciple': maxprinciple,
    'crosscheck': crosscheck,
    'envelope': envelope,
    'oscillation': oscillation,
    'scaling': scaling,
    'bifurcation': bifurcation,
}


def run_suite(name, ctx):
    names = list(SUITES) if name == 'all' else [name]
    results = []
    for suite in names:
        logger.info(f"running verification suite {suite}")
        results += SUITES[suite](ctx)
    return results
