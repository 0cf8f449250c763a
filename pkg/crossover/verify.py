# -*- coding: utf-8 -*-
"""
Seeded numerical checks of the conservation laws, contraction bounds and convergence results.

Every check draws its random inputs from a generator seeded with the configured seed, so the report is
reproducible. A check that raises is reported as failed.
"""

import logging
import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from crossover.base import lipschitz_ratio
from crossover.config import RunConfig
from crossover.dynamics import EvolveConfig, coeff_evolve_continuous, evolve_continuous, evolve_discrete
from crossover.fixpoint import (analytic_internal, analytic_random, analytic_takahata, monotonicity_check,
                                positivity_check, reversibility_residual, solve_numeric)
from crossover.genfunc import (CoeffVector, coefficient_lipschitz_bound, coeffs_from_distribution,
                               contraction_factor, distribution_from_coeffs, induced_recombinator,
                               takahata_coeffs, weighted_metric)
from crossover.kernel import KernelQ, c_coefficient_closed_form, validate_row
from crossover.measure import mean, moment_report, point_mass, random_distribution, tv_distance
from crossover.recombinator_general import GeneralRecombinator
from crossover.recombinator_internal import InternalRecombinator
from crossover.recombinator_random import RandomRecombinator
from crossover.recombinator_takahata import TakahataRecombinator

LOG = logging.getLogger(__name__)

Q_GRID = (0., 0.25, 0.5, 0.75, 1.)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    value: Optional[float]
    tolerance: float

    def as_dict(self):
        return asdict(self)


def _at_most(name, value, tolerance):
    return CheckResult(name, bool(value <= tolerance), float(value), tolerance)


def _at_least(name, value, tolerance):
    return CheckResult(name, bool(value >= tolerance), float(value), tolerance)


class _Context(object):

    def __init__(self, config: RunConfig, kernel_factory):
        self.config = config
        self.kernel_factory = kernel_factory
        self._kernels = {}

    def rng(self):
        return np.random.default_rng(self.config.seed)

    def kernel(self, q):
        if q not in self._kernels:
            self._kernels[q] = self.kernel_factory(q)
        return self._kernels[q]

    def random_distributions(self, rng, count, max_support, mean_target=None, decay=0.7):
        out = []
        for _ in range(count):
            support = int(rng.integers(max(1, math.ceil(mean_target or 0.)), max_support + 1))
            out.append(random_distribution(rng, support, mean_target, decay=decay))
        return out


def check_kernel(ctx):
    sums, means = 0., 0.
    for q in Q_GRID:
        kernel = ctx.kernel(q)
        for k in range(41):
            for l in range(41):
                report = validate_row(kernel, k, l)
                sums = max(sums, report.sum_deviation)
                means = max(means, report.mean_deviation)
    return [_at_most('kernel_row_sum', sums, 1.e-12), _at_most('kernel_row_mean', means, 1.e-12)]


def check_kernel_closed_form(ctx):
    worst = 0.
    for q in (0., 0.25, 0.5, 0.75, 0.999):
        kernel = ctx.kernel(q)
        for k in range(31):
            for l in range(31):
                worst = max(worst, abs(kernel.c_coefficient(k, l) - c_coefficient_closed_form(q, k, l)))
    return [_at_most('kernel_closed_form', worst, 1.e-10)]


def check_kernel_symmetry(ctx):
    asymmetric = 0
    for q in Q_GRID:
        kernel = ctx.kernel(q)
        for k in range(13):
            for l in range(13):
                for i in range(k + l + 1):
                    j = k + l - i
                    t = kernel.transition(i, j, k, l)
                    if t != kernel.transition(j, i, k, l) or t != kernel.transition(i, j, l, k):
                        asymmetric += 1
    identity = 0
    for n in range(51):
        j = np.arange(n + 1)
        for i in range(n + 1):
            total = np.sum(1 + np.minimum(np.minimum(i, j), np.minimum(n - i, n - j)))
            identity = max(identity, abs(int(total) - (i + 1) * (n - i + 1)))
    return [_at_most('kernel_symmetry', asymmetric, 0.), _at_most('kernel_weight_identity', identity, 0.)]


def check_specialization(ctx):
    rng = ctx.rng()
    internal_gap, random_gap, fft_gap = 0., 0., 0.
    for p in ctx.random_distributions(rng, ctx.config.samples, 64):
        nmax = 2 * p.nmax
        general_0 = GeneralRecombinator(ctx.kernel(0.), truncation=nmax).apply(p)
        general_1 = GeneralRecombinator(ctx.kernel(1.), truncation=nmax).apply(p)
        direct = RandomRecombinator(truncation=nmax).apply(p)
        internal_gap = max(internal_gap, tv_distance(general_0, InternalRecombinator(truncation=nmax).apply(p)))
        random_gap = max(random_gap, tv_distance(general_1, direct))
        fft_gap = max(fft_gap, tv_distance(direct, RandomRecombinator(truncation=nmax, use_fft=True).apply(p)))
    return [_at_most('specialization_internal', internal_gap, 1.e-12),
            _at_most('specialization_random', random_gap, 1.e-12),
            _at_most('specialization_fft', fft_gap, 1.e-10)]


def _recombinators(ctx, nmax):
    return [GeneralRecombinator(ctx.kernel(0.5), truncation=nmax), InternalRecombinator(truncation=nmax),
            RandomRecombinator(truncation=nmax), TakahataRecombinator(truncation=nmax)]


def check_conservation(ctx):
    rng = ctx.rng()
    mass, drift = 0., 0.
    for p in ctx.random_distributions(rng, ctx.config.samples, 32):
        for recombinator in _recombinators(ctx, 2 * p.nmax):
            out = recombinator.apply(p)
            mass = max(mass, abs(out.mass + out.tail_mass - 1.))
            drift = max(drift, abs(mean(out) - mean(p)))
    return [_at_most('mass_conservation', mass, 1.e-12), _at_most('mean_conservation', drift, 1.e-10)]


def check_lipschitz(ctx):
    rng = ctx.rng()
    worst = 0.
    for _ in range(2 * ctx.config.samples):
        p, r = ctx.random_distributions(rng, 2, 16)
        recombinator = _recombinators(ctx, 32)[int(rng.integers(4))]
        worst = max(worst, lipschitz_ratio(recombinator, p.values, r.values))
    return [_at_most('lipschitz', worst, 2. + 1.e-9)]


def check_internal(ctx):
    residual = max(analytic_internal(m, 16).residual for m in (0., 1.5, 2.5, 7.25))
    target = analytic_internal(2.5, 16).distribution
    rng = ctx.rng()
    distance, increase, descent_failures = 0., 0., 0
    cfg = EvolveConfig(mode='discrete', q=0., steps=10000, stop_tol=1.e-12, truncation=16)
    for p in ctx.random_distributions(rng, 20, 10, mean_target=2.5):
        trajectory = evolve_discrete(p, cfg)
        distance = max(distance, tv_distance(trajectory.final.state, target))
        for before, after in zip(trajectory.samples[:-1], trajectory.samples[1:]):
            increase = max(increase, after.M1 - before.M1, after.Mr - before.Mr)
            if tv_distance(before.state, target) >= 1.e-6:
                for name in ('M1', 'Mr'):
                    if not getattr(after, name) < getattr(before, name) - 1.e-12:
                        descent_failures += 1
    return [_at_most('internal_fixed_points', residual, 1.e-12),
            _at_most('internal_convergence', distance, 1.e-6),
            _at_most('internal_lyapunov', increase, 1.e-10),
            _at_most('internal_strict_descent', descent_failures, 0.)]


def check_random(ctx):
    nmax = max(ctx.config.nmax, 128)
    residual = max(analytic_random(m, nmax).residual for m in (0., 1., 2., 5.))
    fixed = analytic_random(2., nmax).distribution
    values = abs(fixed.values[:3] - np.array([0.25, 0.25, 0.1875])).max()

    rng = ctx.rng()
    starts = [point_mass(2, nmax)] + [p.resized(nmax) for p in
                                      ctx.random_distributions(rng, 10, 8, mean_target=2.)]
    discrete, continuous = 0., 0.
    for p in starts:
        steps = evolve_discrete(p, EvolveConfig(mode='discrete', q=1., steps=50, truncation=nmax))
        flow = evolve_continuous(p, EvolveConfig(mode='continuous', q=1., t_end=50., dt=0.1, truncation=nmax,
                                                 record_every=500))
        discrete = max(discrete, tv_distance(steps.final.state, fixed))
        continuous = max(continuous, tv_distance(flow.final.state, fixed))
    return [_at_most('random_fixed_points', residual, 1.e-9), _at_most('random_fixed_point_values', values, 1.e-12),
            _at_most('random_convergence_discrete', discrete, 1.e-5),
            _at_most('random_convergence_continuous', continuous, 1.e-5)]


def check_flows(ctx):
    """Mass and mean along both dynamics up to t=100."""
    rng = ctx.rng()
    mass, drift = 0., 0.
    for q in (0., 1.):
        for p in ctx.random_distributions(rng, 3, 8, mean_target=2.):
            p = p.resized(64)
            for cfg in (EvolveConfig(mode='discrete', q=q, steps=100, stop_tol=0., truncation=64),
                        EvolveConfig(mode='continuous', q=q, t_end=100., dt=0.1, truncation=64)):
                trajectory = (evolve_discrete if cfg.mode == 'discrete' else evolve_continuous)(p, cfg)
                m0 = trajectory.samples[0].mean
                for sample in trajectory.samples:
                    mass = max(mass, abs(sample.state.mass + sample.tail_mass - 1.))
                    drift = max(drift, abs(sample.mean - m0) - 64 * sample.tail_mass)
    return [_at_most('flow_mass', mass, 1.e-8), _at_most('flow_mean', drift, 1.e-8)]


def _random_coeffs(rng, alpha, delta, gamma, K=32):
    """A random element of X_{alpha,delta}: a_k uniform in [0, delta^k] for k >= 2."""
    values = rng.random(K + 1) * delta ** np.arange(K + 1)
    values[:2] = 1., alpha
    return CoeffVector(values, alpha=alpha, delta=delta, gamma=gamma)


def check_coefficients(ctx):
    rng = ctx.rng()
    diagram = 0.
    for p in ctx.random_distributions(rng, ctx.config.samples, 16):
        K = 2 * p.nmax
        a = induced_recombinator(coeffs_from_distribution(p, K))
        b = coeffs_from_distribution(RandomRecombinator(truncation=K).apply(p), K)
        diagram = max(diagram, weighted_metric(a, a.with_values(b.values)))

    gamma, delta = ctx.config.gamma, 1.5
    ratio, lipschitz = 0., 0.
    for _ in range(ctx.config.samples):
        alpha = rng.uniform(0.1, 1.)
        a, b, c = [_random_coeffs(rng, first, delta, gamma) for first in (alpha, alpha, rng.uniform(0.1, 1.))]
        ratio = max(ratio, weighted_metric(induced_recombinator(a), induced_recombinator(b)) / weighted_metric(a, b))
        lipschitz = max(lipschitz,
                        weighted_metric(induced_recombinator(a), induced_recombinator(c)) / weighted_metric(a, c))

    roundtrip = 0.
    for p in ctx.random_distributions(rng, ctx.config.samples, 20, decay=0.4):
        back = distribution_from_coeffs(coeffs_from_distribution(p, p.nmax + 4), p.nmax)
        roundtrip = max(roundtrip, tv_distance(back, p))

    return [_at_most('coefficient_commuting_diagram', diagram, 1.e-9),
            _at_most('coefficient_contraction', ratio, contraction_factor(gamma) + 1.e-12),
            _at_most('coefficient_lipschitz', lipschitz, coefficient_lipschitz_bound(gamma)),
            _at_most('coefficient_roundtrip', roundtrip, 1.e-8)]


def check_coefficient_flow(ctx):
    values = np.zeros(65)
    values[:2] = 1.
    samples = coeff_evolve_continuous(CoeffVector(values, alpha=1., delta=1.), t_end=40., dt=0.1)
    distances = np.array([s.distance for s in samples])
    times = np.array([s.t for s in samples])
    rate = 1. - contraction_factor(samples[0].coeffs.gamma)
    excess = np.max(distances - distances[0] * np.exp(-rate * times))
    return [_at_most('coefficient_flow_limit', distances[-1], 1.e-6),
            _at_most('coefficient_flow_lyapunov', np.max(np.diff(distances)), 1.e-10),
            _at_most('coefficient_flow_exponential', excess, 1.e-12)]


def check_fixed_points_intermediate(ctx):
    residual, reversibility, positive = 0., np.inf, True
    for q in (0.25, 0.5, 0.75):
        result = solve_numeric(q, 2., N=64, tol=1.e-12)
        residual = max(residual, result.residual)
        reversibility = min(reversibility, reversibility_residual(result.distribution, q))
        positive = positive and positivity_check(result.distribution)
    return [_at_most('intermediate_residual', residual, 1.e-10),
            _at_least('intermediate_irreversible', reversibility, 1.e-4),
            _at_least('intermediate_positive', float(positive), 1.)]


def check_monotonicity(ctx):
    rng = ctx.rng()
    failures = 0
    for p in ctx.random_distributions(rng, ctx.config.samples, 32):
        for q, qprime in ((0., 0.5), (0.5, 1.), (0., 1.)):
            if not monotonicity_check(p, q, qprime, kernel_factory=ctx.kernel):
                failures += 1
    return [_at_most('monotonicity', failures, 0.)]


def check_takahata(ctx):
    result = analytic_takahata(1., max(ctx.config.nmax, 64))
    b = takahata_coeffs(coeffs_from_distribution(result.distribution, 15))
    return [_at_most('takahata_fixed_point', result.residual, 1.e-9),
            _at_most('takahata_coefficients', np.abs(b.values - 1.).max(), 1.e-6)]


def check_moments(ctx):
    rng = ctx.rng()
    failures = 0
    for p, r in zip(ctx.random_distributions(rng, ctx.config.samples, 16),
                    ctx.random_distributions(rng, ctx.config.samples, 16)):
        s = ctx.random_distributions(rng, 1, 16)[0]
        if tv_distance(p, r) > tv_distance(p, s) + tv_distance(s, r) + 1.e-15:
            failures += 1
        report = moment_report(p)
        if report.M1 <= 0. or report.Mr <= 0.:
            failures += 1
    return [_at_most('tv_metric_and_moments', failures, 0.)]


CHECKS = (check_kernel, check_kernel_closed_form, check_kernel_symmetry, check_specialization,
          check_conservation, check_lipschitz, check_internal, check_random, check_flows, check_coefficients,
          check_coefficient_flow, check_fixed_points_intermediate, check_monotonicity, check_takahata,
          check_moments)


def verify_suite(config: RunConfig = None, kernel_factory=KernelQ):
    """
    Runs every check and returns the report.

    Parameters
    ----------
    config : RunConfig
        Supplies the seed, the number of random samples per check and the truncation bound.
    kernel_factory : callable
        Builds the kernel for a given q. Passing a factory that skips normalization makes the kernel checks
        fail, which is how the suite is tested against itself.

    Returns
    ----------
    List of dictionaries {name, passed, value, tolerance}, sorted by name.
    """
    config = RunConfig() if config is None else config
    ctx = _Context(config, kernel_factory)
    results = []
    for check in CHECKS:
        try:
            found = check(ctx)
        except Exception as error:
            LOG.error('%s raised %s: %s', check.__name__, type(error).__name__, error)
            found = [CheckResult(check.__name__[len('check_'):], False, None, 0.)]
        for result in found:
            LOG.info('%-34s %s (value %s, tolerance %g)', result.name, 'ok' if result.passed else 'FAILED',
                     result.value, result.tolerance)
        results.extend(found)
    return [result.as_dict() for result in sorted(results, key=lambda result: result.name)]


def all_passed(report):
    return all(entry['passed'] for entry in report)
