# -*- coding: utf-8 -*-
"""Fixed points of the unequal crossover recombinators"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from crossover.base import DEFAULT_LEAK_THRESHOLD, RecombinatorSpec, build_recombinator
from crossover.base_utils import support_bound
from crossover.dynamics import EvolveConfig, evolve_discrete
from crossover.errors import MeanOutOfRange, NotConverged, TruncationTooSmall
from crossover.genfunc import coeffs_from_distribution
from crossover.kernel import KernelQ
from crossover.measure import DEFAULT_NMAX, Distribution, tv_distance
from crossover.recombinator_general import GeneralRecombinator

LOG = logging.getLogger(__name__)

ANALYTIC_TAIL_TOL = 1.e-12
DEFAULT_WINDOW = 12
DEFAULT_TOL = 1.e-12
DEFAULT_MAX_ITER = 10000
MONOTONICITY_TOL = 1.e-10


@dataclass(frozen=True)
class FixedPointResult:
    """
    A fixed point together with how it was obtained.

    Attributes
    ----------
    distribution : Distribution
    q : float, optional
        Penalty of the recombinator; None for the Takahata model.
    takahata : bool
    mean_target : float
    residual : float
        ||R(p) - p||_1.
    provenance : str
        'analytic' or 'iterative'.
    iterations : int, optional
        Number of iterations of an iterative result.
    """
    distribution: Distribution
    q: Optional[float]
    takahata: bool
    mean_target: float
    residual: float
    provenance: str
    iterations: Optional[int] = None

    @property
    def spec(self):
        return RecombinatorSpec.from_q(self.q, takahata=self.takahata, truncation=self.distribution.nmax)


def _residual(p: Distribution, spec: RecombinatorSpec):
    return tv_distance(build_recombinator(spec).apply(p), p)


def _check_mean(m, N):
    if not 0. <= m <= N:
        raise MeanOutOfRange('The mean copy number {0} must lie in [0, {1}].'.format(m, N))


def analytic_internal(m, N=DEFAULT_NMAX):
    """
    Fixed point of internal UC with mean m: the mass sits on floor(m) and ceil(m).

    p_floor(m) = floor(m) + 1 - m and p_ceil(m) = m + 1 - ceil(m); an integer m gives a point mass.
    """
    _check_mean(m, N)
    values = np.zeros(N + 1)
    lower, upper = math.floor(m), math.ceil(m)
    if lower == upper:
        values[lower] = 1.
    else:
        values[lower] = lower + 1. - m
        values[upper] = m + 1. - upper
    p = Distribution(values)
    spec = RecombinatorSpec('internal', truncation=N)
    return FixedPointResult(p, 0., False, float(m), _residual(p, spec), 'analytic')


def analytic_random(m, N=DEFAULT_NMAX):
    """
    Fixed point of random UC with mean m.

    p_k = (2/(m+2))^2 (k+1) x^k with x = m/(m+2). The mass beyond N is stored as tail mass and must
    be below 1e-12, otherwise TruncationTooSmall is raised.
    """
    if m < 0:
        raise MeanOutOfRange('The mean copy number must be nonnegative, got {0}.'.format(m))
    x = m / (m + 2.)
    k = np.arange(N + 1)
    powers = np.empty(N + 1)
    powers[0] = 1.
    powers[1:] = x ** k[1:]
    values = (1. - x) ** 2 * (k + 1) * powers
    tail = x ** (N + 1) * ((N + 2) - (N + 1) * x)
    if tail >= ANALYTIC_TAIL_TOL:
        raise TruncationTooSmall('The random UC fixed point with m={0} loses {1:.3e} beyond N={2}; increase nmax.'
                                 .format(m, tail, N))
    p = Distribution(values, tail)
    spec = RecombinatorSpec('random', truncation=N)
    return FixedPointResult(p, 1., False, float(m), _residual(p, spec), 'analytic')


def analytic_takahata(m, N=DEFAULT_NMAX):
    """Geometric fixed point p_k = (1/(m+1)) (m/(m+1))^k of the Takahata model."""
    if m < 0:
        raise MeanOutOfRange('The mean copy number must be nonnegative, got {0}.'.format(m))
    r = m / (m + 1.)
    powers = np.empty(N + 1)
    powers[0] = 1.
    powers[1:] = r ** np.arange(1, N + 1)
    tail = r ** (N + 1)
    if tail >= ANALYTIC_TAIL_TOL:
        raise TruncationTooSmall('The Takahata fixed point with m={0} loses {1:.3e} beyond N={2}; increase nmax.'
                                 .format(m, tail, N))
    p = Distribution(powers / (m + 1.), tail)
    spec = RecombinatorSpec('takahata', truncation=N)
    return FixedPointResult(p, None, True, float(m), _residual(p, spec), 'analytic')


def solve_numeric(q, m, N=DEFAULT_NMAX, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                  leak_threshold=DEFAULT_LEAK_THRESHOLD):
    """
    Fixed point of R_q with mean m by plain iteration of the recombinator.

    The iteration starts from the random UC fixed point with mean m and conserves the mean. It stops once
    two successive iterates are closer than tol in total variation.

    Raises
    ----------
    NotConverged if max_iter iterations do not reach tol; the last iterate is attached as ``result``.
    """
    if tol <= 0:
        raise ValueError('tol must be positive, got {0}.'.format(tol))
    start = analytic_random(m, N).distribution
    cfg = EvolveConfig(mode='discrete', q=q, steps=max_iter, stop_tol=tol, truncation=N,
                       leak_threshold=leak_threshold, record_every=max(1, max_iter))
    trajectory = evolve_discrete(start, cfg)
    p = trajectory.final.state
    result = FixedPointResult(p, float(q), False, float(m), _residual(p, cfg.recombinator_spec()), 'iterative',
                              trajectory.iterations)
    if not trajectory.converged:
        raise NotConverged('No fixed point for q={0} within {1} iterations; last increment {2:.3e}.'
                           .format(q, max_iter, trajectory.last_increment),
                           result=result, iterations=trajectory.iterations)
    LOG.info('Fixed point for q=%g, m=%g after %d iterations, residual %.3e', q, m, result.iterations,
             result.residual)
    return result


def reversibility_residual(p: Distribution, kernel, window=DEFAULT_WINDOW):
    """
    Largest violation of detailed balance, max |T_{ij,kl} p_k p_l - T_{kl,ij} p_i p_j| over i + j = k + l <= window.

    Parameters
    ----------
    p : Distribution
    kernel : KernelQ or float
    window : int
    """
    if not isinstance(kernel, KernelQ):
        kernel = KernelQ(kernel)
    values = np.zeros(window + 1)
    stored = p.values[:window + 1]
    values[:stored.size] = stored
    worst = 0.
    for n in range(window + 1):
        pairs = values[:n + 1] * values[n::-1]
        flow = kernel.block(n) * pairs[None, :]
        worst = max(worst, float(np.abs(flow - flow.T).max()))
    return worst


def monotonicity_check(p: Distribution, q, qprime, K=None, kernel_factory=KernelQ):
    """
    True iff coeffs(R_q(p))_j <= coeffs(R_q'(p))_j + 1e-10 for all j <= K.

    Both recombinators use the general kernel, built by kernel_factory, and enough room that nothing
    is truncated. K defaults to twice the support of p.
    """
    if q > qprime:
        raise ValueError('monotonicity_check needs q <= qprime, got {0} > {1}.'.format(q, qprime))
    nmax = 2 * max(support_bound(p.values), 1)
    K = nmax if K is None else K
    lower = GeneralRecombinator(kernel_factory(q), truncation=nmax).apply(p)
    upper = GeneralRecombinator(kernel_factory(qprime), truncation=nmax).apply(p)
    a = coeffs_from_distribution(lower, K).values
    b = coeffs_from_distribution(upper, K).values
    return bool((a <= b + MONOTONICITY_TOL).all())


def positivity_check(p: Distribution, floor=1.e-14):
    """True iff p_k > 0 for every k up to the last entry above floor."""
    above = np.flatnonzero(p.values > floor)
    if above.size == 0:
        return False
    return bool((p.values[:above[-1] + 1] > 0.).all())
