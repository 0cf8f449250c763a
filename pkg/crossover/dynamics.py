# -*- coding: utf-8 -*-
"""Discrete-generation and continuous-time evolution under unequal crossover"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from crossover.base import DEFAULT_LEAK_THRESHOLD, Recombinator, RecombinatorSpec, build_recombinator
from crossover.errors import CoefficientOverflow, ConfigError, LeakExceeded, MassDrift, PositivityLost
from crossover.genfunc import (CoeffVector, DEFAULT_GAMMA, coeffs_from_distribution, geometric_coeffs,
                               weighted_metric)
from crossover.measure import DEFAULT_NMAX, DEFAULT_R, Distribution, moment_report, tv_distance

LOG = logging.getLogger(__name__)

MODES = ('discrete', 'continuous')
# Negative entries down to -CLIP_TOL are integration roundoff and are clipped; below that the step failed.
CLIP_TOL = 1.e-9
CLIP_WARN = 1.e-12
MASS_TOL = 1.e-9
LYAPUNOV_TOL = 1.e-10


@dataclass(frozen=True)
class EvolveConfig:
    """
    Settings of one evolution run.

    Attributes
    ----------
    mode : str
        'discrete' (p(t+1) = R(p(t))) or 'continuous' (dp/dt = R(p) - p).
    q : float, optional
        Overhang penalty; exactly one of q and takahata must be given.
    takahata : bool
        Evolve under the Takahata model instead.
    steps : int, optional
        Number of generations (discrete mode).
    t_end : float, optional
        Final time (continuous mode).
    dt : float
        Step of the fourth-order Runge-Kutta integration, 0 < dt <= 1.
    stop_tol : float
        Discrete runs stop once two successive states are closer than this in total variation; 0 runs every step.
    target : Distribution, optional
        Reference state for the tv_to_target monitor.
    truncation, leak_threshold :
        Passed to the recombinator.
    r : float
        Order of the centered moment M_r that is monitored besides M_1.
    coeff_order : int, optional
        If set and q = 1, the weighted coefficient distance to the fixed point is monitored with this K.
    gamma : float
        Metric parameter of that distance.
    record_every : int
        Keep every n-th state; the initial and the final state are always kept.
    """
    mode: str = 'discrete'
    q: Optional[float] = None
    takahata: bool = False
    steps: Optional[int] = None
    t_end: Optional[float] = None
    dt: float = 0.1
    stop_tol: float = 1.e-10
    target: Optional[Distribution] = None
    truncation: int = DEFAULT_NMAX
    leak_threshold: float = DEFAULT_LEAK_THRESHOLD
    r: float = DEFAULT_R
    coeff_order: Optional[int] = None
    gamma: float = DEFAULT_GAMMA
    record_every: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ConfigError('mode must be discrete or continuous, got {0!r}.'.format(self.mode))
        if self.mode == 'discrete' and (self.steps is None or self.steps < 1):
            raise ConfigError('A discrete run needs a positive number of steps.')
        if self.mode == 'continuous':
            if self.t_end is None or not self.t_end > 0.:
                raise ConfigError('A continuous run needs a positive t_end.')
            if not 0. < self.dt <= 1.:
                raise ConfigError('The time step must satisfy 0 < dt <= 1, got {0}.'.format(self.dt))
        if not self.stop_tol >= 0.:
            raise ConfigError('stop_tol must be nonnegative, got {0}.'.format(self.stop_tol))
        if self.r <= 1:
            raise ConfigError('The monitored moment needs r > 1, got {0}.'.format(self.r))
        if self.record_every < 1:
            raise ConfigError('record_every must be at least 1.')
        # raises ConfigError for a missing or doubly given q
        self.recombinator_spec()

    def recombinator_spec(self):
        return RecombinatorSpec.from_q(self.q, takahata=self.takahata, truncation=self.truncation,
                                       leak_threshold=self.leak_threshold)


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    state: Distribution
    mean: float
    M1: float
    Mr: float
    tv_to_target: Optional[float]
    tail_mass: float
    coeff_distance: Optional[float] = None


@dataclass
class Trajectory:
    """
    Recorded states of one run with their monitored functionals.

    clipped_mass is the total negative mass the integrator clipped to zero, lyapunov_violations counts
    steps where M_1 grew by more than 1e-10 at q = 0, converged tells whether a discrete run stopped on
    stop_tol, iterations is the number of steps taken and last_increment the TV distance covered by the
    last one.
    """
    samples: List[TrajectorySample] = field(default_factory=list)
    clipped_mass: float = 0.
    lyapunov_violations: int = 0
    converged: bool = False
    iterations: int = 0
    last_increment: Optional[float] = None
    wall_time: float = 0.

    @property
    def final(self):
        return self.samples[-1]

    def column(self, name):
        """One monitored quantity over all samples as an array (None becomes nan)."""
        return np.array([np.nan if getattr(s, name) is None else getattr(s, name) for s in self.samples],
                        dtype=float)


class _Monitor(object):
    """Computes the monitored functionals of a state."""

    def __init__(self, cfg: EvolveConfig, p0: Distribution):
        self.cfg = cfg
        self.coeff_target = None
        if cfg.coeff_order and cfg.recombinator_spec().effective_q == 1.:
            a0 = coeffs_from_distribution(p0, cfg.coeff_order, gamma=cfg.gamma)
            delta = max(a0.delta, a0.alpha, 1.)
            self.coeff_target = geometric_coeffs(a0.alpha, cfg.coeff_order, delta=delta, gamma=cfg.gamma)

    def sample(self, t, state: Distribution):
        report = moment_report(state, self.cfg.r)
        tv = None if self.cfg.target is None else tv_distance(state, self.cfg.target)
        coeff_distance = None
        if self.coeff_target is not None:
            target = self.coeff_target
            a = coeffs_from_distribution(state, target.order, gamma=target.gamma, delta=target.delta)
            coeff_distance = weighted_metric(a, target)
        return TrajectorySample(t=float(t), state=state, mean=report.mean, M1=report.M1, Mr=report.Mr,
                                tv_to_target=tv, tail_mass=state.tail_mass, coeff_distance=coeff_distance)


def _check_lyapunov(trajectory, previous, current, spec):
    if spec.effective_q == 0. and current.M1 > previous.M1 + LYAPUNOV_TOL:
        trajectory.lyapunov_violations += 1
        LOG.warning('M1 increased from %.12g to %.12g at t=%g under internal UC', previous.M1, current.M1,
                    current.t)


def evolve_discrete(p0: Distribution, cfg: EvolveConfig, recombinator: Recombinator = None):
    """
    Iterates p(t+1) = R(p(t)).

    Stops after cfg.steps generations or as soon as tv_distance(p(t+1), p(t)) < cfg.stop_tol.

    Parameters
    ----------
    p0 : Distribution
        Initial state.
    cfg : EvolveConfig
    recombinator : Recombinator
        Overrides the recombinator described by cfg.

    Returns
    ----------
    Trajectory; LeakExceeded from the recombinator is propagated.
    """
    start = time.perf_counter()
    spec = cfg.recombinator_spec()
    recombinator = build_recombinator(spec) if recombinator is None else recombinator
    monitor = _Monitor(cfg, p0)
    trajectory = Trajectory(samples=[monitor.sample(0, p0)])

    state = p0
    previous = trajectory.samples[0]
    for step in range(1, cfg.steps + 1):
        new = recombinator.apply(state)
        increment = tv_distance(new, state)
        state = new
        trajectory.iterations = step
        trajectory.last_increment = increment
        LOG.debug('step %d: successive TV %.3e, tail %.3e', step, increment, state.tail_mass)
        converged = increment < cfg.stop_tol
        if converged or step == cfg.steps or step % cfg.record_every == 0 or spec.effective_q == 0.:
            current = monitor.sample(step, state)
            _check_lyapunov(trajectory, previous, current, spec)
            previous = current
            if converged or step == cfg.steps or step % cfg.record_every == 0:
                trajectory.samples.append(current)
        if converged:
            trajectory.converged = True
            break

    trajectory.wall_time = time.perf_counter() - start
    LOG.info('Discrete %s run: %d steps, last increment %.3e, converged=%s, %.2fs', spec.label,
             trajectory.iterations, trajectory.last_increment, trajectory.converged, trajectory.wall_time)
    return trajectory


def runge_kutta4(f, t0, h, y0, args=()):
    """classic 4th order step"""
    k = np.empty((4, len(y0)), dtype=y0.dtype)
    k[0] = f(t0, y0, *args)
    k[1] = f(t0 + 0.5 * h, y0 + 0.5 * h * k[0], *args)
    k[2] = f(t0 + 0.5 * h, y0 + 0.5 * h * k[1], *args)
    k[3] = f(t0 + h, y0 + h * k[2], *args)
    return y0 + h * (1 / 6 * k[0] + 1 / 3 * k[1] + 1 / 3 * k[2] + 1 / 6 * k[3])


def _vector_field(t, y, recombinator):
    """d/dt of (x_0..x_N, tail): the kept part of R(x) - x, and the mass R(x) pushes beyond N."""
    x = y[:-1]
    out = recombinator.recombine_array(x)
    kept = out[:x.size]
    return np.append(kept - x, out[x.size:].sum())


def rhs(p: Distribution, recombinator):
    """
    R(p) - p on 0..N.

    Parameters
    ----------
    p : Distribution
    recombinator : Recombinator or RecombinatorSpec

    Returns
    ----------
    Signed vector of length N+1; it sums to zero unless mass leaks beyond N.
    """
    if isinstance(recombinator, RecombinatorSpec):
        recombinator = build_recombinator(recombinator)
    x = recombinator.prepare(p)
    return _vector_field(0., np.append(x, 0.), recombinator)[:-1]


def _accept(y, t, trajectory, recombinator):
    """Clips roundoff negativity and checks mass and leak of an integrated state."""
    x, tail = y[:-1], float(y[-1])
    worst = x.min()
    if worst < -CLIP_TOL:
        raise PositivityLost('p_{0} = {1:.3e} at t={2:g}; reduce dt.'.format(int(x.argmin()), worst, t))
    if worst < 0.:
        clipped = -float(x[x < 0.].sum())
        trajectory.clipped_mass += clipped
        if -worst > CLIP_WARN:
            LOG.warning('Clipped negative mass %.3e at t=%g', clipped, t)
        x = np.where(x < 0., 0., x)
    if tail > recombinator.leak_threshold:
        raise LeakExceeded('Tail mass {0:.3e} beyond N={1} exceeds the leak threshold {2:.1e} at t={3:g}.'
                           .format(tail, recombinator.truncation, recombinator.leak_threshold, t))
    total = float(x.sum()) + tail
    if abs(total - 1.) > MASS_TOL:
        raise MassDrift('Mass drifted to {0!r} at t={1:g}.'.format(total, t))
    return Distribution(x, max(tail, 0.))


def evolve_continuous(p0: Distribution, cfg: EvolveConfig, recombinator: Recombinator = None):
    """
    Integrates dp/dt = R(p) - p up to cfg.t_end with fixed-step fourth-order Runge-Kutta.

    The mass leaking beyond N is integrated along with the state. Negative entries down to -1e-9 are
    clipped to zero and counted in Trajectory.clipped_mass; anything more negative raises PositivityLost.
    """
    start = time.perf_counter()
    spec = cfg.recombinator_spec()
    recombinator = build_recombinator(spec) if recombinator is None else recombinator
    monitor = _Monitor(cfg, p0)
    trajectory = Trajectory(samples=[monitor.sample(0., p0)])

    n_steps = int(np.ceil(cfg.t_end / cfg.dt - 1.e-9))
    y = np.append(recombinator.prepare(p0), p0.tail_mass)
    previous = trajectory.samples[0]
    state = p0
    for step in range(1, n_steps + 1):
        t0 = (step - 1) * cfg.dt
        h = min(cfg.dt, cfg.t_end - t0)
        y = runge_kutta4(_vector_field, t0, h, y, (recombinator,))
        t = t0 + h
        new = _accept(y, t, trajectory, recombinator)
        y = np.append(new.values, new.tail_mass)
        trajectory.last_increment = tv_distance(new, state)
        trajectory.iterations = step
        state = new
        if step == n_steps or step % cfg.record_every == 0 or spec.effective_q == 0.:
            current = monitor.sample(t, state)
            _check_lyapunov(trajectory, previous, current, spec)
            previous = current
            if step == n_steps or step % cfg.record_every == 0:
                trajectory.samples.append(current)

    trajectory.wall_time = time.perf_counter() - start
    LOG.info('Continuous %s run to t=%g: %d steps, clipped %.3e, %.2fs', spec.label, cfg.t_end,
             trajectory.iterations, trajectory.clipped_mass, trajectory.wall_time)
    return trajectory


def evolve(p0: Distribution, cfg: EvolveConfig, recombinator: Recombinator = None):
    if cfg.mode == 'discrete':
        return evolve_discrete(p0, cfg, recombinator)
    return evolve_continuous(p0, cfg, recombinator)


@dataclass(frozen=True)
class CoeffSample:
    t: float
    coeffs: CoeffVector
    distance: float


def _coeff_field(t, a):
    K = a.size - 1
    return np.convolve(a, a)[:K + 1] / np.arange(1, K + 2) - a


def coeff_evolve_continuous(a0: CoeffVector, t_end, dt=0.1, record_every=1):
    """
    Integrates da/dt = Ra_1(a) - a, the random UC flow in coefficient space.

    Returns
    ----------
    List of CoeffSample with the weighted distance to the fixed point (1, alpha, alpha^2, ...), which is a
    Lyapunov function of this flow.
    """
    if not 0. < dt <= 1.:
        raise ConfigError('The time step must satisfy 0 < dt <= 1, got {0}.'.format(dt))
    target = geometric_coeffs(a0.alpha, a0.order, delta=a0.delta, gamma=a0.gamma)
    samples = [CoeffSample(0., a0, weighted_metric(a0, target))]
    a = np.array(a0.values)
    n_steps = int(np.ceil(t_end / dt - 1.e-9))
    for step in range(1, n_steps + 1):
        t0 = (step - 1) * dt
        h = min(dt, t_end - t0)
        a = runge_kutta4(_coeff_field, t0, h, a)
        if not np.isfinite(a).all():
            raise CoefficientOverflow('Coefficient flow overflowed at t={0:g}.'.format(t0 + h))
        a[0] = 1.
        if step == n_steps or step % record_every == 0:
            current = a0.with_values(a)
            samples.append(CoeffSample(t0 + h, current, weighted_metric(current, target)))
    LOG.info('Coefficient flow to t=%g: final distance %.3e', t_end, samples[-1].distance)
    return samples
