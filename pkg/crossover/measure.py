# -*- coding: utf-8 -*-
"""Truncated probability distributions on copy numbers, their metric and moments"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from crossover.base_utils import l1_distance, pad_vector, support_bound
from crossover.errors import NegativeMass, NotNormalized

# Tolerances for accepting a vector as an element of M_1^+.
NEGATIVITY_TOL = 1.e-15
MASS_TOL = 1.e-9
DEFAULT_NMAX = 256
DEFAULT_R = 2.


@dataclass(frozen=True, eq=False)
class Distribution:
    """
    A probability vector p_0..p_N on the copy numbers 0..N.

    Attributes
    ----------
    values : ndarray
        Read-only array of the N+1 probabilities.
    tail_mass : float
        Mass that was discarded because it moved beyond N. values.sum() + tail_mass = 1.
    """
    values: np.ndarray
    tail_mass: float = 0.

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise ValueError('A distribution needs a non-empty 1D vector of probabilities.')
        if not np.isfinite(values).all():
            raise ValueError('A distribution cannot contain nan or inf entries.')
        if (values < -NEGATIVITY_TOL).any():
            raise NegativeMass('Negative probability {0:.3e} at copy number {1}.'
                               .format(values.min(), int(values.argmin())))
        tail_mass = float(self.tail_mass)
        if tail_mass < 0:
            raise NegativeMass('The tail mass must be nonnegative, got {0:.3e}.'.format(tail_mass))
        values[values < 0] = 0.
        total = values.sum() + tail_mass
        if abs(total - 1.) > MASS_TOL:
            raise NotNormalized('Probabilities plus tail mass sum to {0!r}, not 1.'.format(total))
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'tail_mass', tail_mass)

    @property
    def nmax(self):
        """Truncation bound N."""
        return self.values.size - 1

    @property
    def mass(self):
        return float(self.values.sum())

    def support(self):
        """Largest copy number with positive probability."""
        return support_bound(self.values)

    def resized(self, nmax):
        """Same distribution stored on 0..nmax; refuses to drop positive mass."""
        if nmax < self.support():
            raise ValueError('Cannot shrink a distribution with support up to {0} to nmax={1}.'
                             .format(self.support(), nmax))
        return Distribution(pad_vector(self.values[:nmax + 1], set_length=nmax + 1), self.tail_mass)


@dataclass(frozen=True)
class MomentReport:
    mean: float
    M1: float
    Mr: float
    r: float


def new_distribution(values):
    """
    Validates a sequence of probabilities and wraps it as a Distribution with no tail mass.

    Raises NegativeMass if an entry is below -1e-15 and NotNormalized if the entries do not sum
    to 1 within 1e-9.
    """
    return Distribution(np.asarray(values, dtype=float), 0.)


def point_mass(k, nmax=None):
    """The distribution delta_k, stored on 0..max(k, nmax)."""
    nmax = k if nmax is None else nmax
    if k > nmax:
        raise ValueError('Copy number {0} exceeds nmax={1}.'.format(k, nmax))
    values = np.zeros(nmax + 1)
    values[k] = 1.
    return Distribution(values)


def tv_distance(p: Distribution, q: Distribution):
    """
    Total variation distance sum_k |p_k - q_k|; the shorter vector is zero-padded.
    """
    return l1_distance(p.values, q.values)


def mean(p: Distribution):
    return float(np.dot(np.arange(p.values.size), p.values))


def centered_moment(p: Distribution, s, m=None):
    """
    Centered moment M_s(p) = sum_k |k - m|^s p_k.

    Parameters
    ----------
    p : Distribution
    s : float
        Order, s >= 1.
    m : float
        Centre; defaults to the mean of p.
    """
    if s < 1:
        raise ValueError('The moment order must be at least 1, got {0}.'.format(s))
    if m is None:
        m = mean(p)
    k = np.arange(p.values.size)
    return float(np.dot(np.abs(k - m) ** s, p.values))


def moment_report(p: Distribution, r=DEFAULT_R):
    if r <= 1:
        raise ValueError('The Lyapunov moment needs r > 1, got {0}.'.format(r))
    m = mean(p)
    return MomentReport(mean=m, M1=centered_moment(p, 1, m), Mr=centered_moment(p, r, m), r=r)


def mix(p: Distribution, q: Distribution, weight):
    """Convex combination weight * p + (1 - weight) * q."""
    if not 0. <= weight <= 1.:
        raise ValueError('The mixing weight must lie in [0, 1], got {0}.'.format(weight))
    x, y = pad_vector(p.values, q.values)
    return Distribution(weight * x + (1. - weight) * y,
                        weight * p.tail_mass + (1. - weight) * q.tail_mass)


def random_distribution(rng: np.random.Generator, support, mean_target: Optional[float] = None, nmax=None,
                        decay=0.7):
    """
    A random distribution on 0..support with a geometric-decay envelope.

    The weights are uniform random numbers damped by decay**k, so the generating function has a radius of
    convergence larger than one. If mean_target is given, the vector is mixed with the point mass at 0 or at
    ``support`` so that its mean equals mean_target.

    Parameters
    ----------
    rng : numpy.random.Generator
    support : int
        Largest copy number that may carry mass.
    mean_target : float, optional
        Prescribed mean, 0 <= mean_target <= support.
    nmax : int, optional
        Truncation bound of the result; defaults to support.
    decay : float
        Envelope ratio in (0, 1].
    """
    nmax = support if nmax is None else nmax
    if nmax < support:
        raise ValueError('nmax={0} is smaller than the requested support {1}.'.format(nmax, support))
    weights = rng.random(support + 1) * decay ** np.arange(support + 1) + 1.e-3 * decay ** support
    weights /= weights.sum()

    if mean_target is not None:
        if not 0. <= mean_target <= support:
            raise ValueError('The mean {0} cannot be reached on the support 0..{1}.'.format(mean_target, support))
        current = float(np.dot(np.arange(support + 1), weights))
        anchor = np.zeros(support + 1)
        if current > mean_target:
            lam = mean_target / current
            anchor[0] = 1.
        elif current < mean_target:
            lam = (support - mean_target) / (support - current)
            anchor[support] = 1.
        else:
            lam = 1.
        weights = lam * weights + (1. - lam) * anchor
        weights /= weights.sum()

    return Distribution(pad_vector(weights, set_length=nmax + 1))
