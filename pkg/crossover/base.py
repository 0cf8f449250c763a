# -*- coding: utf-8 -*-
"""Base class for the unequal crossover recombinators"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from crossover.base_utils import l1_norm, pad_vector, support_bound, truncate
from crossover.errors import ConfigError, LeakExceeded, TruncationTooSmall
from crossover.measure import DEFAULT_NMAX, Distribution

LOG = logging.getLogger(__name__)

DEFAULT_LEAK_THRESHOLD = 1.e-8
VARIANTS = ('general', 'internal', 'random', 'takahata')


class Recombinator(object):
    """
    This class provides a base class for all unequal crossover recombinators.

    A subclass only implements ``_recombine``, the bilinear sum over parent pairs for a raw vector.
    The base class divides by the mass of the input, cuts the result back to the truncation bound and
    keeps track of the mass that was cut off.
    """
    variant = None

    def __init__(self, truncation=DEFAULT_NMAX, leak_threshold=DEFAULT_LEAK_THRESHOLD):
        """
        Parameters
        ----------
        truncation : int
            Largest copy number N that is stored; outputs are cut back to 0..N.
        leak_threshold : float
            Largest accumulated tail mass that is accepted before LeakExceeded is raised.
        """
        if truncation < 0:
            raise ValueError('The truncation bound must be nonnegative, got {0}.'.format(truncation))
        if leak_threshold < 0:
            raise ValueError('The leak threshold must be nonnegative, got {0}.'.format(leak_threshold))
        self.truncation = int(truncation)
        self.leak_threshold = float(leak_threshold)

    def _recombine(self, x):
        """sum_{k,l} T_{i(k+l-i),kl} x_k x_l for i = 0..2*(len(x)-1), without the mass prefactor."""
        raise NotImplementedError

    def recombine_array(self, x):
        """
        R(x) = (1/||x||_1) sum_{k,l} T x_k x_l for a raw vector.

        Positively homogeneous of degree one; the zero vector is mapped to zero. The result has
        2*len(x)-1 entries and is not truncated.
        """
        x = np.asarray(x, dtype=float)
        if x.ndim != 1:
            raise ValueError('Recombinators act on 1D vectors.')
        norm = l1_norm(x)
        if norm == 0.:
            return np.zeros(2 * x.size - 1)
        return self._recombine(x) / norm

    def prepare(self, p: Distribution):
        """The values of p laid out on 0..N."""
        if p.nmax <= self.truncation:
            return pad_vector(p.values, set_length=self.truncation + 1)
        if support_bound(p.values) > self.truncation:
            raise TruncationTooSmall('The distribution has mass at {0}, beyond the truncation bound {1}.'
                                     .format(support_bound(p.values), self.truncation))
        return np.array(p.values[:self.truncation + 1])

    def finish(self, out, tail_mass):
        """
        Cuts a recombined vector back to 0..N and checks the accumulated leak.

        Returns
        ----------
        kept, tail_mass: the truncated vector and the new accumulated tail mass.
        """
        kept, overflow = truncate(out, self.truncation)
        overflow = max(overflow, 0.)
        tail_mass = tail_mass + overflow
        if overflow > 0.:
            LOG.debug('%s recombinator leaked %.3e beyond N=%d (total %.3e)',
                      self.variant, overflow, self.truncation, tail_mass)
        if tail_mass > self.leak_threshold:
            raise LeakExceeded('Tail mass {0:.3e} beyond N={1} exceeds the leak threshold {2:.1e}; increase nmax.'
                               .format(tail_mass, self.truncation, self.leak_threshold))
        return kept, tail_mass

    def apply(self, p: Distribution):
        """
        One generation of recombination.

        Returns
        ----------
        The distribution R(p) on 0..N; mass pushed beyond N is added to its tail_mass.
        """
        out = self.recombine_array(self.prepare(p))
        kept, tail_mass = self.finish(out, p.tail_mass)
        return Distribution(kept, tail_mass)


@dataclass(frozen=True)
class RecombinatorSpec:
    """
    Which recombinator to use and how far to store it.

    variant is one of 'general', 'internal', 'random' and 'takahata'; q is required (and only
    allowed) for 'general'.
    """
    variant: str = 'general'
    q: Optional[float] = None
    truncation: int = DEFAULT_NMAX
    leak_threshold: float = DEFAULT_LEAK_THRESHOLD

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ConfigError('Unknown recombinator variant {0!r}; choose one of {1}.'
                              .format(self.variant, ', '.join(VARIANTS)))
        if self.variant == 'general':
            if self.q is None or not 0. <= self.q <= 1.:
                raise ConfigError('The general recombinator needs q in [0, 1], got {0!r}.'.format(self.q))
        elif self.q is not None:
            raise ConfigError('The {0} recombinator takes no q.'.format(self.variant))
        if self.truncation < 0:
            raise ConfigError('The truncation bound must be nonnegative, got {0}.'.format(self.truncation))
        if not self.leak_threshold >= 0.:
            raise ConfigError('The leak threshold must be nonnegative, got {0}.'.format(self.leak_threshold))

    @classmethod
    def from_q(cls, q=None, takahata=False, **kwargs):
        """Spec for a penalty q, or for the Takahata model."""
        if takahata:
            if q is not None:
                raise ConfigError('Choose either a penalty q or the Takahata model, not both.')
            return cls(variant='takahata', **kwargs)
        return cls(variant='general', q=q, **kwargs)

    @property
    def label(self):
        """'takahata', 'internal', 'random' or the penalty as a string."""
        if self.variant == 'general':
            return 'q={0:g}'.format(self.q)
        return self.variant

    @property
    def effective_q(self):
        """The penalty this recombinator corresponds to, None for the Takahata model."""
        return {'general': self.q, 'internal': 0., 'random': 1., 'takahata': None}[self.variant]


def build_recombinator(spec: RecombinatorSpec, fast_path=True, kernel=None):
    """
    Instantiates the recombinator described by spec.

    Parameters
    ----------
    spec : RecombinatorSpec
    fast_path : bool
        If True, the general recombinator at q=0 or q=1 is replaced by its closed form.
    kernel : KernelQ
        Kernel to use for the general recombinator; by default one is built from spec.q.
    """
    from crossover.recombinator_general import GeneralRecombinator
    from crossover.recombinator_internal import InternalRecombinator
    from crossover.recombinator_random import RandomRecombinator
    from crossover.recombinator_takahata import TakahataRecombinator

    options = dict(truncation=spec.truncation, leak_threshold=spec.leak_threshold)
    variant = spec.variant
    if variant == 'general' and fast_path and kernel is None:
        variant = {0.: 'internal', 1.: 'random'}.get(spec.q, 'general')
    if variant == 'internal':
        return InternalRecombinator(**options)
    if variant == 'random':
        return RandomRecombinator(**options)
    if variant == 'takahata':
        return TakahataRecombinator(**options)
    return GeneralRecombinator(spec.q if kernel is None else kernel, **options)


def lipschitz_ratio(recombinator: Recombinator, x, y):
    """
    ||R(x) - R(y)||_1 / ||x - y||_1 for two raw vectors.

    At most 2 for nonnegative vectors of equal mass and at most 3 for arbitrary vectors.
    """
    x, y = pad_vector(x, y)
    distance = l1_norm(x - y)
    if distance == 0.:
        return 0.
    return l1_norm(recombinator.recombine_array(x) - recombinator.recombine_array(y)) / distance
