# -*- coding: utf-8 -*-
"""Transition probabilities of unequal crossover with overhang penalty q"""

import logging
import threading
from dataclasses import dataclass

import numpy as np

LOG = logging.getLogger(__name__)

# Blocks for total copy numbers above this are rebuilt on demand instead of cached.
DEFAULT_CACHE_LIMIT = 160


def _check_naturals(*values):
    for value in values:
        if value < 0:
            raise ValueError('Copy numbers must be nonnegative, got {0}.'.format(value))


def weight(q, i, j, k, l):
    """
    Unnormalized weight of the outcome (i, j) for the parent pair (k, l).

    Parameters
    ----------
    q : float
        Overhang penalty in [0, 1].
    i, j : int
        Offspring copy numbers.
    k, l : int
        Parent copy numbers.

    Returns
    ----------
    0 if i + j != k + l, else (1 + min{k, l, i, j}) * q**max(0, min(k, l) - min(i, j)) with 0**0 = 1.
    """
    _check_naturals(i, j, k, l)
    if i + j != k + l:
        return 0.
    factor = 1. + min(k, l, i, j)
    exponent = max(0, min(k, l) - min(i, j))
    if exponent == 0:
        return factor
    return factor * q ** exponent


def takahata_transition(i, j, k, l):
    """Outcome probability of the uniform kernel 1/(k+l+1) on i + j = k + l."""
    _check_naturals(i, j, k, l)
    if i + j != k + l:
        return 0.
    return 1. / (k + l + 1)


def c_coefficient_closed_form(q, k, l):
    """
    Closed-form normalization constant, valid for 0 <= q < 1.

    Cancels badly as q approaches 1; use KernelQ.c_coefficient for actual computations.
    """
    if not 0. <= q < 1.:
        raise ValueError('The closed form needs 0 <= q < 1, got q={0}.'.format(q))
    _check_naturals(k, l)
    m = min(k, l)
    d = abs(k - l)
    numerator = (1. - q) ** 2
    denominator = (m + 1) * (d + 1) * (1. - q) ** 2 + 2. * q * (m - (m + 1) * q + q ** (m + 1))
    return numerator / denominator


@dataclass(frozen=True)
class RowReport:
    sum_deviation: float
    mean_deviation: float

    def passed(self, tol=1.e-12):
        return self.sum_deviation <= tol and self.mean_deviation <= tol


class KernelQ(object):
    """
    Transition kernel T^(q) of unequal crossover.

    All pairs (k, l) with the same total n = k + l share one block matrix
    ``block(n)[i, k] = T_{i(n-i), k(n-k)}``. Blocks are built lazily and, for n up to ``cache_limit``,
    cached under a lock so one kernel can be shared between threads.
    """

    def __init__(self, q, normalize=True, cache_limit=DEFAULT_CACHE_LIMIT):
        """
        Parameters
        ----------
        q : float
            Overhang penalty, 0 <= q <= 1. q=0 is internal UC, q=1 is random UC.
        normalize : bool
            Set to False to skip the normalization constants (every C becomes 1). Only useful as
            a negative control for the verification suite.
        cache_limit : int
            Largest total copy number whose block is kept in memory.
        """
        q = float(q)
        if not 0. <= q <= 1.:
            raise ValueError('The penalty parameter q must lie in [0, 1], got {0}.'.format(q))
        self.q = q
        self.normalize = normalize
        self.cache_limit = cache_limit
        self._lock = threading.Lock()
        self._normalizers = {}
        self._blocks = {}

    def __repr__(self):
        return 'KernelQ(q={0!r}, normalize={1!r})'.format(self.q, self.normalize)

    def _weights(self, n):
        """Unnormalized weights W[i, k] for the outcome (i, n-i) of the pair (k, n-k)."""
        idx = np.arange(n + 1)
        mij = np.minimum(idx, n - idx)[:, None]
        mkl = np.minimum(idx, n - idx)[None, :]
        exponent = np.maximum(0, mkl - mij)
        # q_pow[0] = 1 for every q, including q = 0
        q_pow = np.empty(n + 1)
        q_pow[0] = 1.
        q_pow[1:] = self.q ** np.arange(1, n + 1)
        return (1. + np.minimum(mkl, mij)) * q_pow[exponent]

    def normalizers(self, n):
        """
        Normalization constants C_{k(n-k)} for k = 0..n as a read-only array.
        """
        with self._lock:
            cached = self._normalizers.get(n)
        if cached is not None:
            return cached
        if self.normalize:
            c = 1. / self._weights(n).sum(axis=0)
            c = 0.5 * (c + c[::-1])
        else:
            c = np.ones(n + 1)
        c.flags.writeable = False
        with self._lock:
            self._normalizers.setdefault(n, c)
        return c

    def block(self, n):
        """Normalized block T[i, k] = T_{i(n-i), k(n-k)}, read-only."""
        with self._lock:
            cached = self._blocks.get(n)
        if cached is not None:
            return cached
        LOG.debug('Building kernel block n=%d for q=%g', n, self.q)
        matrix = self._weights(n) * self.normalizers(n)[None, :]
        matrix.flags.writeable = False
        if n <= self.cache_limit:
            with self._lock:
                matrix = self._blocks.setdefault(n, matrix)
        return matrix

    def c_coefficient(self, k, l):
        """C^(q)_{kl} = 1 / sum_i weight(q, i, k+l-i, k, l), computed by direct summation."""
        _check_naturals(k, l)
        return float(self.normalizers(k + l)[k])

    def transition(self, i, j, k, l):
        """T^(q)_{ij,kl}; exactly symmetric in (i, j) and in (k, l)."""
        if i + j != k + l:
            _check_naturals(i, j, k, l)
            return 0.
        return self.c_coefficient(k, l) * weight(self.q, i, j, k, l)

    def row(self, k, l):
        """Outcome probabilities T_{i(k+l-i),kl} for i = 0..k+l."""
        _check_naturals(k, l)
        return np.array(self.block(k + l)[:, k])


def validate_row(kernel: KernelQ, k, l):
    """
    Checks normalization and copy-number conservation of one kernel row.

    Returns
    ----------
    RowReport with |sum_i T - 1| and |sum_i i T - (k+l)/2|.
    """
    row = kernel.row(k, l)
    i = np.arange(row.size)
    return RowReport(sum_deviation=abs(float(row.sum()) - 1.),
                     mean_deviation=abs(float(np.dot(i, row)) - 0.5 * (k + l)))
