# -*- coding: utf-8 -*-

import numpy as np

from crossover.base import DEFAULT_LEAK_THRESHOLD, Recombinator
from crossover.measure import DEFAULT_NMAX, Distribution
from crossover.recombinator_random import fragment_array


class TakahataRecombinator(Recombinator):

    """
    Takahata's variant of unequal crossover: a pair with k + l copies splits uniformly into
    (i, k + l - i), i = 0..k+l.

    R_T(p)_i = sum_{k+l >= i} p_k p_l / (k + l + 1), i.e. the fragment measure of p * p.
    """
    variant = 'takahata'

    def __init__(self, truncation=DEFAULT_NMAX, leak_threshold=DEFAULT_LEAK_THRESHOLD):
        Recombinator.__init__(self, truncation=truncation, leak_threshold=leak_threshold)

    def _recombine(self, x):
        return fragment_array(np.convolve(x, x))


def apply_takahata(p: Distribution, truncation=None, leak_threshold=DEFAULT_LEAK_THRESHOLD):
    truncation = p.nmax if truncation is None else truncation
    return TakahataRecombinator(truncation, leak_threshold).apply(p)
