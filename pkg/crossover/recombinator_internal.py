# -*- coding: utf-8 -*-

import numpy as np

from crossover.base import DEFAULT_LEAK_THRESHOLD, Recombinator
from crossover.base_utils import pad_vector, support_bound
from crossover.measure import DEFAULT_NMAX, Distribution


class InternalRecombinator(Recombinator):

    """
    Internal unequal crossover (q = 0): only perfect alignments take place.

    A pair (k, l) produces every split i + j = k + l with min(k, l) <= i <= max(k, l) with the same
    probability 1/(1 + |k - l|), so R_0(p)_i = sum_{k <= i <= l} p_k p_l / (1 + |k - l|), counting the
    pairs k < l twice. The support never grows, so this recombinator cannot leak.
    """
    variant = 'internal'

    def __init__(self, truncation=DEFAULT_NMAX, leak_threshold=DEFAULT_LEAK_THRESHOLD):
        Recombinator.__init__(self, truncation=truncation, leak_threshold=leak_threshold)

    def _recombine(self, x):
        s = support_bound(x)
        k = np.arange(s + 1)
        pair = np.outer(x[:s + 1], x[:s + 1]) / (1. + np.abs(k[:, None] - k[None, :]))
        # upper triangle: pair (k, l) with k <= l, both orders folded in
        upper = 2. * np.triu(pair, 1) + np.diag(np.diag(pair))
        # below[i, l] = sum_{k <= i} upper[k, l]; outcome i collects the columns l >= i
        below = np.cumsum(upper, axis=0)
        out = np.triu(below).sum(axis=1)
        return pad_vector(out, set_length=2 * x.size - 1)


def apply_internal(p: Distribution, truncation=None, leak_threshold=DEFAULT_LEAK_THRESHOLD):
    """
    Applies R_0 once; the result lives on the same 0..N as p unless truncation says otherwise.
    """
    truncation = p.nmax if truncation is None else truncation
    return InternalRecombinator(truncation, leak_threshold).apply(p)
