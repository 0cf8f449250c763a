# -*- coding: utf-8 -*-

import numpy as np

from crossover.base import DEFAULT_LEAK_THRESHOLD, Recombinator
from crossover.base_utils import support_bound
from crossover.kernel import KernelQ
from crossover.measure import DEFAULT_NMAX, Distribution


class GeneralRecombinator(Recombinator):

    """
    Unequal crossover with an arbitrary overhang penalty q.

    R_q(p)_i = sum_{k,l} T^(q)_{i(k+l-i),kl} p_k p_l. Parent pairs are grouped by their total copy
    number n = k + l, so each group is one product of a kernel block with the vector of pair
    frequencies p_k p_{n-k}. The cost is cubic in the support.
    """
    variant = 'general'

    def __init__(self, kernel, truncation=DEFAULT_NMAX, leak_threshold=DEFAULT_LEAK_THRESHOLD):
        if not isinstance(kernel, KernelQ):
            kernel = KernelQ(kernel)
        self.kernel = kernel
        Recombinator.__init__(self, truncation=truncation, leak_threshold=leak_threshold)

    @property
    def q(self):
        return self.kernel.q

    def _recombine(self, x):
        out = np.zeros(2 * x.size - 1)
        s = support_bound(x)
        for n in range(2 * s + 1):
            lo, hi = max(0, n - s), min(n, s)
            pairs = x[lo:hi + 1] * x[n - hi:n - lo + 1][::-1]
            out[:n + 1] += np.dot(self.kernel.block(n)[:, lo:hi + 1], pairs)
        return out


def apply_general(kernel, p: Distribution, truncation=None, leak_threshold=DEFAULT_LEAK_THRESHOLD):
    """
    Applies R_q once.

    Parameters
    ----------
    kernel : KernelQ or float
        The transition kernel, or its penalty q.
    p : Distribution
    truncation : int
        Truncation bound of the result; defaults to p.nmax.
    leak_threshold : float

    Returns
    ----------
    R_q(p) on 0..truncation with the overflow added to its tail mass.
    """
    truncation = p.nmax if truncation is None else truncation
    return GeneralRecombinator(kernel, truncation, leak_threshold).apply(p)
