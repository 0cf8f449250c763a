# -*- coding: utf-8 -*-

import numpy as np
from scipy.signal import fftconvolve

from crossover.base import DEFAULT_LEAK_THRESHOLD, Recombinator
from crossover.measure import DEFAULT_NMAX, Distribution


def fragment_array(x):
    """
    Stick-breaking fragmentation pi_k = sum_{l >= k} x_l / (l + 1) of a raw vector.

    Each sequence of copy number l is cut at a uniformly chosen point and its left fragment kept.
    """
    x = np.asarray(x, dtype=float)
    return np.cumsum((x / np.arange(1, x.size + 1))[::-1])[::-1]


class RandomRecombinator(Recombinator):

    """
    Random unequal crossover (q = 1): all alignments are equally likely.

    Recombination factorizes into fragmentation followed by the union of two independent fragments,
    R_1(p) = pi * pi with pi the fragment measure of p.
    """
    variant = 'random'

    def __init__(self, truncation=DEFAULT_NMAX, leak_threshold=DEFAULT_LEAK_THRESHOLD, use_fft=False):
        """
        Parameters
        ----------
        use_fft : bool
            Set to True to convolve with scipy.signal.fftconvolve instead of numpy.convolve.
        """
        self.use_fft = use_fft
        Recombinator.__init__(self, truncation=truncation, leak_threshold=leak_threshold)

    def _recombine(self, x):
        fragments = fragment_array(x)
        if self.use_fft:
            # FFT roundoff leaves entries near -1e-17 where the exact convolution is 0
            return np.maximum(fftconvolve(fragments, fragments), 0.)
        return np.convolve(fragments, fragments)


def fragment_measure(p: Distribution):
    """
    Returns
    ----------
    The fragment measure pi of p as a Distribution on the same 0..N; sum(pi) = sum(p).
    """
    return Distribution(fragment_array(p.values), p.tail_mass)


def apply_random(p: Distribution, truncation=None, leak_threshold=DEFAULT_LEAK_THRESHOLD, use_fft=False):
    """
    Applies R_1 once through the fragment measure and a self-convolution.
    """
    truncation = p.nmax if truncation is None else truncation
    return RandomRecombinator(truncation, leak_threshold, use_fft=use_fft).apply(p)
