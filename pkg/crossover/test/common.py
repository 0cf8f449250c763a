"""Seeded inputs shared by the test modules"""

import math

import numpy as np

from crossover.measure import random_distribution

SEED = 42


def random_distributions(count, max_support, mean=None, decay=0.7, seed=SEED, min_support=1):
    """count random distributions with supports drawn from [min_support, max_support]."""
    rng = np.random.default_rng(seed)
    low = max(min_support, math.ceil(mean or 0.))
    out = []
    for _ in range(count):
        support = int(rng.integers(low, max_support + 1))
        out.append(random_distribution(rng, support, mean, decay=decay))
    return out


def random_signed(count, size, seed=SEED):
    rng = np.random.default_rng(seed)
    return [rng.normal(size=size) for _ in range(count)]
