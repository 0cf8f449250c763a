# -*- coding: utf-8 -*-
"""Unequal crossover recombination dynamics on copy-number distributions"""

__version__ = '0.1.0'

from crossover.base import Recombinator, RecombinatorSpec, build_recombinator, lipschitz_ratio
from crossover.kernel import KernelQ, takahata_transition, validate_row, weight
from crossover.measure import (Distribution, centered_moment, mean, moment_report, new_distribution,
                               random_distribution, tv_distance)
from crossover.recombinator_general import GeneralRecombinator, apply_general
from crossover.recombinator_internal import InternalRecombinator, apply_internal
from crossover.recombinator_random import RandomRecombinator, apply_random, fragment_measure
from crossover.recombinator_takahata import TakahataRecombinator, apply_takahata
