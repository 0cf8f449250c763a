# -*- coding: utf-8 -*-
"""CSV files for distributions, coefficients, kernel rows and trajectories"""

import sys

import numpy as np
import pandas as pd

from crossover.errors import ValidationError
from crossover.genfunc import CoeffVector
from crossover.measure import Distribution
from crossover.dynamics import Trajectory

TRAJECTORY_COLUMNS = ['t', 'mean', 'M1', 'Mr', 'tv_to_target', 'tail_mass']


def write_table(table: pd.DataFrame, path=None):
    """Writes a table with a header and without the index; path None or '-' means standard output."""
    if path is None or path == '-':
        table.to_csv(sys.stdout, index=False)
    else:
        table.to_csv(path, index=False)


def read_distribution(path, leak_threshold=0.):
    """
    Reads a ``k,p`` file; copy numbers that do not appear have probability 0.

    A mass deficit of at most leak_threshold is taken as tail mass, so states written after some
    truncation leak can be read back.
    """
    table = pd.read_csv(path, float_precision='round_trip')
    if list(table.columns) != ['k', 'p']:
        raise ValidationError('{0}: expected the header k,p, got {1}.'.format(path, ','.join(table.columns)))
    if table.empty:
        raise ValidationError('{0}: no probabilities found.'.format(path))
    k = table['k'].to_numpy()
    if not np.issubdtype(k.dtype, np.integer) or (k < 0).any():
        raise ValidationError('{0}: copy numbers must be nonnegative integers.'.format(path))
    if (np.diff(k) <= 0).any():
        raise ValidationError('{0}: rows must be in increasing k.'.format(path))
    values = np.zeros(int(k[-1]) + 1)
    values[k] = table['p'].to_numpy(dtype=float)
    deficit = 1. - float(values.sum())
    tail_mass = deficit if 0. < deficit <= leak_threshold else 0.
    return Distribution(values, tail_mass)


def distribution_table(p: Distribution):
    return pd.DataFrame({'k': np.arange(p.values.size), 'p': p.values})


def write_distribution(p: Distribution, path=None):
    write_table(distribution_table(p), path)


def write_coeffs(a: CoeffVector, path=None):
    write_table(pd.DataFrame({'k': np.arange(a.values.size), 'a': a.values}), path)


def kernel_row_table(row, k, l):
    """Outcomes (i, k+l-i) of the pair (k, l) with their probabilities."""
    i = np.arange(row.size)
    return pd.DataFrame({'i': i, 'j': k + l - i, 'T': row})


def trajectory_table(trajectory: Trajectory):
    """One row per recorded sample; coeff_distance is added when it was monitored."""
    columns = list(TRAJECTORY_COLUMNS)
    if any(sample.coeff_distance is not None for sample in trajectory.samples):
        columns.append('coeff_distance')
    return pd.DataFrame({name: trajectory.column(name) for name in columns}, columns=columns)


def write_trajectory(trajectory: Trajectory, path=None):
    write_table(trajectory_table(trajectory), path)
