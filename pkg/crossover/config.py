# -*- coding: utf-8 -*-
"""Run configuration shared by the command line and the verification suite"""

import os
from dataclasses import dataclass, field
from typing import Optional

from crossover.base import DEFAULT_LEAK_THRESHOLD, RecombinatorSpec
from crossover.errors import ConfigError
from crossover.fixpoint import DEFAULT_MAX_ITER, DEFAULT_TOL, DEFAULT_WINDOW
from crossover.genfunc import DEFAULT_GAMMA, DEFAULT_K
from crossover.measure import DEFAULT_NMAX, DEFAULT_R

SUBCOMMANDS = ('kernel', 'step', 'evolve', 'fixpoint', 'coeffs', 'verify')
DEFAULT_SEED = 42
SEED_VARIABLE = 'UC_SEED'


def default_seed():
    """The seed from the UC_SEED environment variable, 42 if it is not set."""
    value = os.environ.get(SEED_VARIABLE)
    if value is None or value.strip() == '':
        return DEFAULT_SEED
    try:
        return int(value)
    except ValueError:
        raise ConfigError('{0} must be an integer, got {1!r}.'.format(SEED_VARIABLE, value))


@dataclass(frozen=True)
class RunConfig:
    """
    Every parameter a subcommand may need.

    Unused fields keep their defaults; ``__post_init__`` only validates what is set.
    """
    subcommand: str = 'verify'
    q: Optional[float] = None
    takahata: bool = False
    m: Optional[float] = None
    nmax: int = DEFAULT_NMAX
    K: int = DEFAULT_K
    gamma: float = DEFAULT_GAMMA
    delta: Optional[float] = None
    r: float = DEFAULT_R
    mode: str = 'discrete'
    steps: Optional[int] = None
    t_end: Optional[float] = None
    dt: float = 0.1
    stop_tol: float = 1.e-10
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    leak_threshold: float = DEFAULT_LEAK_THRESHOLD
    window: int = DEFAULT_WINDOW
    seed: int = field(default_factory=default_seed)
    samples: int = 100
    fast_path: bool = True
    k: Optional[int] = None
    l: Optional[int] = None
    input: Optional[str] = None
    output: Optional[str] = None
    target: Optional[str] = None
    final: Optional[str] = None
    report: Optional[str] = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError('Unknown subcommand {0!r}.'.format(self.subcommand))
        if self.nmax < 2:
            raise ConfigError('nmax must be at least 2, got {0}.'.format(self.nmax))
        if self.q is not None and not 0. <= self.q <= 1.:
            raise ConfigError('q must lie in [0, 1], got {0}.'.format(self.q))
        if self.q is not None and self.takahata:
            raise ConfigError('Choose either --q or --takahata, not both.')
        for name in ('tol', 'dt'):
            if not getattr(self, name) > 0.:
                raise ConfigError('{0} must be positive, got {1}.'.format(name, getattr(self, name)))
        if self.stop_tol < 0.:
            raise ConfigError('stop_tol must be nonnegative, got {0}.'.format(self.stop_tol))
        if self.steps is not None and self.steps < 1:
            raise ConfigError('steps must be positive, got {0}.'.format(self.steps))
        if self.t_end is not None and not self.t_end > 0.:
            raise ConfigError('t_end must be positive, got {0}.'.format(self.t_end))
        if self.leak_threshold < 0.:
            raise ConfigError('leak_threshold must be nonnegative, got {0}.'.format(self.leak_threshold))
        if not 0. < self.gamma < 1. / 3.:
            raise ConfigError('gamma must lie in (0, 1/3), got {0}.'.format(self.gamma))
        if self.K < 1 or self.max_iter < 1 or self.samples < 1 or self.window < 0:
            raise ConfigError('K, max_iter and samples must be positive and window nonnegative.')
        if self.m is not None and self.m < 0:
            raise ConfigError('The mean copy number must be nonnegative, got {0}.'.format(self.m))

    def recombinator_spec(self):
        """RecombinatorSpec for --q or --takahata; q defaults to 1."""
        q = None if self.takahata else (1. if self.q is None else self.q)
        return RecombinatorSpec.from_q(q, takahata=self.takahata, truncation=self.nmax,
                                       leak_threshold=self.leak_threshold)
