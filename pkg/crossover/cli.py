# -*- coding: utf-8 -*-
"""Command line interface: uc {kernel,step,evolve,fixpoint,coeffs,verify}"""

import argparse
import json
import logging
import sys
import time
from dataclasses import fields

import numpy as np

from crossover import csv_io
from crossover.base import build_recombinator
from crossover.config import RunConfig
from crossover.dynamics import EvolveConfig, evolve
from crossover.errors import NumericalError, ValidationError
from crossover.fixpoint import (analytic_internal, analytic_random, analytic_takahata, reversibility_residual,
                                solve_numeric)
from crossover.genfunc import coeffs_from_distribution
from crossover.kernel import KernelQ, takahata_transition
from crossover.verify import all_passed, verify_suite

LOG = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2


def _add_model(parser):
    model = parser.add_mutually_exclusive_group()
    model.add_argument('--q', type=float, help='overhang penalty in [0, 1] (default 1)')
    model.add_argument('--takahata', action='store_true', help='use the Takahata model')


def _add_fast_path(parser):
    parser.add_argument('--no-fast-path', dest='fast_path', action='store_false',
                        help='use the general kernel also at q=0 and q=1')


def _add_common(parser):
    parser.add_argument('--nmax', type=int, default=256, help='truncation bound N (default 256)')
    parser.add_argument('--seed', type=int, help='seed for random distributions (default $UC_SEED or 42)')
    parser.add_argument('--leak-threshold', dest='leak_threshold', type=float, default=1.e-8,
                        help='largest tolerated mass beyond N (default 1e-8)')


def build_parser():
    parser = argparse.ArgumentParser(prog='uc', description='Unequal crossover recombination dynamics')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='more log output (repeatable)')
    parser.add_argument('-q', '--quiet', action='store_true', help='only log errors')
    subparsers = parser.add_subparsers(dest='subcommand', required=True)

    kernel = subparsers.add_parser('kernel', help='print one row of the transition kernel as CSV (i,j,T)')
    _add_model(kernel)
    _add_common(kernel)
    kernel.add_argument('--k', type=int, required=True)
    kernel.add_argument('--l', type=int, required=True)
    kernel.add_argument('--out', dest='output', help='output CSV (default standard output)')

    step = subparsers.add_parser('step', help='apply one recombination to a k,p distribution')
    _add_model(step)
    _add_common(step)
    _add_fast_path(step)
    step.add_argument('--in', dest='input', required=True, help='input distribution CSV')
    step.add_argument('--out', dest='output', help='output distribution CSV (default standard output)')

    evolve_parser = subparsers.add_parser('evolve', help='discrete or continuous time evolution')
    _add_model(evolve_parser)
    _add_common(evolve_parser)
    _add_fast_path(evolve_parser)
    evolve_parser.add_argument('--mode', choices=('discrete', 'continuous'), default='discrete')
    evolve_parser.add_argument('--in', dest='input', required=True, help='initial distribution CSV')
    evolve_parser.add_argument('--steps', type=int, help='number of generations (discrete mode)')
    evolve_parser.add_argument('--t-end', dest='t_end', type=float, help='final time (continuous mode)')
    evolve_parser.add_argument('--dt', type=float, default=0.1, help='integration step, at most 1 (default 0.1)')
    evolve_parser.add_argument('--stop-tol', dest='stop_tol', type=float, default=1.e-10,
                               help='stop once successive states are this close in TV; 0 runs every step '
                                    '(default 1e-10)')
    evolve_parser.add_argument('--r', type=float, default=2., help='order of the monitored moment M_r')
    evolve_parser.add_argument('--target', help='distribution CSV for the tv_to_target column')
    evolve_parser.add_argument('--out', dest='output', help='trajectory CSV (default standard output)')
    evolve_parser.add_argument('--final', help='write the final state to this distribution CSV')
    evolve_parser.add_argument('--report', help='write the JSON summary here (default standard error)')

    fixpoint = subparsers.add_parser('fixpoint', help='fixed point with a given mean copy number')
    _add_model(fixpoint)
    _add_common(fixpoint)
    fixpoint.add_argument('--m', type=float, required=True, help='mean copy number')
    fixpoint.add_argument('--tol', type=float, default=1.e-12, help='iteration tolerance (default 1e-12)')
    fixpoint.add_argument('--max-iter', dest='max_iter', type=int, default=10000)
    fixpoint.add_argument('--window', type=int, default=12, help='window of the reversibility residual')
    fixpoint.add_argument('--out', dest='output', help='distribution CSV (default standard output)')
    fixpoint.add_argument('--report', help='write the JSON report here (default standard error)')

    coeffs = subparsers.add_parser('coeffs', help='size-biased generating function coefficients (k,a)')
    _add_common(coeffs)
    coeffs.add_argument('--in', dest='input', required=True, help='input distribution CSV')
    coeffs.add_argument('--K', type=int, default=64, help='coefficient truncation (default 64)')
    coeffs.add_argument('--gamma', type=float, default=0.25, help='metric parameter in (0, 1/3)')
    coeffs.add_argument('--delta', type=float, help='growth bound (default estimated from the data)')
    coeffs.add_argument('--out', dest='output', help='coefficient CSV (default standard output)')

    verify = subparsers.add_parser('verify', help='run the seeded invariant suite')
    _add_common(verify)
    verify.add_argument('--samples', type=int, default=100, help='random inputs per check (default 100)')
    verify.add_argument('--inject-fault', dest='inject_fault', action='store_true',
                        help='skip the kernel normalization; the kernel checks must then fail')
    verify.add_argument('--report', help='write the JSON report here (default standard output)')
    return parser


def config_from_args(args):
    """RunConfig from parsed arguments; options the subcommand does not have keep their defaults."""
    names = {f.name for f in fields(RunConfig)}
    values = {name: value for name, value in vars(args).items() if name in names and value is not None}
    return RunConfig(**values)


def _write_json(payload, path, default_stream):
    text = json.dumps(payload, indent=2, sort_keys=True)
    if path is None:
        default_stream.write(text + '\n')
    else:
        with open(path, 'w') as handle:
            handle.write(text + '\n')


def _kernel(config: RunConfig):
    n = config.k + config.l
    if config.takahata:
        row = np.array([takahata_transition(i, n - i, config.k, config.l) for i in range(n + 1)])
    else:
        row = KernelQ(1. if config.q is None else config.q).row(config.k, config.l)
    csv_io.write_table(csv_io.kernel_row_table(row, config.k, config.l), config.output)


def _step(config: RunConfig):
    p = csv_io.read_distribution(config.input, config.leak_threshold)
    out = build_recombinator(config.recombinator_spec(), fast_path=config.fast_path).apply(p)
    csv_io.write_distribution(out, config.output)


def _evolve(config: RunConfig):
    p0 = csv_io.read_distribution(config.input, config.leak_threshold)
    target = None if config.target is None else csv_io.read_distribution(config.target, config.leak_threshold)
    spec = config.recombinator_spec()
    cfg = EvolveConfig(mode=config.mode, q=spec.q, takahata=config.takahata, steps=config.steps,
                       t_end=config.t_end, dt=config.dt, stop_tol=config.stop_tol, target=target,
                       truncation=config.nmax, leak_threshold=config.leak_threshold, r=config.r)
    trajectory = evolve(p0, cfg, build_recombinator(spec, fast_path=config.fast_path))
    csv_io.write_trajectory(trajectory, config.output)
    if config.final is not None:
        csv_io.write_distribution(trajectory.final.state, config.final)
    summary = {'final_state': config.final, 'iterations': trajectory.iterations,
               'final_residual': trajectory.last_increment, 'converged': trajectory.converged,
               'clipped_mass': trajectory.clipped_mass, 'wall_time': trajectory.wall_time}
    _write_json(summary, config.report, sys.stderr)


def _fixpoint(config: RunConfig):
    if config.takahata:
        result = analytic_takahata(config.m, config.nmax)
        reversibility = None
    else:
        q = 1. if config.q is None else config.q
        if q == 0.:
            result = analytic_internal(config.m, config.nmax)
        elif q == 1.:
            result = analytic_random(config.m, config.nmax)
        else:
            result = solve_numeric(q, config.m, config.nmax, config.tol, config.max_iter, config.leak_threshold)
        reversibility = reversibility_residual(result.distribution, q, config.window)
    csv_io.write_distribution(result.distribution, config.output)
    report = {'residual': result.residual, 'iterations': result.iterations, 'provenance': result.provenance,
              'mean_target': result.mean_target, 'tail_mass': result.distribution.tail_mass,
              'reversibility_residual': reversibility}
    _write_json(report, config.report, sys.stderr)


def _coeffs(config: RunConfig):
    p = csv_io.read_distribution(config.input, config.leak_threshold)
    a = coeffs_from_distribution(p, config.K, gamma=config.gamma, delta=config.delta)
    csv_io.write_coeffs(a, config.output)


def _verify(config: RunConfig, inject_fault=False):
    factory = (lambda q: KernelQ(q, normalize=False)) if inject_fault else KernelQ
    start = time.perf_counter()
    report = verify_suite(config, kernel_factory=factory)
    LOG.info('verify finished in %.1fs', time.perf_counter() - start)
    _write_json(report, config.report, sys.stdout)
    return EXIT_OK if all_passed(report) else EXIT_NUMERICAL


COMMANDS = {'kernel': _kernel, 'step': _step, 'evolve': _evolve, 'fixpoint': _fixpoint, 'coeffs': _coeffs}


def _configure_logging(args):
    if args.quiet:
        level = logging.ERROR
    else:
        level = {0: logging.WARNING, 1: logging.INFO}.get(args.verbose, logging.DEBUG)
    logging.basicConfig(level=level, stream=sys.stderr, format='%(levelname)s %(name)s: %(message)s')


def run(argv=None):
    """
    Parses argv, runs the subcommand and returns the exit code: 0 on success, 1 for invalid input or
    configuration, 2 for numerical failures. Usage errors exit through argparse with code 2.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return exit_.code
    _configure_logging(args)
    try:
        config = config_from_args(args)
        if config.subcommand == 'verify':
            return _verify(config, args.inject_fault)
        COMMANDS[config.subcommand](config)
    except NumericalError as error:
        LOG.error('%s: %s', type(error).__name__, error)
        return EXIT_NUMERICAL
    except (ValidationError, ValueError, OSError) as error:
        LOG.error('%s: %s', type(error).__name__, error)
        return EXIT_VALIDATION
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
