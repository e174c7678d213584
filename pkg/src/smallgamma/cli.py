"""Command line front end: sampling, validation, benchmarking and figure data.

Exit codes: 0 - success, 1 - I/O failure, 2 - invalid arguments, 3 - a validation check failed.
"""
import argparse
import csv
import json
import logging
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Optional, Sequence, TextIO, Tuple

import numpy as np
from path import Path

from smallgamma.batch import SAMPLERS, sample_batch
from smallgamma.gof import DEFAULT_T_GRID, MIN_REPORT_SIZE, GofReport, run_report
from smallgamma.math.specfun import DomainError
from smallgamma.rng import DEFAULT_SEED, new_source
from smallgamma.sampler import (
    acceptance_rate, as_shape, envelope_params, log_accept_ratio, log_eta, to_natural_scale,
)


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_FAILED = 3

MAX_SEED = 2 ** 64

DEFAULT_ALPHAS = {
    'sample': (0.1,),
    'validate': (1e-4, 0.01, 0.1, 0.5),
    'bench': (0.5, 0.1, 0.01),
    'curves': (0.1,),
}
DEFAULT_N = {
    'sample': 10,
    'validate': 100000,
    'bench': 100000,
    'curves': 0,
}
DEFAULT_Z_POINTS = 400
RATE_POINTS = 200


class UsageError(ValueError):
    """Raised when the provided arguments don't make sense together."""


@dataclass(frozen=True)
class RunConfig:
    """Everything a subcommand needs to run."""

    subcommand: str
    alpha: Tuple[float, ...]
    n: int
    seed: int = DEFAULT_SEED
    workers: int = 1
    scale: str = 'log'
    output: Optional[str] = None
    format: str = 'csv'
    t_grid: Tuple[float, ...] = DEFAULT_T_GRID
    z_grid: Optional[Tuple[float, float, int]] = None
    alpha_max: float = 0.5

    def __post_init__(self):
        for alpha in self.alpha:
            as_shape(alpha)
        if not self.alpha:
            raise UsageError('at least one shape is needed')
        if self.n < 0:
            raise UsageError('--n must be >= 0, got %r' % self.n)
        if self.workers < 1:
            raise UsageError('--workers must be >= 1, got %r' % self.workers)
        if not 0 <= self.seed < MAX_SEED:
            raise UsageError('--seed must be an unsigned 64 bit integer, got %r' % self.seed)
        if self.subcommand == 'validate' and self.n < MIN_REPORT_SIZE:
            raise UsageError('validate needs --n >= %d, got %r' % (MIN_REPORT_SIZE, self.n))
        if self.subcommand in ('sample', 'curves') and len(self.alpha) != 1:
            raise UsageError('%s takes a single --alpha, got %r' % (self.subcommand, self.alpha))
        as_shape(self.alpha_max)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        return cls(
            subcommand=args.subcommand,
            alpha=args.alpha or DEFAULT_ALPHAS[args.subcommand],
            n=DEFAULT_N[args.subcommand] if args.n is None else args.n,
            seed=args.seed,
            workers=args.workers,
            scale=args.scale,
            output=args.out,
            format=args.format,
            t_grid=args.t_grid or DEFAULT_T_GRID,
            z_grid=args.z_grid,
            alpha_max=args.alpha_max,
        )


def parse_alphas(value: str) -> Tuple[float, ...]:
    """Parse a single shape or a comma separated list of them."""
    try:
        return tuple(float(v) for v in value.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError('invalid shape list: %r' % value)


def parse_t_grid(value: str) -> Tuple[float, ...]:
    """Parse a `min:max:step` grid."""
    try:
        lo, hi, step = (float(v) for v in value.split(':'))
    except ValueError:
        raise argparse.ArgumentTypeError('expected min:max:step, got %r' % value)
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError('invalid grid: %r' % value)
    return tuple(lo + i * step for i in range(int(round((hi - lo) / step)) + 1))


def parse_z_grid(value: str) -> Tuple[float, float, int]:
    """Parse a `min:max:points` grid."""
    try:
        lo, hi, points = value.split(':')
        grid = float(lo), float(hi), int(points)
    except ValueError:
        raise argparse.ArgumentTypeError('expected min:max:points, got %r' % value)
    if grid[2] < 1 or grid[1] < grid[0]:
        raise argparse.ArgumentTypeError('invalid grid: %r' % value)
    return grid


@contextmanager
def open_output(output: Optional[str]):
    """Yield the stream to write the results to - stdout if no file was given."""
    if not output:
        yield sys.stdout
        return
    with Path(output).open('w', newline='') as stream:
        yield stream


def csv_writer(out: TextIO):
    return csv.writer(out, lineterminator='\n')


def cmd_sample(cfg: RunConfig, out: TextIO) -> int:
    """Write `n` draws of log Y (or Y, with `--scale natural`), one per line."""
    alpha = cfg.alpha[0]
    log_y, stats = sample_batch(alpha, cfg.n, cfg.seed, cfg.workers)
    logger.info('drew %d values with %.6f proposals per accept', cfg.n, stats.proposals_per_accept)

    natural = cfg.scale == 'natural'
    values = to_natural_scale(log_y) if natural else log_y
    column = 'y' if natural else 'log_y'
    if cfg.format == 'csv':
        writer = csv_writer(out)
        writer.writerow([column])
        writer.writerows([v] for v in values.tolist())
    else:
        out.write(json.dumps({
            'alpha': alpha, 'scale': cfg.scale, 'seed': cfg.seed, column: values.tolist(),
        }) + '\n')
    return EXIT_OK


def _validate_shape(task) -> GofReport:
    alpha, n, seed, stream_id, t_grid = task
    return run_report(alpha, n, new_source(seed, stream_id), t_grid)


def cmd_validate(cfg: RunConfig, out: TextIO) -> int:
    """Run all statistical checks for each shape. Each shape gets its own stream."""
    tasks = [(alpha, cfg.n, cfg.seed, stream_id, cfg.t_grid) for stream_id, alpha in enumerate(cfg.alpha)]
    if cfg.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as executor:
            reports = list(executor.map(_validate_shape, tasks))
    else:
        reports = [_validate_shape(task) for task in tasks]

    if cfg.format == 'csv':
        writer = csv_writer(out)
        writer.writerow(GofReport.field_names())
        for report in reports:
            writer.writerow(report.to_flat().values())
    else:
        for report in reports:
            out.write(report.to_obj() + '\n')

    failed = [report.alpha for report in reports if not report.passed()]
    if failed:
        logger.warning('validation failed for alpha in %s', failed)
        return EXIT_FAILED
    return EXIT_OK


BENCH_COLUMNS = ['sampler', 'alpha', 'n', 'draws_per_sec', 'proposals_per_accept', 'underflow_frac']


def bench_row(sampler: str, alpha: float, cfg: RunConfig):
    """Time a single (sampler, shape) pair."""
    start = time.perf_counter()
    values, stats = sample_batch(alpha, cfg.n, cfg.seed, cfg.workers, sampler=sampler)
    elapsed = time.perf_counter() - start

    if not len(values):
        underflow = math.nan
    elif SAMPLERS[sampler].natural_scale:
        underflow = float(np.mean(values == 0.0))
    else:
        underflow = float(np.mean(~np.isfinite(values)))
    return [
        sampler, alpha, cfg.n,
        cfg.n / elapsed if elapsed > 0 else math.nan,
        stats.proposals_per_accept,
        underflow,
    ]


def cmd_bench(cfg: RunConfig, out: TextIO) -> int:
    """Measure the throughput, efficiency and underflow of every sampler at every shape."""
    rows = []
    for sampler in SAMPLERS:
        for alpha in cfg.alpha:
            rows.append(bench_row(sampler, alpha, cfg))
            logger.info('benchmarked %s at alpha=%r', sampler, alpha)

    if cfg.format == 'csv':
        writer = csv_writer(out)
        writer.writerow(BENCH_COLUMNS)
        writer.writerows(rows)
    else:
        for row in rows:
            out.write(json.dumps(dict(zip(BENCH_COLUMNS, row))) + '\n')
    return EXIT_OK


def envelope_curve(alpha: float, z_grid: Sequence[float]):
    """Yield (z, h, eta) rows of the un-normalized target and its envelope.

    h is computed as eta * h/eta, so that h <= eta holds for every emitted row.
    """
    params = envelope_params(alpha)
    for z in z_grid:
        log_envelope = log_eta(z, params)
        yield z, math.exp(log_envelope + log_accept_ratio(z, params)), math.exp(log_envelope)


def rate_curve(alpha_max: float, points: int = RATE_POINTS):
    """Yield (alpha, r, approx) rows on an evenly spaced grid over (0, alpha_max]."""
    for k in range(1, points + 1):
        alpha = alpha_max * k / points
        rate = acceptance_rate(alpha)
        yield alpha, rate.exact, rate.approx


def cmd_curves(cfg: RunConfig, out: TextIO) -> int:
    """Write the envelope figure data and the acceptance rate curve.

    Both CSV sections get their own header and are separated by an empty line.
    """
    alpha = cfg.alpha[0]
    lo, hi, points = cfg.z_grid or (-6 * alpha * math.log(10), 8.0, DEFAULT_Z_POINTS)
    z_grid = np.linspace(lo, hi, points).tolist()

    envelope = list(envelope_curve(alpha, z_grid))
    rates = list(rate_curve(cfg.alpha_max))
    if cfg.format == 'csv':
        writer = csv_writer(out)
        writer.writerow(['z', 'h', 'eta'])
        writer.writerows(envelope)
        out.write('\n')
        writer.writerow(['alpha', 'r', 'approx'])
        writer.writerows(rates)
    else:
        out.write(json.dumps({
            'alpha': alpha,
            'envelope': [dict(zip(('z', 'h', 'eta'), row)) for row in envelope],
            'rate': [dict(zip(('alpha', 'r', 'approx'), row)) for row in rates],
        }) + '\n')
    return EXIT_OK


COMMANDS = {
    'sample': cmd_sample,
    'validate': cmd_validate,
    'bench': cmd_bench,
    'curves': cmd_curves,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--alpha', type=parse_alphas,
                        help='the shape in (0, 1), or a comma separated list of shapes')
    common.add_argument('--n', type=int, help='how many values to draw')
    common.add_argument('--seed', type=int, default=DEFAULT_SEED,
                        help='an unsigned 64 bit seed (default: %(default)s)')
    common.add_argument('--workers', type=int, default=1,
                        help='how many processes to use. Draws are made in chunks of fixed size, chunk k '
                             'from stream k of the seed, so the output does not depend on this')
    common.add_argument('--scale', choices=('log', 'natural'), default='log',
                        help='return log Y (default) or Y. Natural scale values below the smallest '
                             'normal double are returned as 0')
    common.add_argument('--format', choices=('csv', 'obj'), default='csv',
                        help='csv tables or one JSON document per result')
    common.add_argument('--out', help='the file to write to (default: stdout)')
    common.add_argument('--t-grid', type=parse_t_grid,
                        help='min:max:step of the characteristic function grid (default: -5:5:0.5)')
    common.add_argument('--z-grid', type=parse_z_grid,
                        help='min:max:points of the envelope curve. Use --z-grid=... for negative mins')
    common.add_argument('--alpha-max', type=float, default=0.5,
                        help='the largest shape of the acceptance rate curve (default: %(default)s)')
    common.add_argument('-v', '--verbose', action='store_true', help='log debug messages')

    parser = argparse.ArgumentParser(
        prog='smallgamma', description='Log-scale sampling from gamma distributions with a small shape.',
    )
    subparsers = parser.add_subparsers(dest='subcommand', required=True)
    subparsers.add_parser('sample', parents=[common], help='draw log Y, Y ~ Gam(alpha, 1)')
    subparsers.add_parser('validate', parents=[common], help='check the sampler against the exact distribution')
    subparsers.add_parser('bench', parents=[common], help='compare the throughput of all samplers')
    subparsers.add_parser('curves', parents=[common], help='write the envelope and acceptance rate curves')
    return parser


def configure_logging(verbose: bool = False):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)

    try:
        cfg = RunConfig.from_args(args)
    except (UsageError, DomainError) as e:
        sys.stderr.write('smallgamma: error: %s\n' % e)
        return EXIT_USAGE

    try:
        with open_output(cfg.output) as out:
            return COMMANDS[cfg.subcommand](cfg, out)
    except OSError as e:
        sys.stderr.write('smallgamma: %s\n' % e)
        return EXIT_IO


if __name__ == '__main__':
    sys.exit(main())
