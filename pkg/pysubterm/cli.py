'''
Command line interface: ``pysubterm prove`` and ``pysubterm bench``.

'''

import argparse
import csv
import io
import logging
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .lookup import (ALL, DEFAULT_TIMEOUT, EXIT_INTERNAL_ERROR,
                     EXIT_PARSE_ERROR, EXIT_UNREADABLE, EXIT_USAGE, GUARDS,
                     MAYBE, MULTI, POS_GUARD, PROOF_MODES, RECURSIVE, SIMPLE,
                     SOLVER_ENV_VAR, INTERNAL_SOLVER, TIMEOUT,
                     VERDICT_EXIT_CODES, YES)
from .prover import prove_termination
from .read_trs import TRSFormatError, read_trs
from .smt import make_solver
from .utils import BenchRecord, trs_files


logger = logging.getLogger(__name__)

PROOF_FORMATS = ['text', 'json', 'none']
BENCH_MODES = [SIMPLE, RECURSIVE, MULTI, ALL]
CSV_COLUMNS = list(BenchRecord._fields)


class ArgumentParser(argparse.ArgumentParser):
    """Exit with the usage status instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, '{0}: error: {1}\n'.format(self.prog, message))


def positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError('not a number: {0}'.format(text))
    if value <= 0:
        raise argparse.ArgumentTypeError('must be positive: {0}'.format(text))
    return value


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError('not an integer: {0}'.format(text))
    if value < 1:
        raise argparse.ArgumentTypeError('must be positive: {0}'.format(text))
    return value


def build_parser():
    default_solver = os.environ.get(SOLVER_ENV_VAR, INTERNAL_SOLVER)
    parser = ArgumentParser(
        prog='pysubterm',
        description='Termination proofs with the subterm criterion.')
    parser.add_argument('-v', '--verbose', action='store_true',
                        help='log progress to standard error')
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    prove = commands.add_parser('prove', help='prove one system')
    prove.add_argument('file', help='TRS in TPDB format')
    prove.add_argument('--mode', choices=PROOF_MODES, default=ALL)
    prove.add_argument('--solver', default=default_solver,
                       help=('"internal" or an SMT solver command line, '
                             'e.g. "z3 -in" (default: ${0} or '
                             'internal)').format(SOLVER_ENV_VAR))
    prove.add_argument('--timeout', type=positive_float,
                       default=DEFAULT_TIMEOUT, help='seconds')
    prove.add_argument('--proof', choices=PROOF_FORMATS, default='text')
    prove.add_argument('--guard', choices=GUARDS, default=POS_GUARD,
                       help=('how the encoding marks a kept argument: a '
                             'Boolean (pos) or a positive weight (weight)'))
    prove.set_defaults(func=run_prove)

    bench = commands.add_parser('bench', help='run a directory of systems')
    bench.add_argument('directory')
    bench.add_argument('--mode', choices=PROOF_MODES, action='append',
                       help='repeat for several modes (default: all four)')
    bench.add_argument('--solver', default=default_solver)
    bench.add_argument('--timeout', type=positive_float,
                       default=DEFAULT_TIMEOUT, help='seconds per system')
    bench.add_argument('--guard', choices=GUARDS, default=POS_GUARD)
    bench.add_argument('--jobs', type=positive_int, default=1)
    bench.add_argument('--csv', metavar='PATH',
                       help='write the CSV here instead of standard output')
    bench.set_defaults(func=run_bench)
    return parser


def run_prove(args):
    try:
        trs = read_trs(args.file)
    except TRSFormatError as e:
        sys.stderr.write('{0}: {1}\n'.format(args.file, e))
        return EXIT_PARSE_ERROR
    except (OSError, UnicodeDecodeError) as e:
        sys.stderr.write('cannot read {0}: {1}\n'.format(args.file, e))
        return EXIT_UNREADABLE
    solver = make_solver(args.solver, args.timeout)
    verdict, tree = prove_termination(trs, args.mode, solver,
                                      budget=args.timeout, guard=args.guard)
    sys.stdout.write(verdict + '\n')
    if args.proof == 'text':
        sys.stdout.write(tree.to_text())
    elif args.proof == 'json':
        sys.stdout.write(tree.to_json() + '\n')
    return VERDICT_EXIT_CODES[verdict]


def load_corpus(directory):
    """
    Parse every ``.trs`` file of ``directory``.

    :return: base name -> TRS, or None for files that cannot be parsed
    :rtype: dict

    """
    systems = {}
    for path in trs_files(directory):
        name = os.path.basename(path)
        try:
            systems[name] = read_trs(path)
        except (TRSFormatError, OSError, UnicodeDecodeError) as e:
            logger.warning('skipping %s: %s', name, e)
            systems[name] = None
    return systems


def bench_one(name, trs, mode, solver, timeout, guard=POS_GUARD):
    if trs is None:
        return BenchRecord(name, mode, MAYBE, 0.0, 0, 0)
    started = time.monotonic()
    verdict, tree = prove_termination(trs, mode, solver, budget=timeout,
                                      guard=guard)
    return BenchRecord(name, mode, verdict, time.monotonic() - started,
                       len(tree.pairs), tree.pairs_removed)


def summarize(records, modes):
    """
    Per mode: count and cumulative seconds of each verdict.

    :return: mode -> {verdict: (count, seconds)}
    :rtype: dict

    """
    summary = {}
    for mode in modes:
        rows = [r for r in records if r.mode == mode]
        verdicts = np.array([r.verdict for r in rows], dtype=object)
        seconds = np.array([r.seconds for r in rows], dtype=np.float64)
        summary[mode] = {}
        for verdict in (YES, MAYBE, TIMEOUT):
            selected = verdicts == verdict
            summary[mode][verdict] = (int(np.count_nonzero(selected)),
                                      float(np.sum(seconds[selected])))
    return summary


def format_table(summary):
    header = ['mode', YES, MAYBE, TIMEOUT, 'total']
    rows = [header]
    for mode, cells in summary.items():
        row = [mode]
        for verdict in (YES, MAYBE, TIMEOUT):
            count, seconds = cells[verdict]
            row.append('{0} ({1:.2f}s)'.format(count, seconds))
        row.append('{0} ({1:.2f}s)'.format(
            sum(count for count, _ in cells.values()),
            sum(seconds for _, seconds in cells.values())))
        rows.append(row)
    widths = [max(len(row[k]) for row in rows) for k in range(len(header))]
    return '\n'.join('  '.join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip()  # noqa
                     for row in rows) + '\n'


def format_csv(records):
    out = io.StringIO()
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow([record.file, record.mode, record.verdict,
                         '{0:.3f}'.format(record.seconds),
                         record.pairs_total, record.pairs_removed])
    return out.getvalue()


def run_bench(args):
    if not os.path.isdir(args.directory):
        sys.stderr.write('not a directory: {0}\n'.format(args.directory))
        return EXIT_UNREADABLE
    modes = list(dict.fromkeys(args.mode or BENCH_MODES))
    systems = load_corpus(args.directory)
    solver = make_solver(args.solver, args.timeout)
    tasks = [(name, systems[name], mode)
             for mode in modes for name in sorted(systems)]
    with ThreadPoolExecutor(max_workers=args.jobs) as executor:
        records = list(executor.map(
            lambda task: bench_one(task[0], task[1], task[2], solver,
                                   args.timeout, args.guard),
            tasks))
    records.sort(key=lambda r: (r.file, modes.index(r.mode)))
    sys.stdout.write(format_table(summarize(records, modes)))
    table = format_csv(records)
    if args.csv:
        with open(args.csv, 'w') as f:
            f.write(table)
    else:
        sys.stdout.write('\n' + table)
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(stream=sys.stderr,
                        level=logging.DEBUG if args.verbose else logging.WARNING,  # noqa
                        format='%(levelname)s %(name)s: %(message)s')
    try:
        return args.func(args)
    except Exception:
        logger.exception('internal error')
        return EXIT_INTERNAL_ERROR
