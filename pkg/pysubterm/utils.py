'''
Small helpers shared across the package.

'''

import os
import time
from collections import namedtuple


BenchRecord = namedtuple('BenchRecord',
                         ['file',  # Base name of the .trs file.
                          'mode',  # Projection mode or 'all'.
                          'verdict',  # YES, MAYBE or TIMEOUT.
                          'seconds',  # Wall-clock time of the proof attempt.
                          'pairs_total',  # Dependency pairs of the system.
                          'pairs_removed'])  # Pairs removed by the proof.


def symbol_key(symbol):
    """
    Deterministic sort key for function symbols: by name, unmarked
    before marked, then by arity.

    """
    return (symbol.name, symbol.marked, symbol.arity)


def make_deadline(budget):
    """
    Turn a time budget into an absolute deadline.

    :param budget: seconds, or None for no limit
    :return: a ``time.monotonic`` timestamp or None
    :rtype: float

    """
    if budget is None:
        return None
    return time.monotonic() + budget


def time_left(deadline):
    if deadline is None:
        return None
    return max(deadline - time.monotonic(), 0.0)


def expired(deadline):
    return deadline is not None and time.monotonic() >= deadline


def cancelled(cancel):
    return cancel is not None and cancel.is_set()


def check_positive(value, name):
    if value is None or value <= 0:
        msg = '{0} must be positive, got {1!r}'.format
        raise ValueError(msg(name, value))
    return value


def corpus_dir():
    """Directory of the bundled example systems."""
    return os.path.join(os.path.dirname(os.path.abspath(__file__)), 'corpus')


def trs_files(directory):
    """The ``.trs`` files of ``directory``, sorted by name."""
    return sorted(os.path.join(directory, name)
                  for name in os.listdir(directory)
                  if name.endswith('.trs'))
