'''
Termination proofs with the subterm criterion.

The dependency pairs of a system are split into the SCCs of their
estimated dependency graph. Each SCC is attacked with the subterm
criterion processor; the pairs it removes are dropped, the graph of the
survivors is estimated again and its SCCs are pushed back on the
worklist. The proof succeeds when the worklist runs empty.

'''

import copy
import json
import logging
import threading
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor, as_completed

from .dpframework import (DPProblem, dependency_pairs,
                          estimated_dependency_graph, sccs)
from .encoding import (Multiprojection, check_guard, decode_model,
                       encode_problem, problem_signature, verify_solution)
from .lookup import (ALL, MAYBE, POS_GUARD, PROJECTION_MODES, SAT, TIMED_OUT,
                     TIMEOUT, YES)
from .terms import format_rule
from .utils import cancelled, expired, make_deadline


logger = logging.getLogger(__name__)

ProofStep = namedtuple('ProofStep', ['scc', 'projection', 'removed'])

ProcessorOutcome = namedtuple('ProcessorOutcome',
                              ['projection', 'removed', 'timed_out'])


class UnsoundProjectionError(RuntimeError):
    """A decoded projection failed the semantic re-check."""


class ProofTree(object):
    """
    Record of one proof attempt: the dependency pairs, every successful
    processor step and the SCC the proof got stuck on, if any.

    """

    def __init__(self, mode, pairs):
        self.mode = mode
        self.pairs = tuple(pairs)
        self.steps = []
        self.unsolved = None
        self.verdict = None

    @property
    def pairs_removed(self):
        return sum(len(step.removed) for step in self.steps)

    def to_dict(self):
        return {'mode': self.mode,
                'verdict': self.verdict,
                'pairs': [format_rule(p) for p in self.pairs],
                'steps': [{'scc': [format_rule(p) for p in step.scc],
                           'projection': step.projection.to_dict(),
                           'removed': [format_rule(p) for p in step.removed],
                           }
                          for step in self.steps],
                'unsolved': (None if self.unsolved is None else
                             [format_rule(p) for p in self.unsolved]),
                }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self):
        lines = ['mode: {0}'.format(self.mode),
                 'dependency pairs: {0}'.format(len(self.pairs))]
        lines.extend('  ' + format_rule(p) for p in self.pairs)
        for k, step in enumerate(self.steps, start=1):
            lines.append('step {0}: SCC of {1} pairs'.format(k,
                                                             len(step.scc)))
            lines.extend('  ' + format_rule(p) for p in step.scc)
            lines.append('  projection: {0}'.format(step.projection))
            lines.append('  removed:')
            lines.extend('    ' + format_rule(p) for p in step.removed)
        if self.unsolved is not None:
            lines.append('unsolved SCC:')
            lines.extend('  ' + format_rule(p) for p in self.unsolved)
        return '\n'.join(lines) + '\n'


def replay_proof(document, trs):
    """
    Re-check the steps of a JSON proof against the system it claims to
    prove.

    :param document: proof as produced by ``ProofTree.to_json`` or its
                     parsed dict
    :param trs: the rewrite system
    :return: True when every step is a valid application of the
             subterm criterion
    :rtype: bool
    :raises ValueError: the document names pairs or symbols the system
                        does not have

    """
    if isinstance(document, str):
        document = json.loads(document)
    problem = dependency_pairs(trs)
    by_text = {format_rule(p): p for p in problem.pairs}
    signature = problem_signature(problem.pairs, problem.rules)
    for step in document['steps']:
        try:
            scc = [by_text[text] for text in step['scc']]
            removed = [by_text[text] for text in step['removed']]
        except KeyError as e:
            msg = 'Unknown dependency pair {0}'.format
            raise ValueError(msg(e.args[0]))
        projection = Multiprojection.from_dict(step['projection'], signature)
        check = verify_solution(projection, scc, problem.rules)
        if not check.ok or not removed:
            return False
        if set(removed) != set(check.strict):
            return False
    return True


def subterm_processor(pairs, rules, mode, solver, deadline=None,
                      cancel=None, guard=POS_GUARD):
    """
    Search for a projection that removes pairs from ``pairs``.

    The removed pairs are the strictly decreasing ones according to
    ``verify_solution``, which every decoded model has to pass.

    :return: projection and removed pairs, or no projection and whether
             the search ran out of time
    :rtype: ProcessorOutcome
    :raises UnsoundProjectionError: a model that does not satisfy the
                                    criterion

    """
    formula = encode_problem(pairs, rules, mode, guard)
    result = solver.solve(formula, deadline, cancel)
    logger.debug('%s search on %d pairs: %s', mode, len(pairs),
                 result.status)
    if result.status != SAT:
        if result.diagnostic:
            logger.debug(result.diagnostic)
        return ProcessorOutcome(None, (), result.status == TIMED_OUT)
    projection = decode_model(result.model, problem_signature(pairs, rules),
                              guard)
    check = verify_solution(projection, pairs, rules)
    if not check.ok or not check.strict:
        msg = 'Projection {0} does not satisfy the subterm criterion'.format
        logger.error(msg(projection))
        raise UnsoundProjectionError(msg(projection))
    return ProcessorOutcome(projection, check.strict, False)


def prove_termination(trs, mode, solver, budget=None, cancel=None,
                      guard=POS_GUARD):
    """
    Try to prove termination of ``trs``.

    :param trs: the rewrite system
    :param str mode: a projection mode, or ``all`` for the three run
                     side by side
    :param solver: a SolverHandle
    :param budget: seconds for the whole attempt, None for no limit
    :param cancel: optional threading.Event; once set the attempt stops
    :param str guard: argument guard of the encoding, ``pos`` or
                      ``weight``
    :return: verdict and proof
    :rtype: tuple

    """
    check_guard(guard)
    if mode == ALL:
        return _prove_all(trs, solver, budget, cancel, guard)
    if mode not in PROJECTION_MODES:
        msg = 'Unknown mode {0!r}'.format
        raise ValueError(msg(mode))
    deadline = make_deadline(budget)
    problem = dependency_pairs(trs)
    tree = ProofTree(mode, problem.pairs)
    worklist = list(reversed(sccs(estimated_dependency_graph(problem))))
    verdict = YES
    while worklist:
        scc = worklist.pop()
        if expired(deadline):
            verdict = TIMEOUT
        elif cancelled(cancel):
            verdict = MAYBE
        else:
            outcome = subterm_processor(scc, problem.rules, mode, solver,
                                        deadline, cancel, guard)
            if outcome.projection is not None:
                tree.steps.append(ProofStep(scc, outcome.projection,
                                            outcome.removed))
                survivors = [p for p in scc if p not in outcome.removed]
                remaining = DPProblem(survivors, problem.rules)
                graph = estimated_dependency_graph(remaining)
                worklist.extend(reversed(sccs(graph)))
                continue
            verdict = TIMEOUT if outcome.timed_out else MAYBE
        tree.unsolved = scc
        break
    tree.verdict = verdict
    logger.info('%s: %s after %d steps', mode, verdict, len(tree.steps))
    return verdict, tree


class _AnyEvent(object):

    def __init__(self, *events):
        self.events = [e for e in events if e is not None]

    def is_set(self):
        return any(e.is_set() for e in self.events)

    def set(self):
        self.events[0].set()


def _prove_all(trs, solver, budget, cancel, guard):
    """
    Run every projection mode concurrently. A YES cancels the modes of
    lower priority; the reported YES is the one of the highest priority
    mode, so the answer does not depend on thread timing.

    """
    stops = {mode: _AnyEvent(threading.Event(), cancel)
             for mode in PROJECTION_MODES}
    results = {}
    with ThreadPoolExecutor(max_workers=len(PROJECTION_MODES)) as executor:
        futures = {executor.submit(prove_termination, trs, mode,
                                   copy.copy(solver), budget,
                                   stops[mode], guard): mode
                   for mode in PROJECTION_MODES}
        for future in as_completed(futures):
            mode = futures[future]
            results[mode] = future.result()
            if results[mode][0] == YES:
                rank = PROJECTION_MODES.index(mode)
                for lower in PROJECTION_MODES[rank + 1:]:
                    stops[lower].set()
    for verdict in (YES, TIMEOUT, MAYBE):
        for mode in PROJECTION_MODES:
            if results[mode][0] == verdict:
                return results[mode]
