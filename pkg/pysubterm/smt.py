'''
SMT back ends for the projection constraints.

``ExternalSolver`` writes an SMT-LIB 2 script and runs any solver that
reads one (``z3 -in``, ``cvc5 --lang smt2``, ``z3 -smt2 {file}``, ...),
one process per query. ``InternalSolver`` enumerates bounded models in
a fixed order and needs nothing installed.

'''

import logging
import os
import re
import shlex
import subprocess
import tempfile
import time
from collections import namedtuple

from .formula import (And, BoolConst, Compare, Implies, IntConst, Ite, Not,
                      Or, Pos, Product, Sum, Wt, children, collect_variables,
                      evaluate, evaluate_bounds, formula_size, iter_nodes)
from .lookup import (DEFAULT_TIMEOUT, DEFAULT_WEIGHT_BOUND, FILE_PLACEHOLDER,
                     INTERNAL_SOLVER, MAX_INTERNAL_POSITIONS, SAT, TIMED_OUT,
                     UNKNOWN, UNSAT)
from .utils import cancelled, check_positive, expired, symbol_key, time_left


logger = logging.getLogger(__name__)

SolveResult = namedtuple('SolveResult', ['status', 'model', 'diagnostic'])

POLL_INTERVAL = 0.1

SIMPLE_SYMBOL_RE = re.compile(r'^[A-Za-z~!@$%^&*_+=<>.?/-][0-9A-Za-z~!@$%^&*_+=<>.?/-]*$')  # noqa


class SExpressionError(ValueError):
    """Malformed solver output."""

    def __init__(self, message, offset):
        self.offset = offset
        super().__init__(
            '{0} at offset {1}'.format(message, offset))


def _sanitize(name):
    return ''.join(c if c.isalnum() and c.isascii() else
                   '_x{0:x}'.format(ord(c)) for c in name)


def _variable_key(variable):
    return (isinstance(variable, Wt), symbol_key(variable.symbol),
            variable.index)


class VariableNames(object):
    """
    Bijection between Pos/Wt variables and SMT-LIB identifiers:
    ``p_<symbol>_<i>`` and ``w_<symbol>_<i>``, marked symbols suffixed
    with ``_sharp``, clashes resolved with ``#k`` in a fixed order.

    """

    def __init__(self, variables):
        self._names = {}
        self._variables = {}
        for variable in sorted(set(variables), key=_variable_key):
            symbol = variable.symbol
            base = _sanitize(symbol.name)
            if symbol.marked:
                base += '_sharp'
            prefix = 'w' if isinstance(variable, Wt) else 'p'
            name = '{0}_{1}_{2}'.format(prefix, base, variable.index)
            if name in self._variables:
                k = 1
                while '{0}#{1}'.format(name, k) in self._variables:
                    k += 1
                name = '{0}#{1}'.format(name, k)
            self._names[variable] = name
            self._variables[name] = variable

    def name(self, variable):
        return self._names[variable]

    def variable(self, name):
        return self._variables.get(name)

    def names(self):
        return sorted(self._variables)

    def __iter__(self):
        return iter(self._names)

    def __len__(self):
        return len(self._names)


def quote_symbol(name):
    if SIMPLE_SYMBOL_RE.match(name):
        return name
    return '|{0}|'.format(name)


def _is_nonlinear(formula):
    return any(isinstance(node, Product) and
               sum(not isinstance(f, IntConst) for f in node.factors) > 1
               for node in iter_nodes(formula))


def smt_logic(formula):
    return 'QF_NIA' if _is_nonlinear(formula) else 'QF_LIA'


_OPERATORS = {Sum: '+',
              Product: '*',
              And: 'and',
              Or: 'or',
              }


def _render(expr, names):
    memo = {}

    def render(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, BoolConst):
            text = 'true' if node.value else 'false'
        elif isinstance(node, IntConst):
            text = str(node.value) if node.value >= 0 else '(- {0})'.format(-node.value)  # noqa
        elif isinstance(node, (Pos, Wt)):
            text = quote_symbol(names.name(node))
        elif isinstance(node, Ite):
            text = '(ite {0} {1} {2})'.format(render(node.cond),
                                              render(node.then),
                                              render(node.orelse))
        elif isinstance(node, (Sum, Product, And, Or)):
            text = '({0} {1})'.format(_OPERATORS[type(node)],
                                      ' '.join(render(o)
                                               for o in children(node)))
        elif isinstance(node, Compare):
            text = '({0} {1} {2})'.format(node.op, render(node.left),
                                          render(node.right))
        elif isinstance(node, Not):
            text = '(not {0})'.format(render(node.arg))
        elif isinstance(node, Implies):
            text = '(=> {0} {1})'.format(render(node.left),
                                         render(node.right))
        else:
            raise TypeError('Cannot serialize {0!r}'.format(node))
        memo[key] = text
        return text

    return render(expr)


def to_smtlib(formula, names=None):
    """
    Serialize a formula as an SMT-LIB 2 script ending in ``(check-sat)``
    and ``(get-model)``.

    :param formula: Boolean formula
    :param VariableNames names: identifiers to use; derived from the
                                formula when omitted
    :rtype: str

    """
    if names is None:
        names = VariableNames(collect_variables(formula))
    lines = ['(set-logic {0})'.format(smt_logic(formula)),
             '(set-option :produce-models true)']
    for name in names.names():
        sort = 'Int' if isinstance(names.variable(name), Wt) else 'Bool'
        lines.append('(declare-fun {0} () {1})'.format(quote_symbol(name),
                                                       sort))
    conjuncts = formula.args if isinstance(formula, And) else (formula,)
    for conjunct in conjuncts:
        lines.append('(assert {0})'.format(_render(conjunct, names)))
    lines.append('(check-sat)')
    lines.append('(get-model)')
    return '\n'.join(lines) + '\n'


def read_sexpressions(text):
    """
    Read every s-expression in ``text``. Lists become Python lists,
    atoms strings; ``|quoted|`` symbols lose their bars and ``;``
    comments are skipped.

    :raises SExpressionError: unbalanced parentheses or unterminated
                              quoted symbols and strings

    """
    stack = [[]]
    starts = []
    i = 0
    while i < len(text):
        char = text[i]
        if char.isspace():
            i += 1
        elif char == ';':
            end = text.find('\n', i)
            i = len(text) if end < 0 else end
        elif char == '(':
            stack.append([])
            starts.append(i)
            i += 1
        elif char == ')':
            if len(stack) == 1:
                raise SExpressionError('Unexpected )', i)
            done = stack.pop()
            starts.pop()
            stack[-1].append(done)
            i += 1
        elif char in '|"':
            end = text.find(char, i + 1)
            if end < 0:
                raise SExpressionError('Unterminated {0}'.format(char), i)
            atom = text[i + 1:end] if char == '|' else text[i:end + 1]
            stack[-1].append(atom)
            i = end + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in '()|";':  # noqa
                j += 1
            stack[-1].append(text[i:j])
            i = j
    if len(stack) > 1:
        raise SExpressionError('Unbalanced (', starts[-1])
    return stack[0]


def _definitions(sexpr):
    if not isinstance(sexpr, list):
        return
    if sexpr and sexpr[0] == 'define-fun' and len(sexpr) == 5:
        yield sexpr
        return
    for item in sexpr:
        for definition in _definitions(item):
            yield definition


def _model_value(value):
    if value in ('true', 'false'):
        return value == 'true'
    if isinstance(value, list) and len(value) == 2 and value[0] == '-':
        return -int(value[1])
    return int(value)


def _default_model(names):
    return {variable: 0 if isinstance(variable, Wt) else False
            for variable in names}


def read_model(output, names):
    """
    Values the ``(get-model)`` reply of a solver defines for declared
    variables. Definitions of other names are skipped.

    :rtype: dict
    :raises SExpressionError: unreadable reply or value

    """
    model = {}
    for sexpr in read_sexpressions(output):
        for _, name, _, _, value in _definitions(sexpr):
            variable = names.variable(name)
            if variable is None:
                continue
            try:
                model[variable] = _model_value(value)
            except (TypeError, ValueError):
                msg = 'Bad value {0!r} for {1}'.format
                raise SExpressionError(msg(value, name), output.find(name))
    return model


def parse_model(output, names):
    """
    Read the ``(get-model)`` reply of a solver.

    :param str output: solver output after the status line
    :param VariableNames names: the declared variables
    :return: a value for every declared variable; variables the solver
             left out are False or 0
    :rtype: dict

    """
    model = _default_model(names)
    model.update(read_model(output, names))
    return model


class SolverHandle(object):
    """Configuration of one way of solving constraint formulas."""

    def solve(self, formula, deadline=None, cancel=None):
        raise NotImplementedError


class ExternalSolver(SolverHandle):
    """
    An SMT solver run as a subprocess.

    :param str command: command line; the script goes to standard
                        input unless the command contains ``{file}``
    :param float timeout: seconds per query

    """

    def __init__(self, command, timeout=DEFAULT_TIMEOUT):
        if not command or not shlex.split(command):
            raise ValueError('Empty solver command.')
        self.command = command
        self.timeout = check_positive(timeout, 'timeout')

    def solve(self, formula, deadline=None, cancel=None):
        return solve_external(formula, self, deadline, cancel)

    def __repr__(self):
        return 'ExternalSolver({0!r}, timeout={1})'.format(self.command,
                                                           self.timeout)


class InternalSolver(SolverHandle):
    """
    Bounded enumeration: weights range over ``1..weight_bound`` and
    formulas with more than ``max_positions`` Pos variables are refused.

    """

    def __init__(self, weight_bound=DEFAULT_WEIGHT_BOUND,
                 max_positions=MAX_INTERNAL_POSITIONS):
        if weight_bound < 1 or max_positions < 1:
            msg = 'Bounds must be at least 1, got {0} and {1}'.format
            raise ValueError(msg(weight_bound, max_positions))
        self.weight_bound = weight_bound
        self.max_positions = max_positions

    def solve(self, formula, deadline=None, cancel=None):
        return solve_internal(formula, self, deadline, cancel)

    def __repr__(self):
        return 'InternalSolver(weight_bound={0}, max_positions={1})'.format(
            self.weight_bound, self.max_positions)


def make_solver(command, timeout=DEFAULT_TIMEOUT):
    """Solver handle for a command line, or the internal solver."""
    if command is None or command.strip() == INTERNAL_SOLVER:
        return InternalSolver()
    return ExternalSolver(command, timeout)


def _kill(process):
    process.kill()
    process.communicate()


def _communicate(process, script, deadline, cancel):
    pending = script
    while True:
        if cancelled(cancel):
            _kill(process)
            return None, 'cancelled'
        left = time_left(deadline)
        if left is not None and left <= 0:
            _kill(process)
            return None, TIMED_OUT
        wait = POLL_INTERVAL if left is None else min(POLL_INTERVAL, left)
        try:
            output, errors = process.communicate(input=pending, timeout=wait)
            return output, errors
        except subprocess.TimeoutExpired:
            pending = None


def solve_external(formula, handle, deadline=None, cancel=None):
    """
    Run ``handle.command`` on the SMT-LIB script of ``formula``.

    :return: status ``sat`` with a model keyed by Pos/Wt variables,
             ``unsat``, ``unknown`` with a diagnostic, or ``timeout``
    :rtype: SolveResult

    """
    if isinstance(formula, BoolConst):
        if formula.value:
            return SolveResult(SAT, {}, None)
        return SolveResult(UNSAT, None, None)
    names = VariableNames(collect_variables(formula))
    script = to_smtlib(formula, names)
    own_deadline = time.monotonic() + handle.timeout
    deadline = own_deadline if deadline is None else min(deadline,
                                                         own_deadline)
    argv = shlex.split(handle.command)
    path = None
    if any(FILE_PLACEHOLDER in arg for arg in argv):
        fd, path = tempfile.mkstemp(suffix='.smt2', prefix='pysubterm-')
        with os.fdopen(fd, 'w') as f:
            f.write(script)
        argv = [arg.replace(FILE_PLACEHOLDER, path) for arg in argv]
        script = None
    started = time.monotonic()
    try:
        try:
            process = subprocess.Popen(
                argv, stdin=subprocess.PIPE if script is not None else subprocess.DEVNULL,  # noqa
                stdout=subprocess.PIPE, stderr=subprocess.PIPE,
                universal_newlines=True)
        except OSError as e:
            logger.warning('could not start %s: %s', argv[0], e)
            return SolveResult(UNKNOWN, None, 'spawn failure: {0}'.format(e))
        output, errors = _communicate(process, script, deadline, cancel)
    finally:
        if path is not None:
            os.remove(path)
    logger.debug('%s answered in %.3fs', argv[0], time.monotonic() - started)
    if output is None:
        if errors == TIMED_OUT:
            return SolveResult(TIMED_OUT, None, 'solver timed out')
        return SolveResult(UNKNOWN, None, errors)
    lines = output.strip().splitlines()
    status = lines[0].strip() if lines else ''
    if status == SAT:
        rest = output.strip()[len(lines[0]):]
        try:
            defined = read_model(rest, names)
        except SExpressionError as e:
            logger.warning('unreadable model from %s: %s', argv[0], e)
            return SolveResult(UNKNOWN, None, str(e))
        if len(names) and not defined:
            logger.warning('%s answered sat without a model', argv[0])
            return SolveResult(UNKNOWN, None, 'sat without model')
        model = _default_model(names)
        model.update(defined)
        return SolveResult(SAT, model, None)
    if status == UNSAT:
        return SolveResult(UNSAT, None, None)
    if status == UNKNOWN:
        return SolveResult(UNKNOWN, None, 'solver returned unknown')
    diagnostic = 'unexpected solver output {0!r}'.format(status or errors.strip())  # noqa
    logger.warning(diagnostic)
    return SolveResult(UNKNOWN, None, diagnostic)


class _Interrupted(Exception):

    def __init__(self, status, diagnostic):
        self.status = status
        self.diagnostic = diagnostic
        super().__init__(diagnostic)


def solve_internal(formula, handle, deadline=None, cancel=None):
    """
    Depth-first search for the first model in enumeration order: Pos
    variables by name, False before True, then the weights of kept
    arguments by name, ascending from 1. Weights of dropped arguments
    are 1, or 0 for weight-guarded formulas, which have no Pos variables
    and read a kept argument off its weight. A branch is cut as soon as
    no completion can satisfy the formula, so the answer is the one
    plain enumeration would give.

    :rtype: SolveResult

    """
    variables = collect_variables(formula)
    positions = {v for v in variables if isinstance(v, Pos)}
    dropped = 1 if positions else 0
    positions |= {v.guard for v in variables if isinstance(v, Wt)}
    if len(positions) > handle.max_positions:
        msg = 'too large for internal solver: {0} positions'.format
        return SolveResult(UNKNOWN, None, msg(len(positions)))
    names = VariableNames(positions | {Wt(p.symbol, p.index)
                                       for p in positions})
    positions = sorted(positions, key=names.name)
    bound = handle.weight_bound
    partial = {}
    started = time.monotonic()

    def viable():
        if cancelled(cancel):
            raise _Interrupted(UNKNOWN, 'cancelled')
        if expired(deadline):
            raise _Interrupted(TIMED_OUT, 'internal search timed out')
        return evaluate_bounds(formula, partial, bound,
                               dropped) is not False

    def assign_weights(weights):
        if not weights:
            return evaluate(formula, partial)
        weight, rest = weights[0], weights[1:]
        for value in range(1, bound + 1):
            partial[weight] = value
            if viable() and assign_weights(rest):
                return True
        del partial[weight]
        return False

    def assign_positions(k):
        if k == len(positions):
            active = sorted((Wt(p.symbol, p.index) for p in positions
                             if partial[p]), key=names.name)
            for p in positions:
                if not partial[p]:
                    partial[Wt(p.symbol, p.index)] = dropped
            if assign_weights(active):
                return True
            for p in positions:
                if not partial[p]:
                    del partial[Wt(p.symbol, p.index)]
            return False
        for value in (False, True):
            partial[positions[k]] = value
            if viable() and assign_positions(k + 1):
                return True
        del partial[positions[k]]
        return False

    try:
        found = assign_positions(0)
    except _Interrupted as e:
        return SolveResult(e.status, None, e.diagnostic)
    logger.debug('internal search over %d positions (%d nodes): %s in %.3fs',
                 len(positions), formula_size(formula),
                 SAT if found else UNSAT, time.monotonic() - started)
    if found:
        return SolveResult(SAT, dict(partial), None)
    return SolveResult(UNSAT, None, None)


def solve(formula, handle, deadline=None, cancel=None):
    return handle.solve(formula, deadline, cancel)
