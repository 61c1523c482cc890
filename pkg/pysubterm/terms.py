'''
First-order terms, rewrite rules and term rewrite systems.

Terms are immutable and compared structurally; variable names matter.

'''

import itertools
from collections import namedtuple
from dataclasses import dataclass

from .lookup import MARK_SUFFIX


@dataclass(frozen=True)
class Symbol:
    """
    A function symbol. ``marked`` symbols are the sharp symbols
    introduced for dependency pairs; (name, marked) identifies a symbol.

    """
    name: str
    arity: int
    marked: bool = False

    def mark(self):
        return Symbol(self.name, self.arity, True)

    def __str__(self):
        if self.marked:
            return self.name + MARK_SUFFIX
        return self.name

    def __call__(self, *args):
        return App(self, tuple(args))


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class App:
    symbol: Symbol
    args: tuple = ()

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, 'args', tuple(self.args))
        if len(self.args) != self.symbol.arity:
            msg = 'Symbol {0} has arity {1} but got {2} arguments'.format
            raise ValueError(msg(self.symbol, self.symbol.arity,
                                 len(self.args)))

    def __str__(self):
        return format_term(self)


class Rule(namedtuple('Rule', ['lhs', 'rhs'])):
    __slots__ = ()

    def __str__(self):
        return format_rule(self)


def is_var(term):
    return isinstance(term, Var)


def format_term(term):
    if is_var(term):
        return term.name
    if not term.args:
        return str(term.symbol)
    return '{0}({1})'.format(term.symbol,
                             ','.join(format_term(a) for a in term.args))


def format_rule(rule):
    return '{0} -> {1}'.format(format_term(rule.lhs), format_term(rule.rhs))


def iter_subterms(term):
    """Pre-order traversal, duplicates included."""
    stack = [term]
    while stack:
        current = stack.pop()
        yield current
        if not is_var(current):
            stack.extend(reversed(current.args))


def subterms(term):
    """All subterms of ``term``, ``term`` itself included."""
    return set(iter_subterms(term))


def strict_superterm(v, u):
    """True iff ``u`` is a proper subterm of ``v``."""
    if is_var(v):
        return False
    return any(arg == u or strict_superterm(arg, u) for arg in v.args)


def term_size(term):
    return sum(1 for _ in iter_subterms(term))


def term_key(term):
    """Deterministic sort key: smaller terms first, then by text."""
    return (term_size(term), format_term(term))


def variables(term):
    return {t for t in iter_subterms(term) if is_var(t)}


def functions(term):
    return {t.symbol for t in iter_subterms(term) if not is_var(t)}


def rule_symbols(rules):
    symbols = set()
    for rule in rules:
        symbols |= functions(rule.lhs) | functions(rule.rhs)
    return symbols


def defined_symbols(rules):
    return {rule.lhs.symbol for rule in rules}


def substitute(term, sigma):
    if is_var(term):
        return sigma.get(term, term)
    return App(term.symbol, tuple(substitute(a, sigma) for a in term.args))


def _occurs(var, term):
    return any(t == var for t in iter_subterms(term))


def unify(s, t):
    """
    Most general unifier of ``s`` and ``t`` with occurs check.

    :return: substitution mapping variables to terms, or None when the
             terms are not unifiable
    :rtype: dict or None

    """
    unifier = {}
    equations = [(s, t)]
    while equations:
        lhs, rhs = equations.pop()
        if lhs == rhs:
            continue
        if not is_var(lhs) and not is_var(rhs):
            if lhs.symbol != rhs.symbol:
                return None
            equations.extend(zip(lhs.args, rhs.args))
            continue
        if not is_var(lhs):
            lhs, rhs = rhs, lhs
        if _occurs(lhs, rhs):
            return None
        binding = {lhs: rhs}
        equations = [(substitute(a, binding), substitute(b, binding))
                     for a, b in equations]
        unifier = {x: substitute(u, binding) for x, u in unifier.items()}
        unifier[lhs] = rhs
    return unifier


def rename(term, suffix):
    """Rename every variable of ``term`` apart by appending ``suffix``."""
    return substitute(term, {v: Var(v.name + suffix) for v in variables(term)})


def fresh_variables(prefix='?'):
    """Endless supply of variables whose names no parser accepts."""
    for i in itertools.count(1):
        yield Var('{0}{1}'.format(prefix, i))


class TRS(object):
    """
    A term rewrite system: rules, the signature they use, and the
    declared variables.

    """

    def __init__(self, rules, variables=None):
        self.rules = tuple(rules)
        self.signature = frozenset(rule_symbols(self.rules))
        if variables is None:
            found = set()
            for rule in self.rules:
                found |= {v.name for v in iter_subterms(rule.lhs) if is_var(v)}
            variables = found
        self.variables = frozenset(variables)

    @property
    def defined_symbols(self):
        return defined_symbols(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __len__(self):
        return len(self.rules)

    def __eq__(self, other):
        if not isinstance(other, TRS):
            return NotImplemented
        return (self.rules == other.rules and
                self.variables == other.variables)

    def __hash__(self):
        return hash((self.rules, self.variables))

    def __str__(self):
        return format_trs(self)


def format_trs(trs):
    lines = []
    if trs.variables:
        lines.append('(VAR {0})'.format(' '.join(sorted(trs.variables))))
    lines.append('(RULES')
    lines.extend('  ' + format_rule(rule) for rule in trs.rules)
    lines.append(')')
    return '\n'.join(lines) + '\n'
