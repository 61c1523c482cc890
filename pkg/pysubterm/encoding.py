'''
Constraint encoding of the subterm criterion with multiprojections.

For a multiprojection ``pi`` the Boolean ``Pos(f, i)`` says that
argument ``i`` of ``f`` is kept and the integer ``Wt(f, i)`` how often.
``encode_mul`` gives the multiplicity of a subterm in the projected
multiset, and the comparisons of projected multisets are expressed with
the finite-domain form of the multiset extension over the subterms of
both sides.

With the ``weight`` guard no Pos variables are used: an argument is kept
iff its weight is positive, and dropped arguments have weight 0.

'''

import logging
from collections import namedtuple

from .formula import (ONE, ZERO, Pos, Wt, add, conj, disj, eq, formula_size,
                      ge, gt, implies, ite, mul, neg)
from .lookup import (GUARDS, MULTI, POS_GUARD, PROJECTION_MODES, RECURSIVE,
                     SIMPLE, WEIGHT_GUARD)
from .multiset import Multiset, mulex_canonical, mulex_geq
from .terms import (is_var, rule_symbols, strict_superterm, subterms,
                    term_key)
from .utils import symbol_key


logger = logging.getLogger(__name__)

Verification = namedtuple('Verification', ['ok', 'strict'])


class ModelError(ValueError):
    """A solver model that does not describe a multiprojection."""


class Multiprojection(object):
    """
    Map from function symbols to multisets of argument indices.
    Symbols without an entry are mapped to the empty multiset.

    """

    def __init__(self, mapping=None):
        self._mapping = {}
        for symbol, indices in (mapping or {}).items():
            indices = Multiset(indices)
            for i in indices.elements():
                if not 1 <= i <= symbol.arity:
                    msg = 'Index {0} out of range for {1}/{2}'.format
                    raise ValueError(msg(i, symbol, symbol.arity))
            if indices:
                self._mapping[symbol] = indices

    def __getitem__(self, symbol):
        return self._mapping.get(symbol, Multiset())

    def __call__(self, term):
        return apply_projection(self, term)

    def __bool__(self):
        return bool(self._mapping)

    def symbols(self):
        return sorted(self._mapping, key=symbol_key)

    def to_dict(self):
        """Symbol names to sorted index lists, repeats included."""
        return {str(symbol): sorted(self._mapping[symbol])
                for symbol in self.symbols()}

    @classmethod
    def from_dict(cls, data, signature):
        """
        Inverse of ``to_dict``.

        :param dict data: printed symbol name -> list of indices
        :param signature: symbols the names refer to
        :rtype: Multiprojection

        """
        by_name = {str(symbol): symbol for symbol in signature}
        mapping = {}
        for name, indices in data.items():
            try:
                symbol = by_name[name]
            except KeyError:
                msg = 'Unknown symbol {0} in projection'.format
                raise ValueError(msg(name))
            mapping[symbol] = indices
        return cls(mapping)

    def __eq__(self, other):
        if not isinstance(other, Multiprojection):
            return NotImplemented
        return self._mapping == other._mapping

    def __hash__(self):
        return hash(frozenset(self._mapping.items()))

    def __repr__(self):
        return 'Multiprojection({0})'.format(self)

    def __str__(self):
        if not self._mapping:
            return '{}'
        return '; '.join('{0}: {{{1}}}'.format(
            symbol, ', '.join(str(i) for i in sorted(self._mapping[symbol])))
            for symbol in self.symbols())


def apply_projection(pi, term):
    """
    Project ``term``: unfold every symbol whose projection is non-empty
    into the sum of its projected arguments, each counted with its
    weight. Variables and unprojected symbols stay as they are.

    :rtype: Multiset

    """
    if is_var(term):
        return Multiset([term])
    indices = pi[term.symbol]
    if not indices:
        return Multiset([term])
    result = Multiset()
    for i, weight in sorted(indices.items()):
        result = result + apply_projection(pi, term.args[i - 1]).scale(weight)
    return result


def kept(symbol, i, guard=POS_GUARD):
    """Formula saying that argument ``i`` of ``symbol`` is kept."""
    if guard == WEIGHT_GUARD:
        return gt(Wt(symbol, i), ZERO)
    return Pos(symbol, i)


def _positions(symbol, guard=POS_GUARD):
    return [kept(symbol, i, guard) for i in range(1, symbol.arity + 1)]


def check_guard(guard):
    if guard not in GUARDS:
        msg = 'Unknown argument guard {0!r}'.format
        raise ValueError(msg(guard))
    return guard


def encode_mul(w, s, t, guard=POS_GUARD):
    """
    Multiplicity of ``t`` in the projection of ``s``, scaled by ``w``.

    :param w: integer expression accumulated along the path from the
              root of the original term
    :param str guard: how a kept argument is recognized, see ``kept``
    :rtype: integer expression

    """
    if s == t:
        if is_var(s):
            return w
        return ite(conj(*[neg(k) for k in _positions(s.symbol, guard)]),
                   w, ZERO)
    if not strict_superterm(s, t):
        return ZERO
    symbol = s.symbol
    return add(*[ite(kept(symbol, i, guard),
                     encode_mul(mul(w, Wt(symbol, i)), arg, t, guard),
                     ZERO)
                 for i, arg in enumerate(s.args, start=1)])


def _domain(s, t):
    return sorted(subterms(s) | subterms(t), key=term_key)


def encode_geq_neq(s, t, guard=POS_GUARD):
    """
    Both comparison formulas for one rule, sharing the multiplicity
    expressions.

    :return: ``(geq, neq)``; ``geq`` holds iff pi(s) >=mul pi(t) or they
             are equal, ``neq`` iff pi(s) != pi(t)

    """
    domain = _domain(s, t)
    left = {u: encode_mul(ONE, s, u, guard) for u in domain}
    right = {u: encode_mul(ONE, t, u, guard) for u in domain}
    same = {u: eq(left[u], right[u]) for u in domain}
    geq = []
    for u in domain:
        upper = conj(*[same[v] for v in domain if strict_superterm(v, u)])
        geq.append(implies(upper, ge(left[u], right[u])))
    neq = disj(*[neg(same[u]) for u in domain])
    return conj(*geq), neq


def encode_geq(s, t, guard=POS_GUARD):
    return encode_geq_neq(s, t, guard)[0]


def encode_neq(s, t, guard=POS_GUARD):
    return encode_geq_neq(s, t, guard)[1]


def encode_rt(lhs, guard=POS_GUARD):
    """The root of ``lhs`` keeps at least one argument."""
    if is_var(lhs):
        msg = 'Malformed rule: left-hand side {0} is a variable'.format
        raise ValueError(msg(lhs))
    return disj(*_positions(lhs.symbol, guard))


def encode_san(symbol, guard=POS_GUARD):
    """
    All weights are >= 0. With Pos guards a kept argument also needs a
    positive weight.

    """
    if guard == WEIGHT_GUARD:
        return conj(*[ge(Wt(symbol, i), ZERO)
                      for i in range(1, symbol.arity + 1)])
    return conj(*[conj(implies(Pos(symbol, i), gt(Wt(symbol, i), ZERO)),
                       ge(Wt(symbol, i), ZERO))
                  for i in range(1, symbol.arity + 1)])


def _at_most_one(literals):
    return conj(*[disj(neg(a), neg(b))
                  for k, a in enumerate(literals)
                  for b in literals[k + 1:]])


def _unit_weights(symbol, guard):
    return conj(*[implies(kept(symbol, i, guard), eq(Wt(symbol, i), ONE))
                  for i in range(1, symbol.arity + 1)])


def mode_constraints(mode, signature, marked_roots, guard=POS_GUARD):
    """
    Restrict the search to one class of projections.

    simple: every marked root with arguments keeps exactly one of them,
    all other symbols keep none. recursive: every symbol keeps at most
    one argument. Both use weight 1. multi: unrestricted.

    """
    if mode not in PROJECTION_MODES:
        msg = 'Unknown projection mode {0!r}'.format
        raise ValueError(msg(mode))
    if mode == MULTI:
        return conj()
    parts = []
    for symbol in sorted(signature, key=symbol_key):
        positions = _positions(symbol, guard)
        if mode == SIMPLE:
            if symbol in marked_roots and positions:
                parts.append(disj(*positions))
                parts.append(_at_most_one(positions))
            else:
                parts.extend(neg(p) for p in positions)
        elif mode == RECURSIVE:
            parts.append(_at_most_one(positions))
        parts.append(_unit_weights(symbol, guard))
    return conj(*parts)


def problem_signature(pairs, rules):
    return rule_symbols(pairs) | rule_symbols(rules)


def marked_roots(pairs):
    roots = set()
    for pair in pairs:
        for side in pair:
            if not is_var(side):
                roots.add(side.symbol)
    return roots


def encode_problem(pairs, rules, mode, guard=POS_GUARD):
    """
    Constraints whose models are multiprojections that orient every pair
    weakly, at least one pair strictly, and every rule of ``rules``
    whose root is projected weakly.

    :param pairs: dependency pairs of one SCC, non-empty
    :param rules: the rewrite rules
    :param str mode: one of ``PROJECTION_MODES``
    :param str guard: ``pos`` keeps argument i of f iff ``Pos(f, i)``;
                      ``weight`` keeps it iff ``Wt(f, i) > 0`` and uses
                      no Pos variables
    :rtype: formula

    """
    pairs = list(pairs)
    rules = list(rules)
    check_guard(guard)
    if not pairs:
        raise ValueError('Cannot encode a problem without pairs.')
    parts = []
    strict = []
    for pair in pairs:
        geq, neq = encode_geq_neq(pair.lhs, pair.rhs, guard)
        parts.append(geq)
        strict.append(neq)
    parts.append(disj(*strict))
    for rule in rules:
        parts.append(implies(encode_rt(rule.lhs, guard),
                             encode_geq(rule.lhs, rule.rhs, guard)))
    signature = problem_signature(pairs, rules)
    for symbol in sorted(signature, key=symbol_key):
        parts.append(encode_san(symbol, guard))
    parts.append(mode_constraints(mode, signature, marked_roots(pairs),
                                  guard))
    formula = conj(*parts)
    logger.debug('encoded %d pairs and %d rules (%s, %s guard): %d nodes',
                 len(pairs), len(rules), mode, guard, formula_size(formula))
    return formula


def decode_model(model, signature, guard=POS_GUARD):
    """
    Read a multiprojection off a model.

    :param dict model: Pos -> bool, Wt -> int
    :param signature: symbols to decode
    :param str guard: with ``weight`` guards an argument is kept iff its
                      weight is positive and Pos values are ignored
    :rtype: Multiprojection
    :raises ModelError: a kept argument with weight <= 0, or a negative
                        weight

    """
    check_guard(guard)
    mapping = {}
    for symbol in signature:
        counts = {}
        for i in range(1, symbol.arity + 1):
            weight = model.get(Wt(symbol, i), 0)
            if guard == WEIGHT_GUARD:
                if weight < 0:
                    msg = 'Model gives argument {0} of {1} weight {2}'.format
                    raise ModelError(msg(i, symbol, weight))
                if weight:
                    counts[i] = weight
                continue
            if not model.get(Pos(symbol, i), False):
                continue
            if weight <= 0:
                msg = 'Model keeps argument {0} of {1} with weight {2}'.format
                raise ModelError(msg(i, symbol, weight))
            counts[i] = weight
        if counts:
            mapping[symbol] = Multiset.from_counts(counts)
    return Multiprojection(mapping)


def verify_solution(pi, pairs, rules):
    """
    Check a multiprojection semantically, without the encoding.

    Every pair must satisfy pi(s) >mul pi(t) or pi(s) = pi(t), and so
    must every rule whose root symbol is projected.

    :return: whether the conditions hold, and the strictly decreasing
             pairs in input order
    :rtype: Verification

    """
    ok = True
    strict = []
    for pair in pairs:
        left, right = pi(pair.lhs), pi(pair.rhs)
        if mulex_canonical(left, right, strict_superterm):
            strict.append(pair)
        elif left != right:
            ok = False
    for rule in rules:
        if is_var(rule.lhs) or not pi[rule.lhs.symbol]:
            continue
        if not mulex_geq(pi(rule.lhs), pi(rule.rhs), strict_superterm):
            ok = False
    return Verification(ok, tuple(strict))
