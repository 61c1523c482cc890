'''
Dependency pairs, the estimated dependency graph and its strongly
connected components.

'''

import heapq
import logging
from collections import namedtuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .terms import App, Rule, fresh_variables, is_var, iter_subterms, rename
from .terms import defined_symbols, unify


logger = logging.getLogger(__name__)


def mark(term):
    """Replace the root symbol of ``term`` by its marked version."""
    return App(term.symbol.mark(), term.args)


def _marked_below_root(term):
    return any(not is_var(t) and t.symbol.marked
               for arg in term.args for t in iter_subterms(arg))


class DPProblem(namedtuple('DPProblem', ['pairs', 'rules'])):
    """
    A dependency pair problem: pairs with marked roots and the rewrite
    rules they are taken relative to.

    """
    __slots__ = ()

    def __new__(cls, pairs, rules):
        pairs = tuple(pairs)
        rules = tuple(rules)
        for pair in pairs:
            for side in pair:
                if is_var(side) or not side.symbol.marked:
                    msg = 'Pair {0} does not have marked roots'.format
                    raise ValueError(msg(pair))
                if _marked_below_root(side):
                    msg = 'Pair {0} has a marked symbol below the root'.format
                    raise ValueError(msg(pair))
        for rule in rules:
            if any(not is_var(t) and t.symbol.marked
                   for side in rule for t in iter_subterms(side)):
                msg = 'Rule {0} contains a marked symbol'.format
                raise ValueError(msg(rule))
        return super().__new__(cls, pairs, rules)


def dependency_pairs(trs):
    """
    The pairs ``l# -> u#`` for every rule ``l -> r`` and every subterm
    ``u`` of ``r`` with a defined root symbol, in rule order and then in
    pre-order of ``r``, duplicates dropped.

    :param trs: the rewrite system
    :rtype: DPProblem

    """
    defined = defined_symbols(trs.rules)
    pairs = []
    for rule in trs.rules:
        for u in iter_subterms(rule.rhs):
            if is_var(u) or u.symbol not in defined:
                continue
            pair = Rule(mark(rule.lhs), mark(u))
            if pair not in pairs:
                pairs.append(pair)
    logger.debug('%d dependency pairs from %d rules', len(pairs),
                 len(trs.rules))
    return DPProblem(pairs, trs.rules)


class DependencyGraph(object):
    """
    Directed graph over the pairs of a problem; node ``i`` is
    ``nodes[i]``.

    """

    def __init__(self, nodes, edges):
        self.nodes = tuple(nodes)
        self.edges = frozenset(edges)

    def has_edge(self, a, b):
        return (a, b) in self.edges

    def adjacency(self):
        matrix = np.zeros((len(self.nodes), len(self.nodes)), dtype=bool)
        for a, b in self.edges:
            matrix[a, b] = True
        return matrix

    def __len__(self):
        return len(self.nodes)

    def __repr__(self):
        return 'DependencyGraph({0} nodes, {1} edges)'.format(
            len(self.nodes), len(self.edges))


def ren_cap(term, defined, fresh):
    """
    Replace every subterm with a defined unmarked root, and every
    variable occurrence, by a new variable.

    """
    if is_var(term) or term.symbol in defined:
        return next(fresh)
    return App(term.symbol, tuple(ren_cap(a, defined, fresh)
                                  for a in term.args))


def estimated_dependency_graph(problem):
    """
    Edge from ``s1 -> t1`` to ``s2 -> t2`` when ``ren_cap(t1)`` unifies
    with a renamed copy of ``s2``.

    :param DPProblem problem: pairs and rules
    :rtype: DependencyGraph

    """
    defined = defined_symbols(problem.rules)
    capped = [ren_cap(p.rhs, defined, fresh_variables())
              for p in problem.pairs]
    renamed = [rename(p.lhs, '@') for p in problem.pairs]
    edges = [(a, b)
             for a, t in enumerate(capped)
             for b, s in enumerate(renamed)
             if unify(t, s) is not None]
    return DependencyGraph(problem.pairs, edges)


def sccs(graph):
    """
    Strongly connected components that contain a cycle, in topological
    order of the component graph; ties go to the component holding the
    smallest node index.

    :return: lists of pairs, each in node order
    :rtype: list

    """
    n = len(graph.nodes)
    if n == 0 or not graph.edges:
        return []
    adjacency = graph.adjacency()
    matrix = csr_matrix(adjacency.astype(np.int8))
    count, labels = connected_components(matrix, directed=True,
                                         connection='strong')
    members = [[] for _ in range(count)]
    for node, label in enumerate(labels):
        members[label].append(node)
    successors = [set() for _ in range(count)]
    indegree = [0] * count
    for a, b in graph.edges:
        la, lb = labels[a], labels[b]
        if la != lb and lb not in successors[la]:
            successors[la].add(lb)
            indegree[lb] += 1
    ready = [(members[c][0], c) for c in range(count) if not indegree[c]]
    heapq.heapify(ready)
    order = []
    while ready:
        _, c = heapq.heappop(ready)
        order.append(c)
        for d in successors[c]:
            indegree[d] -= 1
            if not indegree[d]:
                heapq.heappush(ready, (members[d][0], d))
    components = []
    for c in order:
        nodes = members[c]
        if len(nodes) > 1 or adjacency[nodes[0], nodes[0]]:
            components.append([graph.nodes[i] for i in nodes])
    return components
