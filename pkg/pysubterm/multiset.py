'''
Finite multisets and the multiset extension of a strict order.

Three characterizations of ``M >mul N`` are provided and used as mutual
oracles: the definition itself (brute force over every common part Z),
the canonical split where Z is maximal, and the finite-domain condition
built on ``upper``. The last one is what the SMT encoding mirrors.

Well-foundedness of finite strict orders is only needed for the proofs
that the three agree; nothing here depends on it at runtime.

'''

import itertools
from collections import Counter

from .lookup import BRUTEFORCE_LIMIT


class Multiset(object):
    """
    Immutable finite multiset. Absent elements have multiplicity 0,
    and no element is ever stored with multiplicity 0.

    """

    __slots__ = ('_counts', '_hash')

    def __init__(self, elements=()):
        self._counts = Counter(elements)
        self._hash = None

    @classmethod
    def from_counts(cls, counts):
        """
        Build a multiset from an element -> multiplicity mapping.

        :param dict counts: multiplicities, non-negative integers
        :return: the multiset
        :rtype: Multiset

        """
        multiset = cls()
        for element, count in counts.items():
            if count < 0:
                msg = 'Negative multiplicity {0} for {1!r}'.format
                raise ValueError(msg(count, element))
            if count:
                multiset._counts[element] = count
        return multiset

    def multiplicity(self, element):
        return self._counts.get(element, 0)

    def __getitem__(self, element):
        return self.multiplicity(element)

    @property
    def size(self):
        return sum(self._counts.values())

    def __len__(self):
        return self.size

    def __bool__(self):
        return bool(self._counts)

    def __iter__(self):
        return self._counts.elements()

    def __contains__(self, element):
        return element in self._counts

    def elements(self):
        """Distinct elements, as a frozenset."""
        return frozenset(self._counts)

    def items(self):
        return self._counts.items()

    def __add__(self, other):
        return Multiset.from_counts(self._counts + other._counts)

    def __sub__(self, other):
        return Multiset.from_counts(self._counts - other._counts)

    def __and__(self, other):
        return Multiset.from_counts(self._counts & other._counts)

    def scale(self, factor):
        if factor < 0:
            raise ValueError('Cannot scale a multiset by {0}'.format(factor))
        counts = self._counts.items()
        return Multiset.from_counts({element: count * factor
                                     for element, count in counts})

    def __eq__(self, other):
        if not isinstance(other, Multiset):
            return NotImplemented
        return self._counts == other._counts

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._counts.items()))
        return self._hash

    def __repr__(self):
        return 'Multiset({0!r})'.format(sorted(self, key=str))

    def __str__(self):
        return '{' + ', '.join(str(e) for e in sorted(self, key=str)) + '}'


def multiplicity(multiset, element):
    return multiset.multiplicity(element)


class Relation(object):
    """
    An opaque binary predicate, optionally with the finite carrier it is
    meant to be checked on.

    """

    def __init__(self, predicate, carrier=None):
        self.predicate = predicate
        self.carrier = None if carrier is None else frozenset(carrier)

    def __call__(self, x, y):
        return self.predicate(x, y)

    def check_strict_order(self, carrier=None):
        if carrier is None:
            carrier = self.carrier
        if carrier is None:
            raise ValueError('No carrier to check the relation on.')
        return check_strict_order(self.predicate, carrier)


def check_strict_order(rel, carrier):
    """
    Check irreflexivity and transitivity of ``rel`` on a finite set
    by enumeration.

    :return: True if ``rel`` restricted to ``carrier`` is a strict order
    :rtype: bool

    """
    carrier = list(carrier)
    if any(rel(x, x) for x in carrier):
        return False
    for x, y, z in itertools.product(carrier, repeat=3):
        if rel(x, y) and rel(y, z) and not rel(x, z):
            return False
    return True


def _dominates(big, small, rel):
    return all(any(rel(x, y) for x in big.elements())
               for y in small.elements())


def mulex_bruteforce(m, n, rel, limit=BRUTEFORCE_LIMIT):
    """
    Decide ``m >mul n`` straight from the definition: try every common
    part Z (every sub-multiset of the intersection) and look for a split
    M = X + Z, N = Y + Z with X non-empty and every y in Y below some x
    in X.

    This is a test oracle. It refuses inputs whose combined size
    exceeds ``limit``.

    """
    if m.size + n.size > limit:
        msg = ('Multisets too large for brute force: {0} elements, '
               'limit is {1}').format
        raise ValueError(msg(m.size + n.size, limit))
    common = m & n
    elements = sorted(common.elements(), key=repr)
    ranges = [range(common[e] + 1) for e in elements]
    for counts in itertools.product(*ranges):
        z = Multiset.from_counts(dict(zip(elements, counts)))
        x = m - z
        y = n - z
        if x and _dominates(x, y, rel):
            return True
    return False


def mulex_canonical(m, n, rel):
    """
    Decide ``m >mul n`` with the maximal common part: X = M - M & N,
    Y = N - M & N. Equivalent to the definition whenever ``rel`` is
    irreflexive and transitive on the elements involved.

    """
    common = m & n
    x = m - common
    y = n - common
    return bool(x) and _dominates(x, y, rel)


def mulex_finite(m, n, domain, rel):
    """
    Decide ``m >mul n`` over a finite domain D::

        (for all d in D. upper(d) => M(d) >= N(d)) and M != N

    where ``upper(x)`` holds iff every d in D with ``d rel x`` has
    M(d) = N(d).

    :param m: left multiset, all elements in ``domain``
    :param n: right multiset, all elements in ``domain``
    :param domain: the finite carrier D
    :param rel: strict order on D
    :rtype: bool

    """
    domain = frozenset(domain)
    outside = (m.elements() | n.elements()) - domain
    if outside:
        msg = 'Elements {0} are outside the domain.'.format
        raise ValueError(msg(sorted(outside, key=repr)))
    if m == n:
        return False

    def upper(x):
        return all(m[d] == n[d] for d in domain if rel(d, x))

    return all(m[d] >= n[d] for d in domain if upper(d))


def mulex_geq(m, n, rel):
    """Reflexive closure of the multiset extension."""
    return m == n or mulex_canonical(m, n, rel)
