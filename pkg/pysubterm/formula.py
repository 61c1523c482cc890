'''
Formula AST for the projection constraints.

Boolean nodes: BoolConst, Pos, Compare, Not, And, Or, Implies.
Integer nodes: IntConst, Wt, Ite, Sum, Product.

Build formulas with the lower-case constructors (``conj``, ``add``,
``ge``, ...). They check sorts and normalize: constants are folded,
nested sums/products/conjunctions are flattened, and structurally equal
operands are simplified away. Normalization never changes the value of
a formula under any assignment.

'''

from dataclasses import dataclass


@dataclass(frozen=True)
class BoolConst:
    value: bool


@dataclass(frozen=True)
class IntConst:
    value: int


@dataclass(frozen=True)
class Pos:
    """True iff the projection of ``symbol`` keeps argument ``index``."""
    symbol: object
    index: int


@dataclass(frozen=True)
class Wt:
    """How many times argument ``index`` of ``symbol`` is kept."""
    symbol: object
    index: int

    @property
    def guard(self):
        return Pos(self.symbol, self.index)


@dataclass(frozen=True)
class Ite:
    cond: object
    then: object
    orelse: object


@dataclass(frozen=True)
class Sum:
    terms: tuple


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Compare:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    arg: object


@dataclass(frozen=True)
class And:
    args: tuple


@dataclass(frozen=True)
class Or:
    args: tuple


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


TRUE = BoolConst(True)
FALSE = BoolConst(False)
ZERO = IntConst(0)
ONE = IntConst(1)

BOOL_NODES = (BoolConst, Pos, Compare, Not, And, Or, Implies)
INT_NODES = (IntConst, Wt, Ite, Sum, Product)
COMPARISONS = ('>=', '=', '>')


def is_bool(expr):
    return isinstance(expr, BOOL_NODES)


def is_int(expr):
    return isinstance(expr, INT_NODES)


def _require(check, expr, sort):
    if not check(expr):
        msg = 'Expected a {0} expression, got {1!r}'.format
        raise TypeError(msg(sort, expr))
    return expr


def _boolean(expr):
    if isinstance(expr, bool):
        return BoolConst(expr)
    return _require(is_bool, expr, 'boolean')


def _integer(expr):
    if isinstance(expr, int) and not isinstance(expr, bool):
        return IntConst(expr)
    return _require(is_int, expr, 'integer')


def _dedupe(items):
    seen = set()
    unique = []
    for item in items:
        if item not in seen:
            seen.add(item)
            unique.append(item)
    return unique


def conj(*args):
    flat = []
    for arg in map(_boolean, args):
        if isinstance(arg, And):
            flat.extend(arg.args)
        elif arg == FALSE:
            return FALSE
        elif arg != TRUE:
            flat.append(arg)
    flat = _dedupe(flat)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat))


def disj(*args):
    flat = []
    for arg in map(_boolean, args):
        if isinstance(arg, Or):
            flat.extend(arg.args)
        elif arg == TRUE:
            return TRUE
        elif arg != FALSE:
            flat.append(arg)
    flat = _dedupe(flat)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return flat[0]
    return Or(tuple(flat))


def neg(arg):
    arg = _boolean(arg)
    if isinstance(arg, BoolConst):
        return BoolConst(not arg.value)
    if isinstance(arg, Not):
        return arg.arg
    return Not(arg)


def implies(left, right):
    left, right = _boolean(left), _boolean(right)
    if left == FALSE or right == TRUE or left == right:
        return TRUE
    if left == TRUE:
        return right
    if right == FALSE:
        return neg(left)
    return Implies(left, right)


def ite(cond, then, orelse):
    cond, then, orelse = _boolean(cond), _integer(then), _integer(orelse)
    if isinstance(cond, BoolConst):
        return then if cond.value else orelse
    if then == orelse:
        return then
    return Ite(cond, then, orelse)


def add(*terms):
    flat = []
    constant = 0
    for term in map(_integer, terms):
        parts = term.terms if isinstance(term, Sum) else (term,)
        for part in parts:
            if isinstance(part, IntConst):
                constant += part.value
            else:
                flat.append(part)
    if constant:
        flat.append(IntConst(constant))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return Sum(tuple(flat))


def mul(*factors):
    flat = []
    constant = 1
    for factor in map(_integer, factors):
        parts = factor.factors if isinstance(factor, Product) else (factor,)
        for part in parts:
            if isinstance(part, IntConst):
                constant *= part.value
            else:
                flat.append(part)
    if constant == 0:
        return ZERO
    if constant != 1:
        flat.insert(0, IntConst(constant))
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return Product(tuple(flat))


def _compare(op, left, right):
    left, right = _integer(left), _integer(right)
    if isinstance(left, IntConst) and isinstance(right, IntConst):
        return BoolConst(_COMPARE[op](left.value, right.value))
    if left == right:
        return BoolConst(op != '>')
    return Compare(op, left, right)


def ge(left, right):
    return _compare('>=', left, right)


def gt(left, right):
    return _compare('>', left, right)


def eq(left, right):
    return _compare('=', left, right)


_COMPARE = {'>=': lambda a, b: a >= b,
            '=': lambda a, b: a == b,
            '>': lambda a, b: a > b,
            }


def children(expr):
    if isinstance(expr, Ite):
        return (expr.cond, expr.then, expr.orelse)
    if isinstance(expr, Sum):
        return expr.terms
    if isinstance(expr, Product):
        return expr.factors
    if isinstance(expr, Compare):
        return (expr.left, expr.right)
    if isinstance(expr, Not):
        return (expr.arg,)
    if isinstance(expr, (And, Or)):
        return expr.args
    if isinstance(expr, Implies):
        return (expr.left, expr.right)
    return ()


def iter_nodes(expr):
    """Every distinct node object of ``expr`` once, parents first."""
    seen = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(reversed(children(node)))


def collect_variables(expr):
    """The Pos and Wt variables occurring in ``expr``."""
    return {node for node in iter_nodes(expr) if isinstance(node, (Pos, Wt))}


def formula_size(expr):
    return sum(1 for _ in iter_nodes(expr))


def evaluate(expr, model):
    """
    Value of ``expr`` under ``model``.

    :param expr: formula or integer expression
    :param dict model: Pos -> bool and Wt -> int; missing variables
                       count as False and 0
    :return: the value
    :rtype: bool or int

    """
    memo = {}

    def value(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, (BoolConst, IntConst)):
            result = node.value
        elif isinstance(node, Pos):
            result = bool(model.get(node, False))
        elif isinstance(node, Wt):
            result = int(model.get(node, 0))
        elif isinstance(node, Ite):
            result = value(node.then) if value(node.cond) else value(node.orelse)  # noqa
        elif isinstance(node, Sum):
            result = sum(value(t) for t in node.terms)
        elif isinstance(node, Product):
            result = 1
            for factor in node.factors:
                result *= value(factor)
        elif isinstance(node, Compare):
            result = _COMPARE[node.op](value(node.left), value(node.right))
        elif isinstance(node, Not):
            result = not value(node.arg)
        elif isinstance(node, And):
            result = all(value(a) for a in node.args)
        elif isinstance(node, Or):
            result = any(value(a) for a in node.args)
        elif isinstance(node, Implies):
            result = not value(node.left) or value(node.right)
        else:
            raise TypeError('Not a formula node: {0!r}'.format(node))
        memo[key] = result
        return result

    return value(expr)


def _interval_product(a, b):
    corners = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    return min(corners), max(corners)


def evaluate_bounds(expr, partial, weight_bound, dropped_weight=1):
    """
    Evaluate ``expr`` under a partial assignment.

    Unassigned Pos variables are unknown. A Wt whose Pos is assigned
    False is ``dropped_weight``, one whose Pos is True lies in
    ``[1, weight_bound]`` and one whose Pos is unknown may take either.

    :return: True or False when every completion agrees, None otherwise
             for formulas; a ``(low, high)`` interval for integer
             expressions
    :rtype: bool, None or tuple

    """
    memo = {}

    def bounds(node):
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, BoolConst):
            result = node.value
        elif isinstance(node, IntConst):
            result = (node.value, node.value)
        elif isinstance(node, Pos):
            result = partial.get(node)
        elif isinstance(node, Wt):
            if node in partial:
                result = (partial[node], partial[node])
            else:
                kept = partial.get(node.guard)
                if kept is False:
                    result = (dropped_weight, dropped_weight)
                elif kept:
                    result = (1, weight_bound)
                else:
                    result = (min(dropped_weight, 1), weight_bound)
        elif isinstance(node, Ite):
            cond = bounds(node.cond)
            if cond is None:
                then, orelse = bounds(node.then), bounds(node.orelse)
                result = (min(then[0], orelse[0]), max(then[1], orelse[1]))
            else:
                result = bounds(node.then if cond else node.orelse)
        elif isinstance(node, Sum):
            parts = [bounds(t) for t in node.terms]
            result = (sum(p[0] for p in parts), sum(p[1] for p in parts))
        elif isinstance(node, Product):
            result = (1, 1)
            for factor in node.factors:
                result = _interval_product(result, bounds(factor))
        elif isinstance(node, Compare):
            left, right = bounds(node.left), bounds(node.right)
            if node.op == '>=':
                result = (True if left[0] >= right[1] else
                          False if left[1] < right[0] else None)
            elif node.op == '>':
                result = (True if left[0] > right[1] else
                          False if left[1] <= right[0] else None)
            else:
                if left[0] == left[1] == right[0] == right[1]:
                    result = True
                elif left[1] < right[0] or right[1] < left[0]:
                    result = False
                else:
                    result = None
        elif isinstance(node, Not):
            arg = bounds(node.arg)
            result = None if arg is None else not arg
        elif isinstance(node, And):
            result = True
            for arg in node.args:
                value = bounds(arg)
                if value is False:
                    result = False
                    break
                if value is None:
                    result = None
        elif isinstance(node, Or):
            result = False
            for arg in node.args:
                value = bounds(arg)
                if value is True:
                    result = True
                    break
                if value is None:
                    result = None
        elif isinstance(node, Implies):
            left = bounds(node.left)
            if left is False:
                result = True
            else:
                right = bounds(node.right)
                if right is True:
                    result = True
                elif left is True and right is False:
                    result = False
                else:
                    result = None
        else:
            raise TypeError('Not a formula node: {0!r}'.format(node))
        memo[key] = result
        return result

    return bounds(expr)
