"""
Tests for the formula AST.

"""

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ..formula import (FALSE, ONE, TRUE, ZERO, And, BoolConst, Compare,
                       IntConst, Ite, Not, Pos, Product, Sum, Wt, add,
                       collect_variables, conj, disj, eq, evaluate,
                       evaluate_bounds, ge, gt, implies, ite, mul, neg)
from ..terms import Symbol


f = Symbol('f', 2)
p1, p2 = Pos(f, 1), Pos(f, 2)
w1, w2 = Wt(f, 1), Wt(f, 2)


def test_pos_and_wt_differ():
    assert p1 != w1
    assert len({p1, w1, Pos(f, 1)}) == 2
    assert w1.guard == p1


def test_connectives_fold():
    assert conj() == TRUE
    assert disj() == FALSE
    assert conj(p1, FALSE) == FALSE
    assert disj(p1, TRUE) == TRUE
    assert conj(p1, TRUE) == p1
    assert conj(p1, conj(p2, p1)) == And((p1, p2))
    assert neg(neg(p1)) == p1
    assert neg(TRUE) == FALSE
    assert implies(FALSE, p1) == TRUE
    assert implies(TRUE, p1) == p1
    assert implies(p1, FALSE) == Not(p1)
    assert implies(p1, p1) == TRUE


def test_arithmetic_folds():
    assert add() == ZERO
    assert add(1, 2) == IntConst(3)
    assert add(w1, 0) == w1
    assert add(add(w1, 1), add(w2, 2)) == Sum((w1, w2, IntConst(3)))
    assert mul() == ONE
    assert mul(w1, 0) == ZERO
    assert mul(ONE, w1) == w1
    assert mul(2, mul(w1, 3)) == Product((IntConst(6), w1))
    assert ite(TRUE, w1, w2) == w1
    assert ite(p1, w1, w1) == w1
    assert ite(p1, w1, 0) == Ite(p1, w1, ZERO)


def test_comparisons_fold():
    assert ge(2, 1) == TRUE
    assert gt(1, 1) == FALSE
    assert eq(w1, w1) == TRUE
    assert ge(w1, w1) == TRUE
    assert gt(w1, w1) == FALSE
    assert gt(w1, 0) == Compare('>', w1, ZERO)


def test_sorts_are_checked():
    with pytest.raises(TypeError):
        conj(w1)
    with pytest.raises(TypeError):
        add(p1)
    with pytest.raises(TypeError):
        ite(w1, 1, 0)
    with pytest.raises(TypeError):
        ge(p1, 0)


def test_evaluate_defaults():
    formula = conj(implies(p1, gt(w1, 0)), ge(w1, 0))
    assert evaluate(formula, {})
    assert not evaluate(formula, {p1: True})
    assert evaluate(formula, {p1: True, w1: 2})
    assert collect_variables(formula) == {p1, w1}


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3),
       st.integers(0, 3), st.integers(0, 3), st.booleans(), st.booleans())
def test_normalization_preserves_value(a, b, c, v1, v2, b1, b2):
    model = {p1: b1, p2: b2, w1: v1, w2: v2}
    expr = add(mul(a, w1), ite(p1, b, c), mul(w1, mul(w2, b)), c)
    assert evaluate(expr, model) == (a * v1 + (b if b1 else c) +
                                     v1 * v2 * b + c)
    formula = disj(conj(p1, neg(p2)), implies(p2, ge(expr, a)),
                   eq(mul(w1, 1), add(w2, 0)))
    expected = ((b1 and not b2) or (not b2 or evaluate(expr, model) >= a) or
                v1 == v2)
    assert evaluate(formula, model) == expected


def _completions(partial, bound):
    free_pos = [p for p in (p1, p2) if p not in partial]
    for values in itertools.product([False, True], repeat=len(free_pos)):
        model = dict(partial)
        model.update(zip(free_pos, values))
        free_wt = [w for w in (w1, w2) if w not in partial]
        ranges = [[1] if not model[w.guard] else range(1, bound + 1)
                  for w in free_wt]
        for weights in itertools.product(*ranges):
            full = dict(model)
            full.update(zip(free_wt, weights))
            yield full


def test_bounds_are_sound():
    formula = conj(implies(p1, gt(w1, 1)),
                   ge(add(mul(w1, w2), ite(p2, 1, 0)), 3),
                   disj(p1, neg(eq(w2, 2))))
    choices = [None, False, True]
    for pos_values in itertools.product(choices, repeat=2):
        partial = {p: v for p, v in zip((p1, p2), pos_values)
                   if v is not None}
        for weight_values in itertools.product([None, 1, 2], repeat=2):
            current = dict(partial)
            current.update((w, v) for w, v in zip((w1, w2), weight_values)
                           if v is not None)
            verdict = evaluate_bounds(formula, current, 2)
            values = {evaluate(formula, m) for m in _completions(current, 2)}
            if verdict is not None:
                assert values <= {verdict}
            assert isinstance(verdict, (bool, type(None)))


def test_bounds_of_integers():
    assert evaluate_bounds(w1, {}, 3) == (1, 3)
    assert evaluate_bounds(w1, {p1: False}, 3) == (1, 1)
    assert evaluate_bounds(mul(w1, w2), {w1: 2}, 3) == (2, 6)
    assert evaluate_bounds(ite(p1, w1, 0), {}, 2) == (0, 2)
    assert evaluate_bounds(BoolConst(True), {}, 2) is True


def test_bounds_of_dropped_weights():
    assert evaluate_bounds(w1, {p1: False}, 3, dropped_weight=0) == (0, 0)
    assert evaluate_bounds(w1, {p1: True}, 3, dropped_weight=0) == (1, 3)
    assert evaluate_bounds(w1, {}, 3, dropped_weight=0) == (0, 3)
    assert evaluate_bounds(gt(w1, 0), {p1: False}, 2,
                           dropped_weight=0) is False
