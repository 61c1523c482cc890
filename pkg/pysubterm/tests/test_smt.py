"""
Tests for the SMT back ends.

"""

import io
import shutil
import threading
import time

import pytest

from ..dpframework import (dependency_pairs, estimated_dependency_graph,
                           sccs)
from ..encoding import (decode_model, encode_problem, problem_signature,
                        verify_solution)
from ..formula import (FALSE, TRUE, Pos, Wt, collect_variables, conj, disj,
                       ge, gt, implies, ite, mul, neg)
from ..lookup import MULTI, RECURSIVE, SAT, SIMPLE, TIMED_OUT, UNKNOWN, UNSAT
from ..read_trs import read_trs
from ..smt import (ExternalSolver, InternalSolver, SExpressionError,
                   VariableNames, make_solver, parse_model,
                   read_sexpressions, smt_logic, to_smtlib)
from ..terms import Symbol
from ..utils import corpus_dir, trs_files
from .write_trs_test_files import SAT_WITHOUT_MODEL, quot_trs


f = Symbol('f', 1)
g = Symbol('g', 1)
p, w = Pos(f, 1), Wt(f, 1)

has_sh = pytest.mark.skipif(shutil.which('sh') is None,
                            reason='needs a POSIX shell')
has_z3 = pytest.mark.skipif(shutil.which('z3') is None,
                            reason='z3 is not installed')


def test_script_examples():
    script = to_smtlib(implies(p, gt(w, 0)))
    assert '(assert (=> p_f_1 (> w_f_1 0)))' in script.splitlines()
    script = to_smtlib(ge(ite(neg(p), 1, 0), 1))
    assert '(assert (>= (ite (not p_f_1) 1 0) 1))' in script.splitlines()
    assert to_smtlib(TRUE).splitlines() == ['(set-logic QF_LIA)',
                                            '(set-option :produce-models true)',  # noqa
                                            '(assert true)',
                                            '(check-sat)',
                                            '(get-model)']


def test_script_layout():
    formula = conj(implies(p, gt(w, -1)), disj(p, Pos(g, 1)))
    lines = to_smtlib(formula).splitlines()
    assert lines[:5] == ['(set-logic QF_LIA)',
                         '(set-option :produce-models true)',
                         '(declare-fun p_f_1 () Bool)',
                         '(declare-fun p_g_1 () Bool)',
                         '(declare-fun w_f_1 () Int)']
    assert '(assert (=> p_f_1 (> w_f_1 (- 1))))' in lines
    assert '(assert (or p_f_1 p_g_1))' in lines
    assert lines[-2:] == ['(check-sat)', '(get-model)']


def test_nonlinear_logic():
    assert smt_logic(ge(mul(w, Wt(g, 1)), 1)) == 'QF_NIA'
    assert smt_logic(ge(mul(2, w), 1)) == 'QF_LIA'


def test_name_mangling():
    odd = Symbol('a-b', 1)
    names = VariableNames([Pos(f.mark(), 1), Pos(odd, 1), Wt(odd, 1)])
    assert names.name(Pos(f.mark(), 1)) == 'p_f_sharp_1'
    assert names.name(Pos(odd, 1)) == 'p_a_x2db_1'
    assert names.variable('w_a_x2db_1') == Wt(odd, 1)


def test_name_clashes_are_numbered():
    f2 = Symbol('f', 2)
    formula = disj(Pos(f, 1), Pos(f2, 1))
    names = VariableNames(collect_variables(formula))
    assert names.name(Pos(f, 1)) == 'p_f_1'
    assert names.name(Pos(f2, 1)) == 'p_f_1#1'
    assert '(assert (or p_f_1 |p_f_1#1|))' in to_smtlib(formula)


def test_script_round_trip(quot_trs):
    problem = dependency_pairs(quot_trs)
    formula = encode_problem(problem.pairs[1:2], problem.rules, MULTI)
    script = to_smtlib(formula)
    declared = {sexpr[1] for sexpr in read_sexpressions(script)
                if sexpr[0] == 'declare-fun'}
    assert declared == set(VariableNames(collect_variables(formula)).names())


def test_script_parses_with_pysmt(quot_trs):
    smtlib = pytest.importorskip('pysmt.smtlib.parser')
    problem = dependency_pairs(quot_trs)
    formula = encode_problem(problem.pairs[1:2], problem.rules, MULTI)
    script = smtlib.SmtLibParser().get_script(io.StringIO(to_smtlib(formula)))
    parsed = script.get_last_formula().get_free_variables()
    names = VariableNames(collect_variables(formula)).names()
    assert {v.symbol_name() for v in parsed} <= set(names)


def test_read_sexpressions():
    assert read_sexpressions('(a (b c) |d e|) ; comment\nf') == [
        ['a', ['b', 'c'], 'd e'], 'f']
    with pytest.raises(SExpressionError) as excinfo:
        read_sexpressions('  (a (b)')
    assert excinfo.value.offset == 2
    with pytest.raises(SExpressionError) as excinfo:
        read_sexpressions('a)')
    assert excinfo.value.offset == 1
    with pytest.raises(SExpressionError):
        read_sexpressions('(|open')


def test_parse_model():
    names = VariableNames([p, w, Pos(g, 1)])
    model = parse_model('(model (define-fun p_f_1 () Bool true)\n'
                        '  (define-fun w_f_1 () Int 2))', names)
    assert model == {p: True, w: 2, Pos(g, 1): False}
    model = parse_model('((define-fun w_f_1 () Int (- 1)))', names)
    assert model[w] == -1
    with pytest.raises(SExpressionError):
        parse_model('((define-fun w_f_1 () Int two))', names)


def test_handles_are_validated():
    with pytest.raises(ValueError):
        InternalSolver(weight_bound=0)
    with pytest.raises(ValueError):
        InternalSolver(max_positions=0)
    with pytest.raises(ValueError):
        ExternalSolver('z3 -in', timeout=0)
    with pytest.raises(ValueError):
        ExternalSolver('   ')
    assert isinstance(make_solver('internal'), InternalSolver)
    assert isinstance(make_solver('z3 -in', 5), ExternalSolver)


def test_internal_basic():
    solver = InternalSolver()
    assert solver.solve(conj(p, neg(p))).status == UNSAT
    result = solver.solve(implies(p, gt(w, 0)))
    assert result.status == SAT
    assert result.model == {p: False, w: 1}


def test_internal_enumeration_order():
    a, b = Pos(Symbol('a', 1), 1), Pos(Symbol('b', 1), 1)
    result = InternalSolver().solve(disj(a, b))
    assert result.model[a] is False
    assert result.model[b] is True
    result = InternalSolver(weight_bound=3).solve(conj(p, ge(w, 2)))
    assert result.model == {p: True, w: 2}
    assert InternalSolver(weight_bound=1).solve(conj(p, ge(w, 2))).status \
        == UNSAT


def test_internal_guard():
    symbol = Symbol('big', 21)
    formula = disj(*[Pos(symbol, i) for i in range(1, 22)])
    result = InternalSolver().solve(formula)
    assert result.status == UNKNOWN
    assert 'too large for internal solver' in result.diagnostic


def test_internal_deadline_and_cancel():
    solver = InternalSolver()
    formula = implies(p, gt(w, 0))
    assert solver.solve(formula, deadline=time.monotonic() - 1).status \
        == TIMED_OUT
    cancel = threading.Event()
    cancel.set()
    assert solver.solve(formula, cancel=cancel).status == UNKNOWN


def test_internal_quot(quot_trs):
    problem = dependency_pairs(quot_trs)
    pairs = problem.pairs[1:2]
    signature = problem_signature(pairs, problem.rules)
    solver = InternalSolver()
    simple = solver.solve(encode_problem(pairs, problem.rules, SIMPLE))
    assert simple.status == UNSAT
    result = solver.solve(encode_problem(pairs, problem.rules, RECURSIVE))
    assert result.status == SAT
    pi = decode_model(result.model, signature)
    assert pi.to_dict() == {'minus': [1], 'quot#': [1]}
    assert solver.solve(encode_problem(pairs, problem.rules, RECURSIVE)) \
        == result


def test_spawn_failure():
    result = ExternalSolver('pysubterm-no-such-solver -in').solve(p)
    assert result.status == UNKNOWN
    assert 'spawn failure' in result.diagnostic


@has_sh
def test_external_sat_from_stdin():
    command = ("sh -c 'cat > /dev/null; echo sat; "
               "echo \"((define-fun p_f_1 () Bool true) "
               "(define-fun w_f_1 () Int 2))\"'")
    result = ExternalSolver(command).solve(conj(p, ge(w, 2)))
    assert result.status == SAT
    assert result.model == {p: True, w: 2}


@has_sh
def test_external_sat_without_model():
    result = ExternalSolver(SAT_WITHOUT_MODEL).solve(conj(p, ge(w, 2)))
    assert result.status == UNKNOWN
    assert result.diagnostic == 'sat without model'
    assert result.model is None


@has_sh
def test_external_with_file():
    command = "sh -c 'grep -q check-sat \"$0\" && echo unsat' {file}"
    assert ExternalSolver(command).solve(p).status == UNSAT


@has_sh
def test_external_garbage():
    result = ExternalSolver("sh -c 'cat > /dev/null; echo hello'").solve(p)
    assert result.status == UNKNOWN
    assert 'hello' in result.diagnostic


@pytest.mark.skipif(shutil.which('sleep') is None, reason='needs sleep')
def test_external_timeout():
    started = time.monotonic()
    result = ExternalSolver('sleep 10', timeout=0.3).solve(p)
    assert result.status == TIMED_OUT
    assert time.monotonic() - started < 5


def corpus_formulas():
    for path in trs_files(corpus_dir()):
        problem = dependency_pairs(read_trs(path))
        for scc in sccs(estimated_dependency_graph(problem)):
            for mode in (SIMPLE, RECURSIVE, MULTI):
                yield scc, problem.rules, mode


@has_z3
def test_z3_agrees_with_internal():
    internal = InternalSolver()
    external = ExternalSolver('z3 -in', timeout=30)
    for scc, rules, mode in corpus_formulas():
        formula = encode_problem(scc, rules, mode)
        expected = internal.solve(formula)
        result = external.solve(formula)
        signature = problem_signature(scc, rules)
        if expected.status == SAT:
            assert result.status == SAT
            check = verify_solution(decode_model(result.model, signature),
                                    scc, rules)
            assert check.ok and check.strict
        else:
            # z3 may still find a model with weights above the bound.
            assert result.status in (SAT, UNSAT)


def test_constant_formulas_need_no_process():
    handle = ExternalSolver('/nonexistent/solver')
    assert handle.solve(FALSE).status == UNSAT
    assert handle.solve(TRUE) == (SAT, {}, None)
