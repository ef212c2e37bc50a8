from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcpp_reconfig.config import Budgets, derive_rng
from pcpp_reconfig.csp import Constraint, CspInstance
from pcpp_reconfig.errors import BudgetExceededError, MalformedInputError
from pcpp_reconfig.generators import random_csp
from pcpp_reconfig.path import (
    ReconfigPath,
    ReconfigProblem,
    parse_path,
    parse_problem,
    serialize_path,
    serialize_problem,
)
from pcpp_reconfig.reconfig import (
    GapVerdict,
    bottleneck_path,
    brute_force_reconfig_value,
    classify_gap,
    exact_path,
    explain_path_failure,
    neighbors,
    reconfig_value,
    reconfig_value_with_path,
    verify_path,
)

from .common import always_true, equality, load_problem


def _equality_problem(*extra: Constraint) -> ReconfigProblem:
    instance = CspInstance(2, 2, (equality(0, 1),) + extra)
    return ReconfigProblem(instance, (0, 0), (1, 1))


def test_neighbors_ternary():
    instance = CspInstance(1, 3, (Constraint.table((0,), [(0,)]),))
    assert set(neighbors(instance, (0,))) == {(1,), (2,)}


def test_neighbors_binary():
    instance = CspInstance(2, 2, (equality(0, 1),))
    assert list(neighbors(instance, (0, 0))) == [(1, 0), (0, 1)]


def test_neighbors_count():
    instance = CspInstance(3, 3, (equality(0, 1),))
    a = (2, 0, 1)
    result = list(neighbors(instance, a))
    assert len(result) == 3 * 2
    assert all(sum(x != y for x, y in zip(a, b)) == 1 for b in result)


def test_exact_path_trivial():
    problem = ReconfigProblem(
        CspInstance(2, 2, (equality(0, 1),)), (1, 1), (1, 1)
    )
    assert exact_path(problem) == ReconfigPath([(1, 1)])
    assert reconfig_value(problem) == 1


def test_exact_path_single_change():
    not_one = Constraint.table((0,), [(0,), (2,)])
    problem = ReconfigProblem(CspInstance(1, 3, (not_one,)), (0,), (2,))
    assert exact_path(problem) == ReconfigPath([(0,), (2,)])


def test_exact_path_none():
    assert exact_path(_equality_problem()) is None


def test_exact_path_shortest():
    problem = load_problem('or3.rcp')
    path = exact_path(problem)
    assert path is not None
    # the endpoints differ in all three coordinates
    assert len(path) == 4
    assert verify_path(problem, path, Fraction(1))


@pytest.mark.parametrize(
    'extra,expected',
    [((), Fraction(0)), ((always_true((0, 1)),), Fraction(1, 2))],
)
def test_reconfig_value_examples(extra, expected):
    problem = _equality_problem(*extra)
    assert reconfig_value(problem) == expected
    assert brute_force_reconfig_value(problem) == expected


def test_reconfig_value_chain():
    problem = load_problem('equality3.rcp')
    assert reconfig_value(problem) == Fraction(1, 2)
    path = bottleneck_path(problem)
    assert path.first == (0, 0, 0)
    assert path.last == (1, 1, 1)
    assert verify_path(problem, path, Fraction(1, 2))
    assert not verify_path(problem, path, Fraction(1))


def test_single_assignment_space():
    instance = CspInstance(1, 1, (Constraint.table((0,), [(0,)]),))
    problem = ReconfigProblem(instance, (0,), (0,))
    assert brute_force_reconfig_value(problem) == 1


def test_verify_examples():
    problem = _equality_problem(always_true((0, 1)))
    assert verify_path(
        ReconfigProblem(problem.instance, (1, 1), (1, 1)),
        [(1, 1), (1, 1)],
        Fraction(1),
    )
    path = [(0, 0), (0, 1), (1, 1)]
    assert not verify_path(problem, path, Fraction(1))
    assert verify_path(problem, path, Fraction(1, 2))


@pytest.mark.parametrize(
    'path,msg',
    [
        ([], 'empty'),
        ([(0, 0), (1, 1)], 'differ in 2'),
        ([(0, 1), (1, 1)], 'starts at'),
        ([(0, 0), (0, 1)], 'ends at'),
        ([(0, 0), (0, 2), (1, 1)], 'malformed'),
        ([(0, 0), (0, 1), (1, 1)], 'value 0'),
    ],
)
def test_explain_path_failure(path, msg):
    problem = _equality_problem()
    diagnostic = explain_path_failure(problem, path, Fraction(1, 2))
    assert diagnostic is not None
    assert msg in diagnostic
    assert not verify_path(problem, path, Fraction(1, 2))


def test_budget_exceeded():
    problem = load_problem('equality3.rcp')
    with pytest.raises(BudgetExceededError, match='8 items'):
        reconfig_value(problem, Budgets(max_states=4))
    with pytest.raises(BudgetExceededError):
        brute_force_reconfig_value(problem, Budgets(max_oracle_states=4))


def _random_problem(seed: int) -> ReconfigProblem:
    rng = derive_rng(seed, 'test.reconfig')
    alphabet = int(rng.integers(2, 4))
    n = int(rng.integers(2, 5 if alphabet == 2 else 4))
    return random_csp(rng, n, alphabet, int(rng.integers(1, 5)), density=0.6)


@given(st.integers(0, 1 << 32))
@settings(max_examples=40, deadline=None)
def test_oracle_agreement(seed):
    problem = _random_problem(seed)
    value = reconfig_value(problem)
    assert value == brute_force_reconfig_value(problem)
    assert (exact_path(problem) is not None) == (value == 1)
    instance = problem.instance
    assert value <= min(
        instance.value(problem.sigma_ini), instance.value(problem.sigma_tar)
    )
    assert reconfig_value(problem.reversed()) == value


@given(st.integers(0, 1 << 32))
@settings(max_examples=25, deadline=None)
def test_always_true_monotonicity(seed):
    problem = _random_problem(seed)
    instance = problem.instance
    m = instance.num_constraints
    extended = ReconfigProblem(
        instance.with_constraints(
            [always_true((0,), instance.alphabet_size)]
        ),
        problem.sigma_ini,
        problem.sigma_tar,
    )
    value = reconfig_value(problem)
    assert reconfig_value(extended) == (value * m + 1) / (m + 1)


def test_bottleneck_path_witness():
    problem = _random_problem(11)
    value = reconfig_value(problem)
    assert verify_path(problem, bottleneck_path(problem), value)
    both_value, both_path = reconfig_value_with_path(problem)
    assert both_value == value
    assert list(both_path) == list(bottleneck_path(problem))


def test_relaxed_endpoints():
    instance = CspInstance(2, 2, (equality(0, 1),))
    with pytest.raises(MalformedInputError, match='not a solution'):
        ReconfigProblem(instance, (0, 1), (1, 1))
    problem = ReconfigProblem.relaxed_problem(instance, (0, 1), (1, 1))
    assert problem.is_relaxed
    assert reconfig_value(problem) == 0


def test_path_rejects_jumps():
    with pytest.raises(MalformedInputError):
        ReconfigPath([(0, 0), (1, 1)])
    with pytest.raises(MalformedInputError):
        ReconfigPath([])
    path = ReconfigPath([(0, 0)]).copy_and_append((0, 1))
    assert path.steps == ((0, 0), (0, 1))


def test_problem_file_round_trip():
    problem = load_problem('or3.rcp')
    assert parse_problem(serialize_problem(problem)) == problem


def test_path_file():
    steps = ((1, 0, 1), (1, 1, 1), (0, 1, 1))
    text = serialize_path(steps)
    assert text.startswith('step 1 0 1\n')
    assert parse_path(text, 3) == steps
    with pytest.raises(MalformedInputError):
        parse_path('# nothing\n')
    with pytest.raises(MalformedInputError):
        parse_path('step 1 0\n', 3)


@pytest.mark.parametrize(
    'value,expected',
    [
        (Fraction(1), GapVerdict.YES),
        (Fraction(1, 4), GapVerdict.NO),
        (Fraction(1, 2), GapVerdict.OUTSIDE_PROMISE),
    ],
)
def test_classify_gap(value, expected):
    assert classify_gap(value, Fraction(1), Fraction(1, 3)) == expected


def test_classify_gap_thresholds():
    with pytest.raises(MalformedInputError):
        classify_gap(Fraction(1), Fraction(1, 2), Fraction(2, 3))
