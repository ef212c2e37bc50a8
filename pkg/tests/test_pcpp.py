import itertools
from fractions import Fraction

import numpy as np
import pytest

from pcpp_reconfig.bits import unpack_le
from pcpp_reconfig.config import Budgets, derive_rng
from pcpp_reconfig.errors import (
    BudgetExceededError,
    MalformedInputError,
    MissingHonestProofError,
    ParseError,
)
from pcpp_reconfig.pcpp import (
    Circuit,
    ScalarPcpp,
    audit_completeness,
    audit_soundness,
    build_proximity_pcpp,
    check_parallelizable,
    far_mask,
    find_accepting_proof,
    is_delta_far,
    parse_circuit,
    parse_pcpp,
    proximity_soundness_bound,
    run_soundness_audit,
    serialize_circuit,
    serialize_pcpp,
)

from .common import and_circuit, load_circuit, load_verifier


def _bit_checker() -> ScalarPcpp:
    # omega 0 wants x = 1, omega 1 wants pi = 1
    return ScalarPcpp(
        1, 1, 1, 1, [(0,), (1,)], [[False, True], [False, True]]
    )


def _all_bits(n: int):
    return list(itertools.product((0, 1), repeat=n))


def _random_circuit(rng, n: int) -> Circuit:
    table = (rng.random(1 << n) < 0.4).astype(int)
    table[int(rng.integers(1 << n))] = 1
    return Circuit.from_truth_table(table)


def test_accept_prob_examples():
    v = _bit_checker()
    assert v.accept_prob((1,), (0,)) == Fraction(1, 2)
    assert v.accept_prob((1,), (1,)) == 1
    assert v.accept_prob((0,), (0,)) == 0


def test_accept_prob_recount():
    rng = derive_rng(3, 'test.pcpp.recount')
    queries = [
        tuple(int(p) for p in rng.choice(5, size=3, replace=False))
        for _ in range(8)
    ]
    v = ScalarPcpp(3, 2, 3, 3, queries, rng.random((8, 8)) < 0.5)
    for x in _all_bits(3):
        for pi in _all_bits(2):
            z = x + pi
            count = sum(v.accepts(omega, z) for omega in range(8))
            assert v.accept_prob(x, pi) == Fraction(count, 8)


def test_accept_prob_length_mismatch():
    with pytest.raises(MalformedInputError):
        _bit_checker().accept_prob((1, 0), (1,))


def test_is_delta_far_examples():
    c = and_circuit()
    assert is_delta_far(c, (0, 0), Fraction(1, 2))
    assert not is_delta_far(c, (1, 1), Fraction(1, 5))
    unsat = Circuit.from_truth_table([0, 0, 0, 0])
    assert is_delta_far(unsat, (1, 1), Fraction(1, 2))
    assert far_mask(unsat, Fraction(1, 2)).all()


def test_far_mask_matches_pointwise():
    rng = derive_rng(5, 'test.pcpp.far')
    c = _random_circuit(rng, 4)
    delta = Fraction(1, 4)
    mask = far_mask(c, delta)
    for j in range(16):
        assert mask[j] == is_delta_far(c, unpack_le(j, 4), delta)


def test_build_and_parameters():
    v = build_proximity_pcpp(and_circuit(), 1)
    assert (v.n, v.m, v.r, v.q) == (2, 2, 1, 3)
    assert v.accept_prob((1, 1), (1, 1)) == 1
    assert v.accept_prob((1, 0), (1, 1)) == Fraction(1, 2)


def test_build_rejects_non_power_of_two():
    c = Circuit(3, lambda x: True)
    with pytest.raises(MalformedInputError, match='power-of-two'):
        build_proximity_pcpp(c, 1)
    with pytest.raises(MalformedInputError):
        build_proximity_pcpp(and_circuit(), 0)


def test_self_proof_decides_circuit():
    c = _random_circuit(derive_rng(7, 'test.pcpp.self'), 4)
    v = build_proximity_pcpp(c, 2)
    for x in _all_bits(4):
        assert v.accept_prob(x, x) == int(c.evaluate(x))


def test_more_repetitions_never_accept_more():
    c = Circuit.from_truth_table([1, 0, 1, 1])
    v1 = build_proximity_pcpp(c, 1)
    v2 = build_proximity_pcpp(c, 2)
    for x in _all_bits(2):
        for pi in _all_bits(2):
            assert v2.accept_prob(x, pi) <= v1.accept_prob(x, pi)


def test_completeness_examples():
    c = and_circuit()
    v = build_proximity_pcpp(c, 1)
    assert audit_completeness(v, c)
    broken = np.array(v.predicates)
    broken[0] = False
    assert not audit_completeness(v.with_predicates(broken), c)
    unsat = Circuit.from_truth_table([0, 0, 0, 0])
    assert audit_completeness(build_proximity_pcpp(unsat, 1), unsat)


def test_completeness_needs_proof_generator():
    c = load_circuit('and2.circuit')
    v = load_verifier('accept-all.pcpp')
    with pytest.raises(MissingHonestProofError):
        audit_completeness(v, c)
    assert audit_completeness(v, c, search_proofs=True)
    assert find_accepting_proof(v, (1, 1)) == (0, 0)


def test_soundness_and_half():
    c = and_circuit()
    v = build_proximity_pcpp(c, 1)
    audit = run_soundness_audit(v, c, Fraction(1, 2))
    assert audit.measured == Fraction(1, 2)
    assert audit.far_inputs == 3
    assert audit.witness_x in {(1, 0), (0, 1)}
    assert v.accept_prob(audit.witness_x, audit.witness_pi) == audit.measured


def test_soundness_without_far_inputs():
    c = Circuit.from_truth_table([1, 1, 1, 1])
    v = build_proximity_pcpp(c, 1)
    audit = run_soundness_audit(v, c, Fraction(1, 4))
    assert audit.measured == 0
    assert audit.far_inputs == 0
    assert audit.evaluations == 0


def test_soundness_of_mutant():
    c = load_circuit('and2.circuit')
    v = load_verifier('accept-all.pcpp')
    audit = run_soundness_audit(v, c, v.declared_delta)
    assert audit.measured == 1
    assert not audit.within(v.declared_kappa)


@pytest.mark.parametrize('n', [2, 4, 8])
@pytest.mark.parametrize('k', [1, 2, 3])
def test_soundness_within_bound(n, k):
    delta = Fraction(1, 4)
    c = _random_circuit(derive_rng(n * 10 + k, 'test.pcpp.bound'), n)
    v = build_proximity_pcpp(c, k, delta)
    assert audit_completeness(v, c)
    bound = proximity_soundness_bound(n, k, delta)
    assert v.declared_kappa == bound
    assert audit_soundness(v, c, delta) <= bound


def test_soundness_monotone_in_delta():
    c = _random_circuit(derive_rng(2, 'test.pcpp.monotone'), 4)
    v = build_proximity_pcpp(c, 1)
    values = [
        audit_soundness(v, c, Fraction(j, 4)) for j in range(1, 5)
    ]
    assert values == sorted(values, reverse=True)


def test_soundness_budget():
    c = and_circuit()
    v = build_proximity_pcpp(c, 1)
    with pytest.raises(BudgetExceededError) as exc_info:
        audit_soundness(v, c, Fraction(1, 2), Budgets(max_triples=10))
    assert exc_info.value.size == 4 * 4 * 2


def test_check_parallelizable():
    v = build_proximity_pcpp(and_circuit(), 1)
    assert check_parallelizable([v, v, v])
    other = v.with_predicates(~np.array(v.predicates))
    assert check_parallelizable([v, other])
    queries = list(v.query_map)
    queries[1] = (3, 2, 1)
    perturbed = ScalarPcpp(
        2, 2, 1, 3, queries, v.predicates, allow_repeats=True
    )
    assert not check_parallelizable([v, perturbed])
    with pytest.raises(MalformedInputError):
        check_parallelizable([])


@pytest.mark.parametrize(
    'queries,predicates',
    [
        ([(0,)], [[True, True], [True, True]]),
        ([(0,), (2,)], [[True, True], [True, True]]),
        ([(0,), (1,)], [[True, True, True], [True, True, True]]),
        ([(0, 0), (0, 1)], [[True] * 4, [True] * 4]),
    ],
)
def test_invalid_verifier(queries, predicates):
    q = len(queries[0])
    with pytest.raises(MalformedInputError):
        ScalarPcpp(1, 1, 1, q, queries, predicates)


def test_verifier_file():
    v = build_proximity_pcpp(and_circuit(), 1)
    parsed = parse_pcpp(serialize_pcpp(v))
    assert parsed.query_map == v.query_map
    assert (parsed.predicates == v.predicates).all()
    assert parsed.declared_kappa == v.declared_kappa
    assert parsed.declared_delta == v.declared_delta
    assert not parsed.allow_repeats
    assert parsed.honest_proof is None


def test_verifier_file_repeats():
    text = 'pcpp 1 1 0 2\nomega 0 1 1\npred 0001\n'
    v = parse_pcpp(text)
    assert v.allow_repeats
    assert v.accept_prob((0,), (1,)) == 1


def test_verifier_file_errors():
    with pytest.raises(ParseError, match='expected omega 0'):
        parse_pcpp('pcpp 1 1 0 1\nomega 1 0\npred 01\n')
    with pytest.raises(ParseError, match='line 3'):
        parse_pcpp('pcpp 1 1 0 1\nomega 0 0\npred 011\n')


def test_circuit_file():
    c = parse_circuit(serialize_circuit(and_circuit()))
    assert c.solutions() == [(1, 1)]
    with pytest.raises(ParseError):
        parse_circuit('circuit 2\ntt 000\n')
    with pytest.raises(ParseError, match='2\\^24'):
        parse_circuit('circuit 25\ntt 0\n')


def test_circuit_from_function():
    c = Circuit(3, lambda x: sum(x) >= 2, 'majority')
    assert c.solutions() == [(1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    with pytest.raises(BudgetExceededError):
        Circuit(3, lambda x: True).truth_table(Budgets(max_table_entries=4))
    with pytest.raises(MalformedInputError):
        Circuit.from_truth_table([0, 1, 1])
