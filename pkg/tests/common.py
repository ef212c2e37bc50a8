import itertools
import os
from typing import Sequence, Tuple

from pcpp_reconfig.csp import Constraint, CspInstance
from pcpp_reconfig.path import ReconfigProblem, parse_problem
from pcpp_reconfig.pcpp.circuit import Circuit, parse_circuit
from pcpp_reconfig.pcpp.verifier import ScalarPcpp, parse_pcpp

TESTS_ROOT = os.path.dirname(__file__)
FIXTURES_DIR = os.path.join(TESTS_ROOT, 'fixtures')


def fixture_path(*path_components) -> str:
    return os.path.join(FIXTURES_DIR, *path_components)


def read_fixture(*path_components) -> str:
    with open(fixture_path(*path_components), 'r') as f:
        return f.read()


def load_problem(name: str) -> ReconfigProblem:
    return parse_problem(read_fixture('problems', name))


def load_circuit(name: str) -> Circuit:
    return parse_circuit(read_fixture('circuits', name))


def load_verifier(name: str) -> ScalarPcpp:
    return parse_pcpp(read_fixture('verifiers', name))


def equality(i: int, j: int) -> Constraint:
    return Constraint.table((i, j), [(0, 0), (1, 1)])


def always_true(var_indices: Sequence[int], alphabet_size: int = 2):
    tuples = itertools.product(range(alphabet_size), repeat=len(var_indices))
    return Constraint.table(var_indices, tuples)


def or_source() -> ReconfigProblem:
    """
    Two binary variables with ``a or b``, from ``(1, 0)`` to ``(1, 1)``.
    """
    con = Constraint.table((0, 1), [(0, 1), (1, 0), (1, 1)])
    return ReconfigProblem(CspInstance(2, 2, (con,)), (1, 0), (1, 1))


def and_circuit() -> Circuit:
    return Circuit.from_truth_table([0, 0, 0, 1], description='and/2')


def flip(bits: Sequence[int], *positions: int) -> Tuple[int, ...]:
    result = list(bits)
    for pos in positions:
        result[pos] ^= 1
    return tuple(result)
