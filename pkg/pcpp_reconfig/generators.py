"""
Seeded instance generators. All randomness comes from a
:class:`numpy.random.Generator`; use :func:`~pcpp_reconfig.config.derive_rng`
to obtain one from the root seed.
"""
from typing import List, Set, Tuple

import numpy as np

from .csp import Constraint, CspInstance
from .errors import MalformedInputError
from .parallel.system import (
    LayeredAssignment,
    ParallelPcppSystem,
    lift_scalars,
)
from .path import ReconfigProblem
from .pcpp.verifier import ScalarPcpp
from .util import iter_mixed_radix

__all__ = [
    'GENERATOR_KINDS',
    'equality_chain',
    'or_chain',
    'random_csp',
    'random_binary_source',
    'random_micro_system',
    'random_layered_assignment',
]

GENERATOR_KINDS = ('random-csp', 'equality-chain', 'or-chain')


def equality_chain(n: int) -> ReconfigProblem:
    """
    Binary variables ``x_0, ..., x_{n-1}`` with ``x_i = x_{i+1}``, from all
    zeros to all ones.
    """
    if n < 2:
        raise MalformedInputError("equality-chain needs n >= 2")
    constraints = tuple(
        Constraint.table((i, i + 1), [(0, 0), (1, 1)]) for i in range(n - 1)
    )
    instance = CspInstance(n, 2, constraints)
    return ReconfigProblem(instance, (0,) * n, (1,) * n)


def or_chain(n: int) -> ReconfigProblem:
    """
    Binary variables with ``x_i or x_{i+1}``, from ``1010...`` to
    ``0101...``.
    """
    if n < 2:
        raise MalformedInputError("or-chain needs n >= 2")
    constraints = tuple(
        Constraint.table((i, i + 1), [(0, 1), (1, 0), (1, 1)])
        for i in range(n - 1)
    )
    instance = CspInstance(n, 2, constraints)
    ini = tuple((i + 1) % 2 for i in range(n))
    tar = tuple(i % 2 for i in range(n))
    return ReconfigProblem(instance, ini, tar)


def _random_scope(rng: np.random.Generator, n: int, arity: int):
    return tuple(int(v) for v in rng.choice(n, size=arity, replace=False))


def random_csp(
    rng: np.random.Generator,
    n: int,
    alphabet_size: int,
    num_constraints: int,
    arity: int = 2,
    density: float = 0.5,
) -> ReconfigProblem:
    """
    Random table instance with random solution endpoints: every constraint
    accepts each tuple independently with probability ``density``, plus
    the restrictions of both endpoints.
    """
    if not 1 <= arity <= n or alphabet_size < 1 or num_constraints < 1:
        raise MalformedInputError(
            f"Invalid random-csp parameters n={n}, alphabet={alphabet_size}, "
            f"m={num_constraints}, arity={arity}"
        )
    ini = tuple(int(s) for s in rng.integers(alphabet_size, size=n))
    tar = tuple(int(s) for s in rng.integers(alphabet_size, size=n))
    constraints = []
    for _ in range(num_constraints):
        scope = _random_scope(rng, n, arity)
        accepted: Set[Tuple[int, ...]] = {
            tup
            for tup in iter_mixed_radix((alphabet_size,) * arity)
            if rng.random() < density
        }
        accepted.add(tuple(ini[v] for v in scope))
        accepted.add(tuple(tar[v] for v in scope))
        constraints.append(Constraint.table(scope, accepted))
    instance = CspInstance(n, alphabet_size, tuple(constraints))
    return ReconfigProblem(instance, ini, tar)


def random_binary_source(
    rng: np.random.Generator,
    n: int,
    num_constraints: int = 0,
    density: float = 0.3,
) -> Tuple[ReconfigProblem, List[Tuple[int, ...]]]:
    """
    Random binary 2-CSP with a planted exact path of single bit flips.
    Every constraint accepts the restrictions of all states on the path,
    plus random extra tuples.

    :return:
        The problem and the planted path.
    """
    if n < 2:
        raise MalformedInputError("Binary sources need at least 2 variables")
    num_constraints = num_constraints or n
    state = [int(s) for s in rng.integers(2, size=n)]
    path = [tuple(state)]
    for _ in range(int(rng.integers(1, n + 1))):
        pos = int(rng.integers(n))
        state[pos] ^= 1
        path.append(tuple(state))
    constraints = []
    for _ in range(num_constraints):
        scope = _random_scope(rng, n, 2)
        accepted = {tuple(s[v] for v in scope) for s in path}
        accepted |= {
            tup
            for tup in iter_mixed_radix((2, 2))
            if rng.random() < density
        }
        constraints.append(Constraint.table(scope, accepted))
    instance = CspInstance(n, 2, tuple(constraints))
    return ReconfigProblem(instance, path[0], path[-1]), path


def random_micro_system(
    rng: np.random.Generator,
    max_t: int = 2,
    max_width: int = 4,
    max_r: int = 2,
    max_q: int = 3,
    density: float = 0.6,
) -> ParallelPcppSystem:
    """
    Random small system. Half of the time the layers are lifted from
    random scalar verifiers (row-local predicates); otherwise every layer
    gets a random table over all layers of the queried columns.
    """
    t = int(rng.integers(1, max_t + 1))
    width = int(rng.integers(1, max_width + 1))
    x_cols = int(rng.integers(1, width + 1))
    proof_cols = width - x_cols
    r = int(rng.integers(0, max_r + 1))
    q = int(rng.integers(1, min(max_q, width) + 1))
    query_map = [_random_scope(rng, width, q) for _ in range(1 << r)]
    if rng.random() < 0.5:
        vs = [
            ScalarPcpp(
                x_cols,
                proof_cols,
                r,
                q,
                query_map,
                rng.random((1 << r, 1 << q)) < density,
            )
            for _ in range(t)
        ]
        return lift_scalars(vs)
    tables = rng.random((t, 1 << r, 1 << (t * q))) < density
    return ParallelPcppSystem.from_tables(
        t, x_cols, proof_cols, r, query_map, tables
    )


def random_layered_assignment(
    rng: np.random.Generator, system: ParallelPcppSystem
) -> LayeredAssignment:
    columns = tuple(
        int(c) for c in rng.integers(system.alphabet_size, size=system.width)
    )
    return LayeredAssignment(columns, int(rng.integers(system.t)))
