"""
Rewriting instances over a ``2^b``-symbol alphabet as binary instances.

Variable ``x`` of the source becomes the binary variables
``x*b, ..., x*b + b - 1``, holding the little-endian bits of its symbol.
A one-symbol change of the source may flip up to ``b`` bits, so binary
reconfiguration paths are finer than source paths.
"""
import logging
from typing import Sequence, Tuple

from ..csp import (
    Assignment,
    Constraint,
    CspInstance,
    StructuredPredicate,
    TablePredicate,
)
from ..errors import MalformedInputError
from ..path import ReconfigProblem

__all__ = [
    'symbol_bits',
    'binarize_csp',
    'binarize_assignment',
    'debinarize_assignment',
    'binarize_problem',
]

logger = logging.getLogger(__name__)


def symbol_bits(alphabet_size: int) -> int:
    """
    Number of bits per symbol.

    :raises MalformedInputError:
        If the alphabet size is not a power of two of at least 2.
    """
    if alphabet_size < 2 or alphabet_size & (alphabet_size - 1):
        raise MalformedInputError(
            f"Alphabet size {alphabet_size} is not a power of two >= 2"
        )
    return alphabet_size.bit_length() - 1


def _to_bits(symbols: Sequence[int], b: int) -> Tuple[int, ...]:
    return tuple((s >> i) & 1 for s in symbols for i in range(b))


def _from_bits(bits: Sequence[int], b: int) -> Tuple[int, ...]:
    return tuple(
        sum(bits[pos + i] << i for i in range(b))
        for pos in range(0, len(bits), b)
    )


class _BinaryView:
    def __init__(self, predicate, b: int):
        self._predicate = predicate
        self._b = b

    def __call__(self, bits: Tuple[int, ...]) -> bool:
        return self._predicate.accepts(_from_bits(bits, self._b))


def _binarize_constraint(con: Constraint, b: int) -> Constraint:
    var_indices = tuple(v * b + i for v in con.var_indices for i in range(b))
    pred = con.predicate
    if isinstance(pred, TablePredicate):
        accepted = frozenset(_to_bits(tup, b) for tup in pred.accepted)
        return Constraint(
            var_indices, TablePredicate(len(var_indices), accepted)
        )
    return Constraint(
        var_indices,
        StructuredPredicate(
            len(var_indices), _BinaryView(pred, b), 'binarized'
        ),
    )


def binarize_csp(instance: CspInstance) -> CspInstance:
    """
    Binary instance whose solutions are the bit encodings of the solutions
    of ``instance``. Binary instances are returned unchanged.
    """
    b = symbol_bits(instance.alphabet_size)
    if b == 1:
        return instance
    logger.debug(
        f"Binarizing {instance.num_vars} variables over "
        f"{instance.alphabet_size} symbols into {instance.num_vars * b} bits"
    )
    return CspInstance(
        instance.num_vars * b,
        2,
        tuple(_binarize_constraint(con, b) for con in instance.constraints),
    )


def binarize_assignment(a: Sequence[int], alphabet_size: int) -> Assignment:
    return _to_bits(a, symbol_bits(alphabet_size))


def debinarize_assignment(
    bits: Sequence[int], alphabet_size: int
) -> Assignment:
    b = symbol_bits(alphabet_size)
    if len(bits) % b:
        raise MalformedInputError(
            f"{len(bits)} bits do not split into {b}-bit symbols"
        )
    return _from_bits(tuple(bits), b)


def binarize_problem(problem: ReconfigProblem) -> ReconfigProblem:
    instance = problem.instance
    a = instance.alphabet_size
    return ReconfigProblem(
        binarize_csp(instance),
        binarize_assignment(problem.sigma_ini, a),
        binarize_assignment(problem.sigma_tar, a),
        relaxed=problem.is_relaxed,
    )
