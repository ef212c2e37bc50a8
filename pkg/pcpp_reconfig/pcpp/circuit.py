import logging
from typing import Callable, List, Optional, Sequence

import numpy as np

from ..bits import BitString, check_bits, unpack_le
from ..config import DEFAULT_BUDGETS, Budgets, check_budget
from ..errors import MalformedInputError
from ..util import RecordReader

__all__ = [
    'Circuit',
    'serialize_circuit',
    'parse_circuit',
]

logger = logging.getLogger(__name__)


class Circuit:
    """
    A Boolean function ``{0,1}^n -> {0,1}``.

    :param input_len:
        Number of input bits.
    :param evaluator:
        Pure predicate on input bit tuples.
    :param description:
        Short label used in logs and reports.
    """

    def __init__(
        self,
        input_len: int,
        evaluator: Callable[[BitString], bool],
        description: str = 'circuit',
    ):
        if input_len < 1:
            raise MalformedInputError("A circuit needs at least one input")
        self.input_len = input_len
        self._evaluator = evaluator
        self.description = description
        self._truth_table: Optional[np.ndarray] = None

    @classmethod
    def from_truth_table(
        cls, table: Sequence[int], description: str = 'truth table'
    ) -> 'Circuit':
        """
        Circuit whose value on ``x`` is ``table[j]``, where ``j`` is the
        little-endian integer value of ``x``.
        """
        tt = np.array(table, dtype=np.uint8)
        n = int(tt.size).bit_length() - 1
        if tt.ndim != 1 or n < 1 or tt.size != 1 << n:
            raise MalformedInputError(
                "Truth table length must be a power of two, at least 2"
            )
        if np.any(tt > 1):
            raise MalformedInputError("Truth table entries must be 0 or 1")
        weights = [1 << i for i in range(n)]

        def _lookup(x: BitString) -> bool:
            return bool(tt[sum(b * w for b, w in zip(x, weights))])

        result = cls(n, _lookup, description)
        result._truth_table = tt.astype(bool)
        return result

    def evaluate(self, x: Sequence[int]) -> bool:
        return bool(self._evaluator(check_bits(x, self.input_len, 'input')))

    def truth_table(self, budgets: Optional[Budgets] = None) -> np.ndarray:
        """
        Boolean array of length ``2^n``, indexed by little-endian inputs.
        """
        if self._truth_table is None:
            budgets = budgets or DEFAULT_BUDGETS
            size = 1 << self.input_len
            check_budget(
                'circuit truth table entries', size, budgets.max_table_entries
            )
            logger.debug(f"Tabulating {self.description} on {size} inputs")
            self._truth_table = np.fromiter(
                (
                    bool(self._evaluator(unpack_le(j, self.input_len)))
                    for j in range(size)
                ),
                dtype=bool,
                count=size,
            )
        return self._truth_table

    def solution_ints(self, budgets: Optional[Budgets] = None) -> np.ndarray:
        return np.flatnonzero(self.truth_table(budgets)).astype(np.uint64)

    def solutions(self, budgets: Optional[Budgets] = None) -> List[BitString]:
        return [
            unpack_le(int(j), self.input_len)
            for j in self.solution_ints(budgets)
        ]

    def __repr__(self):
        return f"Circuit(n={self.input_len}, {self.description})"


def serialize_circuit(
    circuit: Circuit, budgets: Optional[Budgets] = None
) -> str:
    tt = circuit.truth_table(budgets)
    bits = ''.join('1' if b else '0' for b in tt)
    return f"circuit {circuit.input_len}\ntt {bits}\n"


def parse_circuit(text: str) -> Circuit:
    reader = RecordReader(text)
    header = reader.next('circuit', count=1)
    n = header.int_at(0, 'n', lo=1)
    if n > 24:
        raise header.error("truth tables above 2^24 entries are refused")
    tt = reader.next('tt', count=1).bits_at(0, 'tt', 1 << n)
    reader.finish()
    return Circuit.from_truth_table(tt, description=f"tt/{n}")
