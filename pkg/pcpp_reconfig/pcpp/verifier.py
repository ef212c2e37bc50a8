"""
Non-adaptive PCPP verifiers, given as explicit tables indexed by the
randomness string.
"""
import logging
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..bits import BitString, check_bits
from ..config import DEFAULT_BUDGETS, Budgets, check_budget
from ..errors import MalformedInputError
from ..util import RecordReader, parse_fraction

__all__ = [
    'ScalarPcpp',
    'check_parallelizable',
    'serialize_pcpp',
    'parse_pcpp',
]

logger = logging.getLogger(__name__)


ProofGenerator = Callable[[BitString], BitString]


class ScalarPcpp:
    """
    A verifier that tosses ``r`` coins, reads the ``q`` positions
    ``query_map[omega]`` of ``x o pi`` and applies the predicate table of
    ``omega`` to the bits read.

    Predicate tables are boolean arrays of shape ``(2^r, 2^q)``; entry
    ``[omega, b]`` is the decision on the queried tuple whose little-endian
    integer value is ``b``.

    :param n:
        Input length.
    :param m:
        Proof length.
    :param r:
        Number of random bits.
    :param q:
        Number of queries per randomness string.
    :param query_map:
        One position tuple per randomness string.
    :param predicates:
        Predicate tables, as described above.
    :param honest_proof:
        Map from solutions of the associated circuit to accepting proofs.
    :param declared_delta:
        Proximity parameter the verifier is meant for.
    :param declared_kappa:
        Soundness error the verifier claims at ``declared_delta``.
    :param allow_repeats:
        Admit query tuples with repeated positions.
    """

    def __init__(
        self,
        n: int,
        m: int,
        r: int,
        q: int,
        query_map: Sequence[Sequence[int]],
        predicates: np.ndarray,
        *,
        honest_proof: Optional[ProofGenerator] = None,
        declared_delta: Optional[Fraction] = None,
        declared_kappa: Optional[Fraction] = None,
        allow_repeats: bool = False,
        budgets: Optional[Budgets] = None,
    ):
        if n < 1 or m < 0 or r < 0 or q < 1:
            raise MalformedInputError(
                f"Invalid verifier dimensions n={n}, m={m}, r={r}, q={q}"
            )
        budgets = budgets or DEFAULT_BUDGETS
        check_budget(
            'verifier predicate entries',
            (1 << r) * (1 << q),
            budgets.max_table_entries,
        )
        queries = tuple(tuple(int(p) for p in I) for I in query_map)
        if len(queries) != 1 << r:
            raise MalformedInputError(
                f"Expected {1 << r} query tuples, got {len(queries)}"
            )
        for omega, I in enumerate(queries):
            if len(I) != q:
                raise MalformedInputError(
                    f"Query tuple of omega={omega} has {len(I)} entries, "
                    f"expected {q}"
                )
            if any(not 0 <= p < n + m for p in I):
                raise MalformedInputError(
                    f"Query tuple of omega={omega} leaves [0, {n + m})"
                )
            if not allow_repeats and len(set(I)) != q:
                raise MalformedInputError(
                    f"Query tuple of omega={omega} repeats a position"
                )
        tables = np.asarray(predicates, dtype=bool)
        if tables.shape != (1 << r, 1 << q):
            raise MalformedInputError(
                f"Predicate tables have shape {tables.shape}, "
                f"expected {(1 << r, 1 << q)}"
            )
        tables = tables.copy()
        tables.setflags(write=False)

        self.n = n
        self.m = m
        self.r = r
        self.q = q
        self.query_map: Tuple[Tuple[int, ...], ...] = queries
        self.predicates = tables
        self.honest_proof = honest_proof
        self.declared_delta = declared_delta
        self.declared_kappa = declared_kappa
        self.allow_repeats = allow_repeats
        positions = np.array(queries, dtype=np.uint64)
        positions.setflags(write=False)
        self.positions = positions

    @property
    def randomness_count(self) -> int:
        return 1 << self.r

    def with_predicates(self, predicates: np.ndarray) -> 'ScalarPcpp':
        """
        Same queries and metadata, other predicate tables.
        """
        return ScalarPcpp(
            self.n,
            self.m,
            self.r,
            self.q,
            self.query_map,
            predicates,
            honest_proof=self.honest_proof,
            declared_delta=self.declared_delta,
            declared_kappa=self.declared_kappa,
            allow_repeats=self.allow_repeats,
        )

    def with_kappa(self, kappa: Fraction) -> 'ScalarPcpp':
        result = self.with_predicates(self.predicates)
        result.declared_kappa = kappa
        return result

    def accepts(self, omega: int, z: Sequence[int]) -> bool:
        """
        Decision of randomness string ``omega`` on the combined word
        ``z = x o pi``.
        """
        b = sum(z[p] << j for j, p in enumerate(self.query_map[omega]))
        return bool(self.predicates[omega, b])

    def accept_count(self, x: Sequence[int], pi: Sequence[int]) -> int:
        z = np.array(
            check_bits(x, self.n, 'x') + check_bits(pi, self.m, 'pi'),
            dtype=np.int64,
        )
        weights = np.int64(1) << np.arange(self.q, dtype=np.int64)
        idx = z[self.positions.astype(np.int64)] @ weights
        hits = self.predicates[np.arange(self.randomness_count), idx]
        return int(np.count_nonzero(hits))

    def accept_prob(self, x: Sequence[int], pi: Sequence[int]) -> Fraction:
        """
        Exact acceptance probability on ``x o pi``, denominator ``2^r``.
        """
        return Fraction(self.accept_count(x, pi), self.randomness_count)

    def __repr__(self):
        return (
            f"ScalarPcpp(n={self.n}, m={self.m}, r={self.r}, q={self.q})"
        )


def check_parallelizable(vs: Sequence[ScalarPcpp]) -> bool:
    """
    Whether all verifiers share dimensions and query the same positions for
    every randomness string. Predicates may differ.
    """
    if not vs:
        raise MalformedInputError("Empty verifier list")
    first = vs[0]
    dims = (first.n, first.m, first.r, first.q)
    for ix, v in enumerate(vs[1:], start=1):
        if (v.n, v.m, v.r, v.q) != dims:
            logger.debug(f"Verifier {ix} has dimensions differing from {dims}")
            return False
        if v.query_map != first.query_map:
            logger.debug(f"Verifier {ix} has a different query map")
            return False
    return True


def serialize_pcpp(v: ScalarPcpp) -> str:
    lines = [f"pcpp {v.n} {v.m} {v.r} {v.q}"]
    if v.declared_delta is not None:
        lines.append(f"delta {v.declared_delta}")
    if v.declared_kappa is not None:
        lines.append(f"kappa {v.declared_kappa}")
    for omega, I in enumerate(v.query_map):
        lines.append(f"omega {omega} " + ' '.join(str(p) for p in I))
        lines.append(
            'pred ' + ''.join('1' if b else '0' for b in v.predicates[omega])
        )
    return '\n'.join(lines) + '\n'


def _read_fraction_line(reader: RecordReader, keyword: str):
    rec = reader.next_if(keyword)
    if rec is None:
        return None
    rec.expect_len(1)
    try:
        return parse_fraction(rec.fields[0])
    except MalformedInputError as e:
        raise rec.error(e.failure_msg, field=keyword)


def parse_pcpp(text: str, budgets: Optional[Budgets] = None) -> ScalarPcpp:
    """
    Parse a verifier file. Repeated query positions are accepted and
    recorded through ``allow_repeats``.
    """
    budgets = budgets or DEFAULT_BUDGETS
    reader = RecordReader(text)
    header = reader.next('pcpp', count=4)
    n = header.int_at(0, 'n', lo=1)
    m = header.int_at(1, 'm')
    r = header.int_at(2, 'r')
    q = header.int_at(3, 'q', lo=1)
    if r > 30 or q > 30:
        raise header.error("randomness and query counts above 30 are refused")
    check_budget(
        'verifier predicate entries',
        (1 << r) * (1 << q),
        budgets.max_table_entries,
    )
    delta = _read_fraction_line(reader, 'delta')
    kappa = _read_fraction_line(reader, 'kappa')
    queries: List[Tuple[int, ...]] = []
    tables = np.zeros((1 << r, 1 << q), dtype=bool)
    for omega in range(1 << r):
        rec = reader.next('omega', count=q + 1)
        if rec.int_at(0, 'omega') != omega:
            raise rec.error(f"expected omega {omega}", field='omega')
        queries.append(rec.ints_from(1, 'i', hi=n + m))
        pred = reader.next('pred', count=1)
        tables[omega] = pred.bits_at(0, 'pred', 1 << q)
    reader.finish()
    repeats = any(len(set(I)) != len(I) for I in queries)
    return ScalarPcpp(
        n,
        m,
        r,
        q,
        queries,
        tables,
        declared_delta=delta,
        declared_kappa=kappa,
        allow_repeats=repeats,
        budgets=budgets,
    )
