"""
Systems of ``t`` verifiers sharing one query map, written as a ``t``-row
table whose columns are the CSP variables of the parallelised instance.

Column values are integers in ``[0, 2^t)``; bit ``i`` of a column value is
the entry of row (layer) ``i``. Input columns come first, then proof
columns.
"""
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from ..bits import BitString, check_bits
from ..config import DEFAULT_BUDGETS, Budgets, check_budget
from ..errors import MalformedInputError, NotParallelizableError
from ..pcpp.circuit import Circuit
from ..pcpp.verifier import ScalarPcpp, check_parallelizable
from ..util import RecordReader

__all__ = [
    'LayerPredicate',
    'LayeredAssignment',
    'ParallelPcppSystem',
    'lift_scalars',
    'parallel_accept_prob',
    'parallel_value',
    'serialize_micro_system',
    'parse_micro_system',
]

logger = logging.getLogger(__name__)


LayerPredicate = Callable[[Tuple[int, ...]], bool]
"""
Decision of one layer on one randomness string, given the full column
values of the queried columns, in query order.
"""

HonestProof = Callable[[Tuple[BitString, ...]], BitString]
"""
Honest proof of one layer, as a function of all input rows.
"""


@dataclass(frozen=True)
class LayeredAssignment:
    """
    Assignment to the columns of a layered table, plus the indicator
    value ``v``.
    """

    columns: Tuple[int, ...]
    v: int = 0

    @classmethod
    def from_rows(
        cls,
        x_rows: Sequence[Sequence[int]],
        proof_rows: Sequence[Sequence[int]],
        v: int = 0,
    ) -> 'LayeredAssignment':
        """
        Stack rows ``x^(i) o pi^(i)`` into column values.
        """
        if len(x_rows) != len(proof_rows) or not x_rows:
            raise MalformedInputError("Need one input and one proof row each")
        rows = [tuple(x) + tuple(p) for x, p in zip(x_rows, proof_rows)]
        width = len(rows[0])
        for ix, row in enumerate(rows):
            check_bits(row, width, f"row {ix}")
        columns = tuple(
            sum(row[col] << i for i, row in enumerate(rows))
            for col in range(width)
        )
        return cls(columns, v)

    def row(self, i: int) -> BitString:
        return tuple((c >> i) & 1 for c in self.columns)

    def with_column(self, col: int, value: int) -> 'LayeredAssignment':
        cols = list(self.columns)
        cols[col] = value
        return replace(self, columns=tuple(cols))

    def with_v(self, v: int) -> 'LayeredAssignment':
        return replace(self, v=v)

    def to_csp(self) -> Tuple[int, ...]:
        """
        The assignment of the parallelised CSP: ``v`` first, then columns.
        """
        return (self.v,) + self.columns

    @classmethod
    def from_csp(cls, a: Sequence[int]) -> 'LayeredAssignment':
        if len(a) < 2:
            raise MalformedInputError("Layered assignments have >= 2 entries")
        return cls(tuple(a[1:]), a[0])


class ParallelPcppSystem:
    """
    ``t`` verifiers on a shared ``t x (x_cols + proof_cols)`` table that
    query the same columns for every randomness string.

    :param t:
        Number of layers.
    :param x_cols:
        Number of input columns.
    :param proof_cols:
        Number of proof columns.
    :param r:
        Number of random bits.
    :param query_map:
        One column tuple per randomness string.
    :param layer_predicates:
        ``layer_predicates[i][omega]`` is layer ``i``'s decision.
    :param circuits:
        Circuits the layers are associated with, if known.
    :param honest_proofs:
        Per-layer honest proof generators, if known.
    :param tables:
        Explicit predicate tables backing ``layer_predicates``, shape
        ``(t, 2^r, 2^(t q))``, for systems that have them.
    """

    def __init__(
        self,
        t: int,
        x_cols: int,
        proof_cols: int,
        r: int,
        query_map: Sequence[Sequence[int]],
        layer_predicates: Sequence[Sequence[LayerPredicate]],
        *,
        circuits: Optional[Sequence[Circuit]] = None,
        honest_proofs: Optional[Sequence[HonestProof]] = None,
        delta: Optional[Fraction] = None,
        kappa: Optional[Fraction] = None,
        tables: Optional[np.ndarray] = None,
    ):
        if t < 1 or x_cols < 1 or proof_cols < 0 or r < 0:
            raise MalformedInputError(
                f"Invalid system dimensions t={t}, x_cols={x_cols}, "
                f"proof_cols={proof_cols}, r={r}"
            )
        width = x_cols + proof_cols
        queries = tuple(tuple(int(c) for c in I) for I in query_map)
        if len(queries) != 1 << r:
            raise MalformedInputError(
                f"Expected {1 << r} query tuples, got {len(queries)}"
            )
        q = len(queries[0])
        for omega, I in enumerate(queries):
            if len(I) != q or q == 0:
                raise MalformedInputError(
                    f"Query tuple of omega={omega} does not have {q} entries"
                )
            if any(not 0 <= c < width for c in I):
                raise MalformedInputError(
                    f"Query tuple of omega={omega} leaves [0, {width})"
                )
        if len(layer_predicates) != t or any(
            len(preds) != 1 << r for preds in layer_predicates
        ):
            raise MalformedInputError(
                f"Need {t} layers of {1 << r} predicates each"
            )
        self.t = t
        self.x_cols = x_cols
        self.proof_cols = proof_cols
        self.r = r
        self.q = q
        self.query_map: Tuple[Tuple[int, ...], ...] = queries
        self.layer_predicates = tuple(tuple(p) for p in layer_predicates)
        self.circuits = tuple(circuits) if circuits is not None else None
        self.honest_proofs = (
            tuple(honest_proofs) if honest_proofs is not None else None
        )
        self.delta = delta
        self.kappa = kappa
        self.tables = tables

    @classmethod
    def from_tables(
        cls,
        t: int,
        x_cols: int,
        proof_cols: int,
        r: int,
        query_map: Sequence[Sequence[int]],
        tables: np.ndarray,
    ) -> 'ParallelPcppSystem':
        """
        System whose layer predicates are explicit tables. Entry
        ``tables[i, omega, b]`` is layer ``i``'s decision on the queried
        column values ``(u_0, ..., u_{q-1})`` with
        ``b = sum_j u_j << (t j)``.
        """
        tables = np.asarray(tables, dtype=bool)
        q = len(query_map[0]) if len(query_map) else 0
        expected = (t, 1 << r, 1 << (t * q))
        if tables.shape != expected:
            raise MalformedInputError(
                f"Layer tables have shape {tables.shape}, expected {expected}"
            )
        tables = tables.copy()
        tables.setflags(write=False)
        preds = [
            [
                _TableLayerPredicate(tables[i, omega], t)
                for omega in range(1 << r)
            ]
            for i in range(t)
        ]
        return cls(t, x_cols, proof_cols, r, query_map, preds, tables=tables)

    @property
    def width(self) -> int:
        return self.x_cols + self.proof_cols

    @property
    def alphabet_size(self) -> int:
        return 1 << self.t

    @property
    def randomness_count(self) -> int:
        return 1 << self.r

    def check_layer(self, i: int):
        if not 0 <= i < self.t:
            raise MalformedInputError(f"Layer {i} not in [0, {self.t})")

    def check_assignment(self, psi: LayeredAssignment):
        if len(psi.columns) != self.width:
            raise MalformedInputError(
                f"Layered assignment has {len(psi.columns)} columns, "
                f"expected {self.width}"
            )
        top = self.alphabet_size
        if any(not 0 <= c < top for c in psi.columns):
            raise MalformedInputError(f"Column values must lie in [0, {top})")
        if not 0 <= psi.v < top:
            raise MalformedInputError(f"Indicator value not in [0, {top})")

    def queried(self, omega: int, columns: Sequence[int]) -> Tuple[int, ...]:
        return tuple(columns[c] for c in self.query_map[omega])

    def accept_count(self, psi: LayeredAssignment, i: int) -> int:
        self.check_layer(i)
        self.check_assignment(psi)
        preds = self.layer_predicates[i]
        return sum(
            1
            for omega in range(self.randomness_count)
            if preds[omega](self.queried(omega, psi.columns))
        )

    def materialize_tables(
        self, budgets: Optional[Budgets] = None
    ) -> np.ndarray:
        """
        Tabulate all layer predicates, shape ``(t, 2^r, 2^(t q))``.
        """
        if self.tables is not None:
            return self.tables
        budgets = budgets or DEFAULT_BUDGETS
        tq = self.t * self.q
        check_budget(
            'layer predicate entries',
            self.t * self.randomness_count * (1 << tq),
            budgets.max_table_entries,
        )
        mask = self.alphabet_size - 1
        inputs = [
            tuple((b >> (self.t * j)) & mask for j in range(self.q))
            for b in range(1 << tq)
        ]
        tables = np.array(
            [
                [[bool(pred(u)) for u in inputs] for pred in preds]
                for preds in self.layer_predicates
            ],
            dtype=bool,
        )
        tables.setflags(write=False)
        self.tables = tables
        return tables

    def __repr__(self):
        return (
            f"ParallelPcppSystem(t={self.t}, x_cols={self.x_cols}, "
            f"proof_cols={self.proof_cols}, r={self.r}, q={self.q})"
        )


class _TableLayerPredicate:
    def __init__(self, table: np.ndarray, t: int):
        self._table = table
        self._t = t

    def __call__(self, values: Tuple[int, ...]) -> bool:
        b = 0
        for j, u in enumerate(values):
            b |= u << (self._t * j)
        return bool(self._table[b])


class _RowLocalPredicate:
    """
    Reads row ``layer`` of the queried columns and applies the scalar
    verifier's predicate for ``omega``.
    """

    def __init__(self, verifier: ScalarPcpp, layer: int, omega: int):
        self._table = verifier.predicates[omega]
        self._layer = layer

    def __call__(self, values: Tuple[int, ...]) -> bool:
        b = 0
        for j, u in enumerate(values):
            b |= ((u >> self._layer) & 1) << j
        return bool(self._table[b])


def lift_scalars(
    vs: Sequence[ScalarPcpp], circuits: Optional[Sequence[Circuit]] = None
) -> ParallelPcppSystem:
    """
    Stack parallelizable scalar verifiers; layer ``i`` reads only row ``i``
    and applies ``vs[i]``.

    :raises NotParallelizableError:
    """
    if not check_parallelizable(vs):
        raise NotParallelizableError(
            "Verifiers do not share dimensions and query locations"
        )
    first = vs[0]
    t = len(vs)
    preds = [
        [
            _RowLocalPredicate(v, i, omega)
            for omega in range(v.randomness_count)
        ]
        for i, v in enumerate(vs)
    ]
    honest: Optional[List[HonestProof]] = None
    if all(v.honest_proof is not None for v in vs):
        honest = [
            (lambda rows, _v=v, _i=i: _v.honest_proof(rows[_i]))
            for i, v in enumerate(vs)
        ]
    kappas = [v.declared_kappa for v in vs]
    kappa = max(kappas) if all(k is not None for k in kappas) else None
    logger.debug(f"Lifted {t} verifiers with shared query map of {first}")
    return ParallelPcppSystem(
        t,
        first.n,
        first.m,
        first.r,
        first.query_map,
        preds,
        circuits=circuits,
        honest_proofs=honest,
        delta=first.declared_delta,
        kappa=kappa,
    )


def parallel_accept_prob(
    system: ParallelPcppSystem, psi: LayeredAssignment, i: int
) -> Fraction:
    """
    Fraction of randomness strings on which layer ``i`` accepts. The
    indicator value of ``psi`` plays no role.
    """
    return Fraction(system.accept_count(psi, i), system.randomness_count)


def parallel_value(
    system: ParallelPcppSystem, psi: LayeredAssignment
) -> Fraction:
    return max(parallel_accept_prob(system, psi, i) for i in range(system.t))


def serialize_micro_system(
    system: ParallelPcppSystem, budgets: Optional[Budgets] = None
) -> str:
    """
    Render a system with explicit layer tables: a ``psys`` header, then for
    each layer and randomness string a ``layer <i> omega`` line with the
    queried columns and a ``layer <i> pred`` line with the table.
    """
    tables = system.materialize_tables(budgets)
    lines = [
        f"psys {system.t} {system.x_cols} {system.proof_cols} "
        f"{system.r} {system.q}"
    ]
    for i in range(system.t):
        for omega, I in enumerate(system.query_map):
            cols = ' '.join(str(c) for c in I)
            bits = ''.join('1' if b else '0' for b in tables[i, omega])
            lines.append(f"layer {i} omega {omega} {cols}")
            lines.append(f"layer {i} pred {bits}")
    return '\n'.join(lines) + '\n'


def read_micro_system(
    reader: RecordReader, budgets: Optional[Budgets] = None
) -> ParallelPcppSystem:
    budgets = budgets or DEFAULT_BUDGETS
    header = reader.next('psys', count=5)
    t = header.int_at(0, 't', lo=1)
    x_cols = header.int_at(1, 'x_cols', lo=1)
    proof_cols = header.int_at(2, 'proof_cols')
    r = header.int_at(3, 'r')
    q = header.int_at(4, 'q', lo=1)
    if t * q > 30 or r > 30:
        raise header.error("layer tables above 2^30 entries are refused")
    check_budget(
        'layer predicate entries',
        t * (1 << r) * (1 << (t * q)),
        budgets.max_table_entries,
    )
    width = x_cols + proof_cols
    tables = np.zeros((t, 1 << r, 1 << (t * q)), dtype=bool)
    query_map: List[Tuple[int, ...]] = []
    for i in range(t):
        for omega in range(1 << r):
            rec = reader.next('layer', count=q + 3)
            if rec.int_at(0, 'layer') != i or rec.fields[1] != 'omega':
                raise rec.error(f"expected 'layer {i} omega'")
            if rec.int_at(2, 'omega') != omega:
                raise rec.error(f"expected omega {omega}", field='omega')
            cols = rec.ints_from(3, 'col', hi=width)
            if i == 0:
                query_map.append(cols)
            elif cols != query_map[omega]:
                raise rec.error(
                    "layers must query the same columns", field='col'
                )
            pred = reader.next('layer', count=3)
            if pred.int_at(0, 'layer') != i or pred.fields[1] != 'pred':
                raise pred.error(f"expected 'layer {i} pred'")
            tables[i, omega] = pred.bits_at(2, 'pred', 1 << (t * q))
    return ParallelPcppSystem.from_tables(
        t, x_cols, proof_cols, r, query_map, tables
    )


def parse_micro_system(
    text: str, budgets: Optional[Budgets] = None
) -> ParallelPcppSystem:
    reader = RecordReader(text)
    system = read_micro_system(reader, budgets)
    reader.finish()
    return system


def rows_of(psi: LayeredAssignment, t: int, x_cols: int):
    """
    Split a layered assignment into its input rows and proof rows.
    """
    rows = [psi.row(i) for i in range(t)]
    return (
        tuple(row[:x_cols] for row in rows),
        tuple(row[x_cols:] for row in rows),
    )
