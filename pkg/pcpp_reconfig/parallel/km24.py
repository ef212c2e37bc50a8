"""
The four-layer reduction from binary 2-CSP reconfiguration.

Every layer ``i`` of the input columns is meant to hold the encoding of a
source assignment. Layer ``i`` of the proof columns holds the three other
encodings ``(w_j)_{j != i}``, in increasing ``j``. Verifier ``i`` checks
that these are codewords of source solutions pairwise within one bit, and
that they agree with the actual input layers ``j != i`` on ``k`` sampled
columns. Since verifier ``i`` never looks at input layer ``i``, that
layer can be rewritten freely while the indicator points at ``i``.
"""
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from typing import List, Optional, Sequence, Tuple, Union

from ..bits import BitString, hamming
from ..config import DEFAULT_BUDGETS, DEFAULT_DELTA, Budgets, check_budget
from ..csp import CspInstance
from ..ecc import AMBIGUOUS, LinearCode, code_from_tag
from ..errors import (
    CodeMismatchError,
    MalformedInputError,
    NonBinarySourceError,
    PreconditionError,
)
from ..path import ReconfigPath, ReconfigProblem, parse_problem, read_endpoints
from ..pcpp.circuit import Circuit
from ..pcpp.proximity import proximity_soundness_bound
from ..util import RecordReader, parse_fraction, read_text
from .reduction import parallelize_to_csp
from .system import LayeredAssignment, ParallelPcppSystem, read_micro_system

__all__ = [
    'KM24_LAYERS',
    'Km24Instance',
    'km24_circuit',
    'km24_build',
    'completeness_path',
    'completeness_csp_path',
    'extract_assignment',
    'serialize_km24_system',
    'parse_system_file',
    'load_system_file',
    'export_reduced',
    'parse_reduced',
]

logger = logging.getLogger(__name__)

KM24_LAYERS = 4


def other_layers(i: int) -> Tuple[int, ...]:
    return tuple(j for j in range(KM24_LAYERS) if j != i)


def _check_source(source: CspInstance, code: LinearCode):
    if source.alphabet_size != 2:
        raise NonBinarySourceError(
            f"The source alphabet has {source.alphabet_size} symbols; the "
            f"four-layer reduction needs a binary source. Binarize the "
            f"source instance first."
        )
    if code.msg_len != source.num_vars:
        raise CodeMismatchError(
            f"Code {code.tag} encodes {code.msg_len} bits, but the source "
            f"has {source.num_vars} variables"
        )


def km24_circuit(source: CspInstance, code: LinearCode, i: int) -> Circuit:
    """
    Circuit of verifier ``i`` on the proof triple ``(w_j)_{j != i}``:
    every ``w_j`` is exactly a codeword, the decoded assignments are
    solutions of ``source``, and they are pairwise within Hamming
    distance 1.

    :raises NonBinarySourceError:
    :raises CodeMismatchError:
    """
    _check_source(source, code)
    if not 0 <= i < KM24_LAYERS:
        raise MalformedInputError(f"Layer {i} not in [0, {KM24_LAYERS})")
    n_blk = code.block_len

    @lru_cache(maxsize=None)
    def _accepts(bits: BitString) -> bool:
        decoded = []
        for s in range(KM24_LAYERS - 1):
            y = code.lookup(bits[s * n_blk : (s + 1) * n_blk])
            if y is None or not source.is_solution(y):
                return False
            decoded.append(y)
        return all(hamming(a, b) <= 1 for a, b in combinations(decoded, 2))

    return Circuit(
        (KM24_LAYERS - 1) * n_blk,
        _accepts,
        description=f"triple check of layer {i}",
    )


class _Km24LayerPredicate:
    def __init__(
        self, circuit: Circuit, layer: int, sampled: Tuple[int, ...], n_blk
    ):
        self._circuit = circuit
        self._layer = layer
        self._others = other_layers(layer)
        self._sampled = sampled
        self._n_blk = n_blk

    def __call__(self, values: Tuple[int, ...]) -> bool:
        k = len(self._sampled)
        w = tuple((u >> self._layer) & 1 for u in values[k:])
        if not self._circuit.evaluate(w):
            return False
        for l, col in enumerate(self._sampled):
            u = values[l]
            for s, j in enumerate(self._others):
                if (u >> j) & 1 != w[s * self._n_blk + col]:
                    return False
        return True


def _honest_proof(rows: Sequence[BitString], i: int) -> BitString:
    return tuple(b for j in other_layers(i) for b in rows[j])


def _encode_state(
    code: LinearCode, sigma: Sequence[int], v: int = 0
) -> LayeredAssignment:
    """
    The honest layered assignment for a source assignment: its encoding in
    every input layer and honest proofs in every proof layer.
    """
    word = code.encode(sigma)
    x_rows = [word] * KM24_LAYERS
    proofs = [_honest_proof(x_rows, i) for i in range(KM24_LAYERS)]
    return LayeredAssignment.from_rows(x_rows, proofs, v)


@dataclass(frozen=True)
class Km24Instance:
    """
    A reduced instance together with everything needed to walk it.
    """

    system: ParallelPcppSystem
    source: ReconfigProblem
    code: LinearCode
    repetitions: int
    delta: Fraction
    psi_ini: LayeredAssignment
    psi_tar: LayeredAssignment

    @property
    def n_blk(self) -> int:
        return self.code.block_len

    @cached_property
    def csp(self) -> CspInstance:
        return parallelize_to_csp(self.system)

    def reduced_problem(self) -> ReconfigProblem:
        return ReconfigProblem(
            self.csp, self.psi_ini.to_csp(), self.psi_tar.to_csp()
        )

    def encode_state(
        self, sigma: Sequence[int], v: int = 0
    ) -> LayeredAssignment:
        return _encode_state(self.code, sigma, v)

    def summary(self) -> List[Tuple[str, str]]:
        csp = self.csp
        return [
            ('t', str(self.system.t)),
            ('x_cols', str(self.system.x_cols)),
            ('proof_cols', str(self.system.proof_cols)),
            ('r', str(self.system.r)),
            ('variables', str(csp.num_vars)),
            ('alphabet', str(csp.alphabet_size)),
            ('constraints', str(csp.num_constraints)),
            ('arity', str(csp.max_arity)),
            ('code', self.code.tag),
            ('code_block_len', str(self.n_blk)),
            ('code_distance', str(self.code.distance)),
            ('kappa', str(self.system.kappa)),
        ]


def km24_build(
    source: ReconfigProblem,
    code: LinearCode,
    k: int,
    delta: Fraction = DEFAULT_DELTA,
    budgets: Optional[Budgets] = None,
) -> Km24Instance:
    """
    Build the four-layer system for a binary source problem.

    :param source:
        Source problem; both endpoints must be solutions.
    :param code:
        Code encoding source assignments; its message length is the number
        of source variables and its block length a power of two.
    :param k:
        Number of sampled input columns per randomness string.
    :param delta:
        Proximity parameter; must be below half the code's relative
        distance.
    """
    budgets = budgets or DEFAULT_BUDGETS
    instance = source.instance
    _check_source(instance, code)
    n_blk = code.block_len
    if n_blk & (n_blk - 1):
        raise CodeMismatchError(
            f"Code block length {n_blk} is not a power of two"
        )
    if not code.supports_proximity(delta):
        raise CodeMismatchError(
            f"Proximity parameter {delta} is not below half of the relative "
            f"distance {code.relative_distance} of {code.tag}"
        )
    if k < 1:
        raise MalformedInputError("At least one column must be sampled")
    endpoints = (('initial', source.sigma_ini), ('target', source.sigma_tar))
    for name, sigma in endpoints:
        if not instance.is_solution(sigma):
            raise PreconditionError(
                f"The {name} source assignment {sigma} is not a solution"
            )
    log_n = n_blk.bit_length() - 1
    r = k * log_n
    check_budget('randomness strings', 1 << r, budgets.max_table_entries)

    proof_cols = (KM24_LAYERS - 1) * n_blk
    proof_part = tuple(range(n_blk, n_blk + proof_cols))
    circuits = [km24_circuit(instance, code, i) for i in range(KM24_LAYERS)]
    query_map = []
    preds: List[list] = [[] for _ in range(KM24_LAYERS)]
    for omega in range(1 << r):
        sampled = tuple(
            (omega >> (l * log_n)) & (n_blk - 1) for l in range(k)
        )
        query_map.append(sampled + proof_part)
        for i in range(KM24_LAYERS):
            preds[i].append(
                _Km24LayerPredicate(circuits[i], i, sampled, n_blk)
            )
    honest = [
        (lambda rows, _i=i: _honest_proof(rows, _i))
        for i in range(KM24_LAYERS)
    ]
    system = ParallelPcppSystem(
        KM24_LAYERS,
        n_blk,
        proof_cols,
        r,
        query_map,
        preds,
        circuits=circuits,
        honest_proofs=honest,
        delta=delta,
        kappa=proximity_soundness_bound(n_blk, k, delta),
    )
    logger.info(
        f"Built four-layer system for {source} with {code.tag}: {system}"
    )
    return Km24Instance(
        system=system,
        source=source,
        code=code,
        repetitions=k,
        delta=delta,
        psi_ini=_encode_state(code, source.sigma_ini),
        psi_tar=_encode_state(code, source.sigma_tar),
    )


class _PathBuilder:
    def __init__(self, inst: Km24Instance):
        self.inst = inst
        self.cols = list(inst.psi_ini.columns)
        self.v = inst.psi_ini.v
        self.steps = [inst.psi_ini]

    def _emit(self):
        self.steps.append(LayeredAssignment(tuple(self.cols), self.v))

    def set_bit(self, col: int, layer: int, bit: int):
        new = (self.cols[col] & ~(1 << layer)) | (bit << layer)
        if new != self.cols[col]:
            self.cols[col] = new
            self._emit()

    def set_v(self, v: int):
        if v != self.v:
            self.v = v
            self._emit()

    def write_x(self, layer: int, word: BitString):
        for col, bit in enumerate(word):
            self.set_bit(col, layer, bit)

    def refresh_proof(self, layer: int):
        n_blk = self.inst.n_blk
        rows = [
            tuple((c >> j) & 1 for c in self.cols[:n_blk])
            for j in range(KM24_LAYERS)
        ]
        for p, bit in enumerate(_honest_proof(rows, layer)):
            self.set_bit(n_blk + p, layer, bit)


def _check_source_path(inst: Km24Instance, steps: Sequence[Tuple[int, ...]]):
    source = inst.source
    if not steps:
        raise MalformedInputError("Source path is empty")
    if steps[0] != source.sigma_ini or steps[-1] != source.sigma_tar:
        raise MalformedInputError(
            "Source path does not connect the source endpoints"
        )
    for ix, step in enumerate(steps):
        if not source.instance.is_solution(step):
            raise MalformedInputError(f"Source step {ix} is not a solution")
        if ix and hamming(steps[ix - 1], step) > 1:
            raise MalformedInputError(
                f"Source steps {ix - 1} and {ix} differ in more than one bit"
            )


def completeness_path(
    inst: Km24Instance,
    source_path: Union[ReconfigPath, Sequence[Sequence[int]]],
) -> Tuple[LayeredAssignment, ...]:
    """
    Lift an exact source path to a path of the layered instance on which
    the layer selected by the indicator always accepts with probability 1.

    For each source step ``z -> z'`` and each layer ``L`` in turn: make
    proof layer ``L`` honest for the current inputs (the indicator points
    elsewhere), point the indicator at ``L``, then rewrite input layer
    ``L`` to the encoding of ``z'``. Finally refresh the stale proofs and
    point the indicator back at layer 0. Every step changes one column or
    the indicator.

    :raises MalformedInputError:
        If the source path is not an exact bit-adjacent path between the
        source endpoints.
    """
    steps = [tuple(s) for s in source_path]
    _check_source_path(inst, steps)
    builder = _PathBuilder(inst)
    for z, z_next in zip(steps, steps[1:]):
        if z == z_next:
            continue
        word = inst.code.encode(z_next)
        for layer in range(KM24_LAYERS):
            if builder.v != layer:
                builder.refresh_proof(layer)
            builder.set_v(layer)
            builder.write_x(layer, word)
    last_v = builder.v
    for layer in range(KM24_LAYERS):
        if layer != last_v:
            builder.refresh_proof(layer)
    builder.set_v(inst.psi_tar.v)
    builder.refresh_proof(last_v)
    result = tuple(builder.steps)
    if result[-1] != inst.psi_tar:
        raise AssertionError("completeness path misses the target")
    logger.info(
        f"Lifted a source path of {len(steps)} steps to {len(result)} steps"
    )
    return result


def completeness_csp_path(
    inst: Km24Instance,
    source_path: Union[ReconfigPath, Sequence[Sequence[int]]],
) -> ReconfigPath:
    return ReconfigPath(
        psi.to_csp() for psi in completeness_path(inst, source_path)
    )


def extract_assignment(
    inst: Km24Instance, psi: LayeredAssignment
) -> Optional[BitString]:
    """
    Recover a source assignment from a layered assignment: decode every
    input layer other than ``v`` and take the bitwise majority of the
    decodable ones. Returns ``None`` if ``v`` is not a layer, fewer than two
    layers decode, or the vote is tied.
    """
    if not 0 <= psi.v < KM24_LAYERS:
        return None
    n_blk = inst.n_blk
    votes = []
    for j in other_layers(psi.v):
        decoded = inst.code.decode_nearest(psi.row(j)[:n_blk])
        if decoded is AMBIGUOUS:
            continue
        votes.append(decoded.message)
    if len(votes) < 2:
        return None
    result = []
    for bits in zip(*votes):
        ones = sum(bits)
        if 2 * ones == len(votes):
            return None
        result.append(1 if 2 * ones > len(votes) else 0)
    return tuple(result)


def serialize_km24_system(inst: Km24Instance, source_ref: str) -> str:
    """
    Render the system header; the layered predicates are rebuilt from the
    referenced source file when the system is loaded.
    """
    system = inst.system
    return (
        f"psys {system.t} {system.x_cols} {system.proof_cols} {system.r} "
        f"{inst.repetitions} code={inst.code.family} {inst.code.msg_len} "
        f"source={source_ref}\n"
        f"delta {inst.delta}\n"
    )


def _read_km24(
    reader: RecordReader, base_dir: str, budgets: Optional[Budgets]
) -> Km24Instance:
    header = reader.next('psys', count=8)
    t = header.int_at(0, 't')
    x_cols = header.int_at(1, 'x_cols')
    proof_cols = header.int_at(2, 'proof_cols')
    r = header.int_at(3, 'r')
    k = header.int_at(4, 'k', lo=1)
    code_tag = header.fields[5]
    if not code_tag.startswith('code='):
        raise header.error("expected 'code=<family>'", field='code')
    k_code = header.int_at(6, 'k_code', lo=1)
    delta = DEFAULT_DELTA
    delta_rec = reader.next_if('delta')
    if delta_rec is not None:
        delta_rec.expect_len(1)
        try:
            delta = parse_fraction(delta_rec.fields[0])
        except MalformedInputError as e:
            raise delta_rec.error(e.failure_msg, field='delta')
    source_tag = header.fields[7]
    if not source_tag.startswith('source=') or source_tag == 'source=':
        raise header.error("expected 'source=<path>'", field='source')
    source_ref = source_tag[len('source=') :]
    source = parse_problem(read_text(os.path.join(base_dir, source_ref)))
    code = code_from_tag(code_tag[len('code=') :], k_code, budgets)
    inst = km24_build(source, code, k, delta, budgets)
    system = inst.system
    declared = (t, x_cols, proof_cols, r)
    actual = (system.t, system.x_cols, system.proof_cols, system.r)
    if declared != actual:
        raise header.error(
            f"declared dimensions {declared} differ from the rebuilt "
            f"system's {actual}"
        )
    return inst


def parse_system_file(
    text: str, base_dir: str = '.', budgets: Optional[Budgets] = None
) -> Union[ParallelPcppSystem, Km24Instance]:
    """
    Parse a system file: a micro system with explicit layer tables, or a
    four-layer system header referencing its source problem (paths are
    resolved against ``base_dir``).
    """
    reader = RecordReader(text)
    header = reader.peek()
    if header is not None and len(header.fields) == 5:
        result: Union[ParallelPcppSystem, Km24Instance] = read_micro_system(
            reader, budgets
        )
    else:
        result = _read_km24(reader, base_dir, budgets)
    reader.finish()
    return result


def load_system_file(
    path: str, budgets: Optional[Budgets] = None
) -> Union[ParallelPcppSystem, Km24Instance]:
    return parse_system_file(
        read_text(path), os.path.dirname(path) or '.', budgets
    )


def export_reduced(inst: Km24Instance, system_ref: str) -> str:
    """
    Reduced-instance export: the CSP header, a reference to the system
    file in place of constraint tables, and the endpoints.
    """
    csp = inst.csp
    ini = ' '.join(str(s) for s in inst.psi_ini.to_csp())
    tar = ' '.join(str(s) for s in inst.psi_tar.to_csp())
    return (
        f"csp {csp.num_vars} {csp.alphabet_size} {csp.num_constraints}\n"
        f"structured {system_ref}\n"
        f"ini {ini}\n"
        f"tar {tar}\n"
    )


def parse_reduced(
    text: str, base_dir: str = '.', budgets: Optional[Budgets] = None
) -> Tuple[Km24Instance, ReconfigProblem]:
    reader = RecordReader(text)
    header = reader.next('csp', count=3)
    num_vars = header.int_at(0, 'n', lo=1)
    alphabet = header.int_at(1, 'alphabet', lo=1)
    num_cons = header.int_at(2, 'm', lo=1)
    ref = reader.next('structured', count=1)
    system_text = read_text(os.path.join(base_dir, ref.fields[0]))
    system_dir = os.path.dirname(os.path.join(base_dir, ref.fields[0]))
    inst = parse_system_file(system_text, system_dir or '.', budgets)
    if not isinstance(inst, Km24Instance):
        raise ref.error("referenced system is not a four-layer system")
    csp = inst.csp
    if (csp.num_vars, csp.alphabet_size, csp.num_constraints) != (
        num_vars,
        alphabet,
        num_cons,
    ):
        raise header.error("header does not match the referenced system")
    ini, tar = read_endpoints(reader, csp)
    reader.finish()
    return inst, ReconfigProblem(csp, ini, tar)
