"""
Exhaustive completeness and soundness audits of verifiers against circuits.

Words ``z = x o pi`` are packed into ``uint64`` integers, ``x`` in the low
``n`` bits and ``pi`` above it. The soundness kernel evaluates all
randomness strings on blocks of packed words at once, from precomputed
bit planes.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from ..bits import BitString, check_bits, pack_le, popcount64, unpack_le
from ..config import DEFAULT_BUDGETS, Budgets, check_budget
from ..errors import MalformedInputError, MissingHonestProofError
from .circuit import Circuit
from .verifier import ScalarPcpp

__all__ = [
    'SoundnessAudit',
    'far_mask',
    'is_delta_far',
    'find_accepting_proof',
    'audit_completeness',
    'run_soundness_audit',
    'audit_soundness',
]

logger = logging.getLogger(__name__)

# words per kernel block
BLOCK_SIZE = 1 << 18


def _is_far(dist: np.ndarray, n: int, delta: Fraction) -> np.ndarray:
    # dist / n >= delta, in integers
    return dist * delta.denominator >= delta.numerator * n


def far_mask(
    c: Circuit, delta: Fraction, budgets: Optional[Budgets] = None
) -> np.ndarray:
    """
    Boolean array over all inputs (little-endian index) marking those at
    relative distance at least ``delta`` from every solution of ``c``.
    """
    budgets = budgets or DEFAULT_BUDGETS
    n = c.input_len
    xs = np.arange(1 << n, dtype=np.uint64)
    sols = c.solution_ints(budgets)
    if sols.size == 0:
        return np.ones(1 << n, dtype=bool)
    check_budget(
        'input/solution distance pairs',
        (1 << n) * int(sols.size),
        budgets.max_triples,
    )
    best = np.full(1 << n, n + 1, dtype=np.int64)
    step = max(1, BLOCK_SIZE >> n)
    for start in range(0, sols.size, step):
        block = sols[start : start + step]
        dists = popcount64(xs[:, None] ^ block[None, :]).astype(np.int64)
        best = np.minimum(best, dists.min(axis=1))
    return _is_far(best, n, delta)


def is_delta_far(
    c: Circuit,
    x: BitString,
    delta: Fraction,
    budgets: Optional[Budgets] = None,
) -> bool:
    x = check_bits(x, c.input_len, 'x')
    sols = c.solution_ints(budgets)
    if sols.size == 0:
        return True
    dists = popcount64(sols ^ np.uint64(pack_le(x))).astype(np.int64)
    return bool(_is_far(dists.min(), c.input_len, delta))


def _bit_planes(v: ScalarPcpp, z: np.ndarray) -> dict:
    one = np.uint64(1)
    used = sorted({p for I in v.query_map for p in I})
    return {p: ((z >> np.uint64(p)) & one).astype(np.int64) for p in used}


def _count_accepts(v: ScalarPcpp, z: np.ndarray) -> np.ndarray:
    """
    Number of accepting randomness strings for every packed word in ``z``.
    """
    planes = _bit_planes(v, z)
    counts = np.zeros(z.shape, dtype=np.int64)
    for omega, I in enumerate(v.query_map):
        idx = np.zeros(z.shape, dtype=np.int64)
        for j, p in enumerate(I):
            idx |= planes[p] << j
        counts += v.predicates[omega][idx]
    return counts


def _check_packable(v: ScalarPcpp):
    if v.n + v.m > 64:
        raise MalformedInputError(
            f"Input and proof ({v.n + v.m} bits) do not fit a 64-bit word"
        )


def find_accepting_proof(
    v: ScalarPcpp, x: BitString, budgets: Optional[Budgets] = None
) -> Optional[BitString]:
    """
    Exhaustive search for a proof the verifier accepts with probability 1
    on ``x``. Proofs are tried in increasing little-endian order.
    """
    budgets = budgets or DEFAULT_BUDGETS
    x = check_bits(x, v.n, 'x')
    check_budget(
        '(pi, omega) pairs',
        (1 << v.m) * v.randomness_count,
        budgets.max_triples,
    )
    _check_packable(v)
    x_word = np.uint64(pack_le(x))
    for start in range(0, 1 << v.m, BLOCK_SIZE):
        stop = min(1 << v.m, start + BLOCK_SIZE)
        pis = np.arange(start, stop, dtype=np.uint64)
        z = x_word | (pis << np.uint64(v.n))
        full = np.flatnonzero(_count_accepts(v, z) == v.randomness_count)
        if full.size:
            return unpack_le(start + int(full[0]), v.m)
    return None


def audit_completeness(
    v: ScalarPcpp,
    c: Circuit,
    budgets: Optional[Budgets] = None,
    *,
    search_proofs: bool = False,
) -> bool:
    """
    Check that every solution of ``c`` has a proof accepted with
    probability 1.

    :param search_proofs:
        When the verifier carries no honest proof generator, search for
        accepting proofs exhaustively instead of failing.
    :raises MissingHonestProofError:
        If there is no honest proof generator and searching is disabled.
    """
    budgets = budgets or DEFAULT_BUDGETS
    if v.n != c.input_len:
        raise MalformedInputError(
            f"Verifier input length {v.n} differs from circuit input "
            f"length {c.input_len}"
        )
    if v.honest_proof is None and not search_proofs:
        raise MissingHonestProofError(
            "Verifier has no honest proof generator; enable proof search "
            "to audit completeness exhaustively."
        )
    solutions = c.solutions(budgets)
    logger.info(f"Auditing completeness of {v} on {len(solutions)} solutions")
    for x in solutions:
        if v.honest_proof is not None:
            pi = v.honest_proof(x)
            ok = v.accept_count(x, pi) == v.randomness_count
        else:
            ok = find_accepting_proof(v, x, budgets) is not None
        if not ok:
            logger.info(f"Completeness fails on solution {x}")
            return False
    return True


@dataclass(frozen=True)
class SoundnessAudit:
    """
    Result of an exhaustive soundness audit.
    """

    measured: Fraction
    """
    Maximal acceptance probability over far inputs and all proofs;
    ``0`` when no input is far.
    """

    delta: Fraction

    far_inputs: int
    """
    Number of inputs at relative distance at least ``delta`` from every
    solution.
    """

    evaluations: int
    """
    Number of ``(x, pi, omega)`` triples evaluated.
    """

    witness_x: Optional[BitString] = None
    witness_pi: Optional[BitString] = None

    def within(self, kappa: Fraction) -> bool:
        return self.measured <= kappa


def run_soundness_audit(
    v: ScalarPcpp,
    c: Circuit,
    delta: Fraction,
    budgets: Optional[Budgets] = None,
) -> SoundnessAudit:
    budgets = budgets or DEFAULT_BUDGETS
    if v.n != c.input_len:
        raise MalformedInputError(
            f"Verifier input length {v.n} differs from circuit input "
            f"length {c.input_len}"
        )
    total = (1 << v.n) * (1 << v.m) * v.randomness_count
    check_budget('(x, pi, omega) triples', total, budgets.max_triples)
    _check_packable(v)

    far_xs = np.flatnonzero(far_mask(c, delta, budgets)).astype(np.uint64)
    if far_xs.size == 0:
        logger.info(f"No input is {delta}-far; measured soundness is 0")
        return SoundnessAudit(Fraction(0), delta, 0, 0)

    logger.info(
        f"Auditing soundness of {v}: {far_xs.size} far inputs, "
        f"{1 << v.m} proofs, {v.randomness_count} randomness strings"
    )
    best, best_x, best_pi = -1, 0, 0
    evaluations = 0
    pi_step = max(1, BLOCK_SIZE // int(far_xs.size))
    shift = np.uint64(v.n)
    for start in range(0, 1 << v.m, pi_step):
        stop = min(1 << v.m, start + pi_step)
        pis = np.arange(start, stop, dtype=np.uint64)
        z = (far_xs[None, :] | (pis[:, None] << shift)).ravel()
        counts = _count_accepts(v, z)
        evaluations += int(z.size) * v.randomness_count
        ix = int(np.argmax(counts))
        if counts[ix] > best:
            best = int(counts[ix])
            word = int(z[ix])
            best_x, best_pi = word & ((1 << v.n) - 1), word >> v.n
        if best == v.randomness_count:
            break
    result = SoundnessAudit(
        measured=Fraction(best, v.randomness_count),
        delta=delta,
        far_inputs=int(far_xs.size),
        evaluations=evaluations,
        witness_x=unpack_le(best_x, v.n),
        witness_pi=unpack_le(best_pi, v.m),
    )
    logger.info(f"Measured soundness {result.measured} at delta={delta}")
    if v.declared_kappa is not None and not result.within(v.declared_kappa):
        logger.warning(
            f"Measured soundness {result.measured} exceeds declared "
            f"kappa {v.declared_kappa}"
        )
    return result


def audit_soundness(
    v: ScalarPcpp,
    c: Circuit,
    delta: Fraction,
    budgets: Optional[Budgets] = None,
) -> Fraction:
    """
    Maximal acceptance probability over ``delta``-far inputs and all
    proofs.
    """
    return run_soundness_audit(v, c, delta, budgets).measured
