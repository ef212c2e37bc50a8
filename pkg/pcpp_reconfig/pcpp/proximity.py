"""
A concrete proximity verifier for small circuits.

The proof is a claimed solution ``w`` of the circuit. The verifier reads
all of ``w``, samples ``k`` input columns uniformly and independently, and
accepts iff ``w`` satisfies the circuit and agrees with ``x`` on every
sampled column. Its query count grows with ``n``.
"""
import logging
import math
from fractions import Fraction
from typing import Optional

import numpy as np

from ..bits import BitString, check_bits
from ..config import DEFAULT_BUDGETS, DEFAULT_DELTA, Budgets, check_budget
from ..errors import MalformedInputError
from .circuit import Circuit
from .verifier import ScalarPcpp

__all__ = ['build_proximity_pcpp', 'proximity_soundness_bound']

logger = logging.getLogger(__name__)


def proximity_soundness_bound(n: int, k: int, delta: Fraction) -> Fraction:
    """
    Acceptance bound ``(1 - ceil(delta n)/n)^k`` on ``delta``-far inputs.
    """
    return (1 - Fraction(math.ceil(delta * n), n)) ** k


def build_proximity_pcpp(
    c: Circuit,
    k: int,
    delta: Fraction = DEFAULT_DELTA,
    budgets: Optional[Budgets] = None,
) -> ScalarPcpp:
    """
    Build the column-sampling proximity verifier for ``c``.

    Randomness string ``omega`` selects the columns
    ``c_l = (omega >> (l log2 n)) mod n`` for ``l < k``; the query tuple is
    the ``n`` proof positions followed by ``c_1, ..., c_k``.

    :param c:
        The circuit; its input length must be a power of two.
    :param k:
        Number of sampled columns.
    :param delta:
        Proximity parameter the declared soundness refers to.
    """
    budgets = budgets or DEFAULT_BUDGETS
    n = c.input_len
    if n & (n - 1):
        raise MalformedInputError(
            f"Column sampling needs a power-of-two input length, got {n}"
        )
    if k < 1:
        raise MalformedInputError("At least one column must be sampled")
    log_n = n.bit_length() - 1
    r = k * log_n
    q = n + k
    check_budget(
        'verifier predicate entries',
        (1 << r) * (1 << q),
        budgets.max_table_entries,
    )
    tt = c.truth_table(budgets)

    proof_positions = tuple(range(n, 2 * n))
    b = np.arange(1 << q, dtype=np.int64)
    w = b & ((1 << n) - 1)
    circuit_ok = tt[w]
    queries = []
    tables = np.empty((1 << r, 1 << q), dtype=bool)
    for omega in range(1 << r):
        cols = tuple((omega >> (l * log_n)) & (n - 1) for l in range(k))
        queries.append(proof_positions + cols)
        ok = circuit_ok.copy()
        for l, col in enumerate(cols):
            ok &= ((b >> (n + l)) & 1) == ((w >> col) & 1)
        tables[omega] = ok

    kappa = proximity_soundness_bound(n, k, delta)
    logger.info(
        f"Built proximity verifier for {c}: m={n}, r={r}, q={q}, "
        f"declared kappa {kappa} at delta={delta}"
    )

    def _honest(x: BitString) -> BitString:
        return check_bits(x, n, 'x')

    return ScalarPcpp(
        n,
        n,
        r,
        q,
        queries,
        tables,
        honest_proof=_honest,
        declared_delta=delta,
        declared_kappa=kappa,
        allow_repeats=True,
        budgets=budgets,
    )
