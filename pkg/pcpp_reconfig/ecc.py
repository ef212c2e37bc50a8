"""
Binary linear error-correcting codes, with exhaustive minimum-distance
computation and nearest-codeword decoding.

Codes are used to encode source assignments in the four-layer construction
of :mod:`pcpp_reconfig.parallel.km24`. All procedures enumerate the
``2^k`` messages, which is fine at the message lengths involved.
"""
import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, Optional, Sequence, Union

import numpy as np

from .bits import BitString, check_bits, pack_le
from .config import DEFAULT_BUDGETS, Budgets, check_budget
from .errors import MalformedInputError

__all__ = [
    'LinearCode',
    'Decoded',
    'DecodeFailure',
    'AMBIGUOUS',
    'hadamard_code',
    'min_distance',
    'code_from_tag',
    'family_relative_distance',
]

logger = logging.getLogger(__name__)


class DecodeFailure(enum.Enum):
    AMBIGUOUS = 'ambiguous'
    """
    The word lies outside the unique-decoding radius, or several codewords
    are equally close.
    """


AMBIGUOUS = DecodeFailure.AMBIGUOUS


@dataclass(frozen=True)
class Decoded:
    message: BitString
    distance: int


class LinearCode:
    """
    Binary linear code given by a ``k x n`` generator matrix over GF(2).
    Encoding maps the message ``m`` to ``m G mod 2``.

    :param generator:
        The generator matrix, entries in ``{0, 1}``.
    :param family:
        Family tag, as used in system files.
    :param budgets:
        Enumeration budgets; the ``2^k`` messages must fit.
    :raises MalformedInputError:
        If the generator is not injective.
    """

    def __init__(
        self,
        generator: np.ndarray,
        family: str = 'generic',
        budgets: Optional[Budgets] = None,
    ):
        gen = np.asarray(generator, dtype=np.uint8)
        if gen.ndim != 2 or gen.shape[0] < 1 or gen.shape[1] < 1:
            raise MalformedInputError("Generator must be a non-empty matrix")
        if np.any(gen > 1):
            raise MalformedInputError("Generator entries must be 0 or 1")
        self._generator = gen
        self._generator.setflags(write=False)
        self.family = family
        self._budgets = budgets or DEFAULT_BUDGETS
        self.distance = min_distance(self, self._budgets)
        if self.distance == 0:
            raise MalformedInputError(
                "Generator does not define an injective encoding"
            )

    @classmethod
    def from_generator(cls, rows: Sequence[Sequence[int]]) -> 'LinearCode':
        return cls(np.array(rows, dtype=np.uint8))

    @property
    def msg_len(self) -> int:
        return int(self._generator.shape[0])

    @property
    def block_len(self) -> int:
        return int(self._generator.shape[1])

    @property
    def relative_distance(self) -> Fraction:
        return Fraction(self.distance, self.block_len)

    @property
    def unique_radius(self) -> int:
        return (self.distance - 1) // 2

    @property
    def tag(self) -> str:
        return f"{self.family} {self.msg_len}"

    def supports_proximity(self, delta: Fraction) -> bool:
        """
        Whether ``delta`` is strictly below half of the relative distance,
        as required for unique decoding of delta-close words.
        """
        return 2 * delta < self.relative_distance

    @cached_property
    def codebook(self) -> np.ndarray:
        """
        All codewords; row ``j`` encodes the message whose little-endian
        integer value is ``j``.
        """
        k = self.msg_len
        check_budget('code messages', 1 << k, self._budgets.max_code_messages)
        ix = np.arange(1 << k, dtype=np.int64)
        messages = ((ix[:, None] >> np.arange(k)) & 1).astype(np.uint8)
        book = (messages.astype(np.int64) @ self._generator) % 2
        book = book.astype(np.uint8)
        book.setflags(write=False)
        return book

    @cached_property
    def _index(self) -> Dict[bytes, int]:
        return {row.tobytes(): j for j, row in enumerate(self.codebook)}

    def encode(self, msg: Sequence[int]) -> BitString:
        msg = check_bits(msg, self.msg_len, 'message')
        return tuple(int(b) for b in self.codebook[pack_le(msg)])

    def lookup(self, word: Sequence[int]) -> Optional[BitString]:
        """
        Message of an exact codeword, or ``None`` if ``word`` is not one.
        """
        word = check_bits(word, self.block_len, 'word')
        j = self._index.get(np.array(word, dtype=np.uint8).tobytes())
        if j is None:
            return None
        return tuple((j >> i) & 1 for i in range(self.msg_len))

    def decode_nearest(
        self, word: Sequence[int]
    ) -> Union[Decoded, DecodeFailure]:
        """
        Nearest-codeword decoding within the unique-decoding radius.
        """
        word = check_bits(word, self.block_len, 'word')
        dists = np.count_nonzero(
            self.codebook != np.array(word, dtype=np.uint8), axis=1
        )
        best = int(dists.min())
        winners = np.flatnonzero(dists == best)
        if best > self.unique_radius or len(winners) > 1:
            logger.debug(
                f"Word at distance {best} from {len(winners)} codeword(s) "
                f"of {self.tag}; radius is {self.unique_radius}"
            )
            return AMBIGUOUS
        j = int(winners[0])
        return Decoded(tuple((j >> i) & 1 for i in range(self.msg_len)), best)

    def __repr__(self):
        return (
            f"LinearCode({self.tag}, n={self.block_len}, d={self.distance})"
        )


def min_distance(code: LinearCode, budgets: Optional[Budgets] = None) -> int:
    """
    Exact minimum distance. For a linear code, this is the minimum weight
    of a nonzero codeword.
    """
    budgets = budgets or DEFAULT_BUDGETS
    check_budget('code messages', 1 << code.msg_len, budgets.max_code_messages)
    weights = np.count_nonzero(code.codebook[1:], axis=1)
    return int(weights.min())


def hadamard_code(k: int, budgets: Optional[Budgets] = None) -> LinearCode:
    """
    Hadamard code of message length ``k``: the codeword of ``m`` has, at
    column ``s``, the inner product of ``m`` with the little-endian bit
    vector of ``s``. Block length ``2^k``, distance ``2^(k-1)``.
    """
    budgets = budgets or DEFAULT_BUDGETS
    if k < 1:
        raise MalformedInputError("Hadamard codes need k >= 1")
    check_budget('Hadamard block length', 1 << k, budgets.max_table_entries)
    cols = np.arange(1 << k)
    generator = ((cols[None, :] >> np.arange(k)[:, None]) & 1).astype(np.uint8)
    return LinearCode(generator, family='hadamard', budgets=budgets)


_FAMILIES: Dict[str, Callable[..., LinearCode]] = {
    'hadamard': hadamard_code,
}

_FAMILY_RELATIVE_DISTANCE = {
    'hadamard': Fraction(1, 2),
}


def code_from_tag(
    family: str, k: int, budgets: Optional[Budgets] = None
) -> LinearCode:
    try:
        factory = _FAMILIES[family]
    except KeyError:
        raise MalformedInputError(f"Unknown code family '{family}'")
    return factory(k, budgets=budgets)


def family_relative_distance(family: str) -> Fraction:
    try:
        return _FAMILY_RELATIVE_DISTANCE[family]
    except KeyError:
        raise MalformedInputError(f"Unknown code family '{family}'")
