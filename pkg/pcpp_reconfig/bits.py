"""
Bit strings and bit-packed helpers.

Bit strings are tuples over ``{0, 1}``. Whenever a bit string is packed into
an integer, bit ``i`` of the string is bit ``i`` of the integer
(little-endian); the same convention indexes code columns, truth tables and
predicate tables.
"""
from typing import Sequence, Tuple

import numpy as np

from .errors import MalformedInputError

__all__ = [
    'BitString',
    'check_bits',
    'pack_le',
    'unpack_le',
    'hamming',
    'xor_bits',
    'popcount64',
]

BitString = Tuple[int, ...]

_M1 = np.uint64(0x5555555555555555)
_M2 = np.uint64(0x3333333333333333)
_M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
_H01 = np.uint64(0x0101010101010101)


def check_bits(bits: Sequence[int], length: int, name: str) -> BitString:
    """
    Validate and normalise a bit string of the given length.

    :raises MalformedInputError:
    """
    result = tuple(bits)
    if len(result) != length:
        raise MalformedInputError(
            f"{name} has length {len(result)}, expected {length}"
        )
    if any(b not in (0, 1) for b in result):
        raise MalformedInputError(f"{name} contains non-binary entries")
    return result


def pack_le(bits: Sequence[int]) -> int:
    value = 0
    for ix, bit in enumerate(bits):
        value |= bit << ix
    return value


def unpack_le(value: int, length: int) -> BitString:
    return tuple((value >> ix) & 1 for ix in range(length))


def hamming(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise MalformedInputError("Hamming distance of unequal lengths")
    return sum(1 for x, y in zip(a, b) if x != y)


def xor_bits(a: Sequence[int], b: Sequence[int]) -> BitString:
    if len(a) != len(b):
        raise MalformedInputError("XOR of unequal lengths")
    return tuple(x ^ y for x, y in zip(a, b))


def popcount64(arr: np.ndarray) -> np.ndarray:
    """
    Population count of every word of a ``uint64`` array (SWAR reduction).
    """
    arr = arr.astype(np.uint64, copy=True)
    arr -= (arr >> np.uint64(1)) & _M1
    arr = (arr & _M2) + ((arr >> np.uint64(2)) & _M2)
    arr = (arr + (arr >> np.uint64(4))) & _M4
    arr *= _H01
    arr >>= np.uint64(56)
    return arr
