from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcpp_reconfig.bits import hamming
from pcpp_reconfig.config import Budgets
from pcpp_reconfig.ecc import (
    AMBIGUOUS,
    Decoded,
    LinearCode,
    code_from_tag,
    family_relative_distance,
    hadamard_code,
    min_distance,
)
from pcpp_reconfig.errors import BudgetExceededError, MalformedInputError

from .common import flip


@pytest.mark.parametrize(
    'msg,word',
    [((0, 0), (0, 0, 0, 0)), ((1, 0), (0, 1, 0, 1)), ((0, 1), (0, 0, 1, 1))],
)
def test_hadamard_k2(msg, word):
    assert hadamard_code(2).encode(msg) == word


def test_hadamard_parity():
    code = hadamard_code(3)
    word = code.encode((1, 1, 1))
    assert word == tuple(bin(s).count('1') % 2 for s in range(8))


@pytest.mark.parametrize('k', [1, 2, 3, 4])
def test_hadamard_distance(k):
    code = hadamard_code(k)
    assert code.block_len == 1 << k
    assert code.distance == 1 << (k - 1)
    assert min_distance(code) == code.distance
    assert code.relative_distance == Fraction(1, 2)


def test_pairwise_distance_k2():
    code = hadamard_code(2)
    words = [code.encode((a, b)) for a in (0, 1) for b in (0, 1)]
    assert min(
        hamming(u, w) for ix, u in enumerate(words) for w in words[ix + 1 :]
    ) == 2


def test_k1_code():
    code = LinearCode.from_generator([[1, 1, 0]])
    assert code.distance == 2
    assert code.unique_radius == 0


def test_decode_exact():
    code = hadamard_code(2)
    assert code.decode_nearest(code.encode((1, 0))) == Decoded((1, 0), 0)
    assert code.lookup(code.encode((1, 0))) == (1, 0)


@pytest.mark.parametrize('pos', range(4))
def test_decode_k2_single_flip_ambiguous(pos):
    code = hadamard_code(2)
    assert code.unique_radius == 0
    noisy = flip(code.encode((1, 0)), pos)
    assert code.decode_nearest(noisy) is AMBIGUOUS
    assert code.lookup(noisy) is None


@given(
    st.tuples(*[st.integers(0, 1)] * 3),
    st.integers(0, 7),
)
@settings(max_examples=50, deadline=None)
def test_decode_k3_within_radius(msg, pos):
    code = hadamard_code(3)
    assert code.decode_nearest(flip(code.encode(msg), pos)) == Decoded(msg, 1)


def test_decode_k3_outside_radius():
    code = hadamard_code(3)
    noisy = flip(code.encode((1, 0, 1)), 0, 1)
    assert code.decode_nearest(noisy) is AMBIGUOUS


def test_decode_length_mismatch():
    with pytest.raises(MalformedInputError):
        hadamard_code(2).decode_nearest((0, 1, 0))
    with pytest.raises(MalformedInputError):
        hadamard_code(2).encode((0, 1, 0))


def test_proximity_support():
    code = hadamard_code(3)
    assert code.supports_proximity(Fraction(1, 5))
    assert not code.supports_proximity(Fraction(1, 4))


def test_non_injective_generator():
    with pytest.raises(MalformedInputError, match='injective'):
        LinearCode.from_generator([[1, 1], [1, 1]])


def test_code_tags():
    code = code_from_tag('hadamard', 3)
    assert code.tag == 'hadamard 3'
    assert family_relative_distance('hadamard') == Fraction(1, 2)
    with pytest.raises(MalformedInputError):
        code_from_tag('reed-solomon', 3)
    with pytest.raises(MalformedInputError):
        family_relative_distance('reed-solomon')


def test_code_budget():
    with pytest.raises(BudgetExceededError):
        hadamard_code(5, Budgets(max_code_messages=16))
    with pytest.raises(MalformedInputError):
        hadamard_code(0)
