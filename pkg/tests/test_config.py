from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pcpp_reconfig.bits import (
    check_bits,
    hamming,
    pack_le,
    popcount64,
    unpack_le,
    xor_bits,
)
from pcpp_reconfig.config import (
    DEFAULT_DELTA,
    Budgets,
    CodeSpec,
    ExperimentConfig,
    check_budget,
    config_hash,
    derive_rng,
)
from pcpp_reconfig.errors import (
    BudgetExceededError,
    MalformedInputError,
    ParseError,
)
from pcpp_reconfig.util import (
    RecordReader,
    iter_mixed_radix,
    mixed_radix_weights,
    parse_fraction,
    read_text,
)


def test_default_config():
    config = ExperimentConfig()
    assert config.delta == DEFAULT_DELTA == Fraction(1, 5)
    assert str(config.code) == 'hadamard -'
    assert str(CodeSpec('hadamard', 3)) == 'hadamard 3'


@pytest.mark.parametrize(
    'kwargs',
    [
        {'seed': -1},
        {'seed': 1 << 64},
        {'delta': Fraction(0)},
        {'delta': Fraction(3, 5)},
        {'delta': Fraction(1, 4)},
        {'repetitions': 0},
        {'code': CodeSpec('reed-solomon')},
    ],
)
def test_invalid_config(kwargs):
    with pytest.raises(MalformedInputError):
        ExperimentConfig(**kwargs)


def test_invalid_budget():
    with pytest.raises(MalformedInputError, match='max_triples'):
        Budgets(max_triples=0)


def test_check_budget():
    check_budget('things', 10, 10)
    with pytest.raises(BudgetExceededError) as exc_info:
        check_budget('things', 11, 10)
    err = exc_info.value
    assert (err.what, err.size, err.limit) == ('things', 11, 10)
    assert 'things requires 11 items' in err.failure_msg


def test_config_hash():
    base = ExperimentConfig(seed=3)
    assert config_hash(base) == config_hash(ExperimentConfig(seed=3))
    assert config_hash(base) == config_hash(
        ExperimentConfig(seed=3, output='/tmp/out')
    )
    assert config_hash(base) != config_hash(ExperimentConfig(seed=4))
    assert config_hash(base) != config_hash(
        ExperimentConfig(seed=3, budgets=Budgets(max_states=5))
    )
    assert len(config_hash(base)) == 16


def test_derive_rng():
    first = derive_rng(7, 'stream').integers(1 << 30, size=8)
    again = derive_rng(7, 'stream').integers(1 << 30, size=8)
    other = derive_rng(7, 'other').integers(1 << 30, size=8)
    reseeded = derive_rng(8, 'stream').integers(1 << 30, size=8)
    assert (first == again).all()
    assert not (first == other).all()
    assert not (first == reseeded).all()


@pytest.mark.parametrize(
    'text,expected',
    [('1/4', Fraction(1, 4)), ('2/8', Fraction(1, 4)), ('1', Fraction(1))],
)
def test_parse_fraction(text, expected):
    assert parse_fraction(text) == expected


@pytest.mark.parametrize('text', ['0.25', '1/0', 'a/b', ''])
def test_parse_fraction_invalid(text):
    with pytest.raises(MalformedInputError):
        parse_fraction(text)


def test_record_reader():
    reader = RecordReader('# header\n\nfoo 1 2\n  bar 0110\n')
    rec = reader.next('foo', count=2)
    assert rec.line_no == 3
    assert rec.ints_from(0, 'x', hi=3) == (1, 2)
    assert reader.next_if('foo') is None
    bar = reader.next('bar')
    assert bar.bits_at(0, 'bits', 4) == (0, 1, 1, 0)
    assert reader.at_end()
    reader.finish()


def test_record_reader_errors():
    reader = RecordReader('foo 1 x\n')
    rec = reader.peek()
    with pytest.raises(ParseError, match="line 1, field 'b'"):
        rec.int_at(1, 'b')
    with pytest.raises(ParseError, match='out of range'):
        rec.int_at(0, 'a', hi=1)
    with pytest.raises(ParseError, match="expected 'bar'"):
        reader.next('bar')
    with pytest.raises(ParseError, match='takes 3 fields'):
        reader.next('foo', count=3)
    with pytest.raises(ParseError, match='trailing'):
        reader.finish()
    reader.next('foo')
    with pytest.raises(ParseError) as exc_info:
        reader.next('foo')
    assert exc_info.value.line_no == 2


def test_mixed_radix():
    assert mixed_radix_weights((2, 3, 4)) == (12, 4, 1)
    digits = list(iter_mixed_radix((2, 3)))
    assert digits == [(0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2)]
    weights = mixed_radix_weights((2, 3))
    assert [sum(d * w for d, w in zip(t, weights)) for t in digits] == list(
        range(6)
    )
    assert list(iter_mixed_radix(())) == [()]


def test_bit_helpers():
    assert pack_le((1, 0, 1, 1)) == 13
    assert unpack_le(13, 4) == (1, 0, 1, 1)
    assert hamming((1, 0, 1), (0, 0, 1)) == 1
    assert xor_bits((1, 0, 1), (1, 1, 0)) == (0, 1, 1)
    with pytest.raises(MalformedInputError):
        hamming((1,), (1, 0))
    with pytest.raises(MalformedInputError):
        check_bits((0, 2), 2, 'word')
    with pytest.raises(MalformedInputError):
        check_bits((0, 1), 3, 'word')


@given(st.lists(st.integers(0, (1 << 64) - 1), min_size=1, max_size=20))
def test_popcount64(words):
    counts = popcount64(np.array(words, dtype=np.uint64))
    assert [int(c) for c in counts] == [bin(w).count('1') for w in words]


@pytest.mark.parametrize('token', ['²', '٣', '１'])
def test_record_rejects_non_ascii_digits(token):
    rec = RecordReader(f'csp {token}\n').next('csp')
    with pytest.raises(ParseError, match='not a decimal integer'):
        rec.int_at(0, 'n')


def test_read_text(tmp_path):
    good = tmp_path / 'good.txt'
    good.write_text('csp 1 2 0\n', encoding='utf-8')
    assert read_text(str(good)) == 'csp 1 2 0\n'
    bad = tmp_path / 'bad.txt'
    bad.write_bytes(b'csp\n\xff\n')
    with pytest.raises(MalformedInputError, match='byte 4 is invalid'):
        read_text(str(bad))
