from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

from .errors import MalformedInputError, ParseError

__all__ = [
    'Record',
    'RecordReader',
    'parse_fraction',
    'read_text',
    'mixed_radix_weights',
    'iter_mixed_radix',
]


def parse_fraction(text: str) -> Fraction:
    """
    Parse ``p/q`` or an integer into an exact fraction.
    Decimal notation is refused, since it invites rounding.
    """
    try:
        num, sep, den = text.partition('/')
        result = Fraction(int(num), int(den) if sep else 1)
    except (ValueError, ZeroDivisionError):
        raise MalformedInputError(f"'{text}' is not a fraction p/q")
    return result


def read_text(path: str) -> str:
    """
    Read an input file as UTF-8 text.
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise MalformedInputError(
            f"'{path}' is not UTF-8 text: byte {e.start} is invalid"
        )


@dataclass(frozen=True)
class Record:
    """
    One significant line of a line-oriented text file.
    """

    line_no: int
    keyword: str
    fields: Tuple[str, ...]

    def error(self, msg: str, field: Optional[str] = None) -> ParseError:
        return ParseError.format(msg, line_no=self.line_no, field=field)

    def expect_len(self, count: int):
        if len(self.fields) != count:
            raise self.error(
                f"'{self.keyword}' takes {count} fields, "
                f"got {len(self.fields)}"
            )

    def int_at(
        self,
        ix: int,
        name: str,
        lo: Optional[int] = None,
        hi: Optional[int] = None,
    ) -> int:
        """
        Read field ``ix`` as a decimal integer in ``[lo, hi)``.
        """
        try:
            token = self.fields[ix]
        except IndexError:
            raise self.error("missing value", field=name)
        if not (token.isascii() and token.isdigit()):
            raise self.error(f"'{token}' is not a decimal integer", field=name)
        value = int(token)
        if lo is not None and value < lo:
            raise self.error(f"{value} is below {lo}", field=name)
        if hi is not None and value >= hi:
            raise self.error(f"{value} is out of range [0, {hi})", field=name)
        return value

    def ints_from(
        self, start: int, name: str, lo=None, hi=None
    ) -> Tuple[int, ...]:
        return tuple(
            self.int_at(ix, f"{name}[{ix - start}]", lo, hi)
            for ix in range(start, len(self.fields))
        )

    def bits_at(self, ix: int, name: str, length: int) -> Tuple[int, ...]:
        try:
            token = self.fields[ix]
        except IndexError:
            raise self.error("missing value", field=name)
        if len(token) != length or any(c not in '01' for c in token):
            raise self.error(
                f"expected a 0/1 string of length {length}", field=name
            )
        return tuple(int(c) for c in token)


class RecordReader:
    """
    Strict reader for the whitespace-separated formats used throughout the
    package. Blank lines and lines starting with ``#`` are skipped.
    """

    def __init__(self, text: str):
        records: List[Record] = []
        for line_no, line in enumerate(text.splitlines(), start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith('#'):
                continue
            keyword, *fields = stripped.split()
            records.append(Record(line_no, keyword, tuple(fields)))
        self._records = records
        self._pos = 0

    def peek(self) -> Optional[Record]:
        if self._pos < len(self._records):
            return self._records[self._pos]
        return None

    def at_end(self) -> bool:
        return self._pos >= len(self._records)

    def next(self, keyword: str, count: Optional[int] = None) -> Record:
        rec = self.peek()
        if rec is None:
            last = self._records[-1].line_no if self._records else 0
            raise ParseError.format(
                f"unexpected end of input, expected '{keyword}'",
                line_no=last + 1,
            )
        if rec.keyword != keyword:
            raise rec.error(f"expected '{keyword}', got '{rec.keyword}'")
        if count is not None:
            rec.expect_len(count)
        self._pos += 1
        return rec

    def next_if(self, keyword: str) -> Optional[Record]:
        rec = self.peek()
        if rec is not None and rec.keyword == keyword:
            self._pos += 1
            return rec
        return None

    def finish(self):
        rec = self.peek()
        if rec is not None:
            raise rec.error(f"unexpected trailing record '{rec.keyword}'")

    def __iter__(self) -> Iterator[Record]:
        while not self.at_end():
            rec = self._records[self._pos]
            self._pos += 1
            yield rec


def mixed_radix_weights(radices: Sequence[int]) -> Tuple[int, ...]:
    """
    Positional weights for a mixed-radix encoding whose first digit is the
    most significant, so that integer order is lexicographic order.
    """
    weights = []
    acc = 1
    for radix in reversed(radices):
        weights.append(acc)
        acc *= radix
    return tuple(reversed(weights))


def iter_mixed_radix(radices: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """
    Yield all digit tuples in lexicographic order.
    """
    digits = [0] * len(radices)
    total = 1
    for radix in radices:
        total *= radix
    for _ in range(total):
        yield tuple(digits)
        for pos in range(len(digits) - 1, -1, -1):
            digits[pos] += 1
            if digits[pos] < radices[pos]:
                break
            digits[pos] = 0
