"""
Configuration values shared by the library and the command-line harness.
"""
import hashlib
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import BudgetExceededError, MalformedInputError

__all__ = [
    'Budgets',
    'CodeSpec',
    'ExperimentConfig',
    'DEFAULT_BUDGETS',
    'DEFAULT_DELTA',
    'DEFAULT_CODE',
    'check_budget',
    'config_hash',
    'derive_rng',
]

logger = logging.getLogger(__name__)


DEFAULT_DELTA = Fraction(1, 5)
"""
Default proximity parameter.

Unique decoding of close words needs the proximity parameter to be strictly
smaller than half of the code's relative distance. Hadamard codes have
relative distance 1/2, so 1/4 is excluded and 1/5 is used instead.
"""


@dataclass(frozen=True)
class Budgets:
    """
    Enumeration limits. Every exhaustive procedure checks its exact work size
    against one of these before starting, and raises
    :class:`~pcpp_reconfig.errors.BudgetExceededError` when it does not fit.
    """

    max_states: int = 1 << 20
    """
    Maximal number of assignments in a configuration graph.
    """

    max_triples: int = 1 << 26
    """
    Maximal number of ``(x, pi, omega)`` triples in a soundness audit.
    """

    max_oracle_states: int = 100_000
    """
    Maximal number of assignments handed to the brute-force oracle.
    """

    max_code_messages: int = 1 << 16
    """
    Maximal number of messages enumerated when decoding or measuring
    the distance of a code.
    """

    max_table_entries: int = 1 << 22
    """
    Maximal size of a materialised truth table (circuit or predicate).
    """

    def __post_init__(self):
        for name in (
            'max_states',
            'max_triples',
            'max_oracle_states',
            'max_code_messages',
            'max_table_entries',
        ):
            if getattr(self, name) <= 0:
                raise MalformedInputError(f"Budget {name} must be positive")


DEFAULT_BUDGETS = Budgets()


def check_budget(what: str, size: int, limit: int):
    """
    Fail loudly if ``size`` exceeds ``limit``.

    :param what:
        Human-readable description of the enumerated objects.
    :param size:
        Exact number of items that would be enumerated.
    :param limit:
        The configured budget.
    :raises BudgetExceededError:
    """
    if size > limit:
        logger.debug(f"Budget check failed for {what}: {size} > {limit}")
        raise BudgetExceededError.format(what=what, size=size, limit=limit)


@dataclass(frozen=True)
class CodeSpec:
    """
    Identifies an error-correcting code by family tag and message length,
    as written in system files (e.g. ``hadamard 3``).
    """

    family: str = 'hadamard'

    msg_len: Optional[int] = None
    """
    Message length. ``None`` means "derive from the source instance".
    """

    def __str__(self):
        k = '-' if self.msg_len is None else str(self.msg_len)
        return f"{self.family} {k}"


DEFAULT_CODE = CodeSpec()


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Parameters of one harness run. Everything a command does is a function
    of the inputs and this object.
    """

    seed: int = 0
    """
    Root seed; all randomness is derived from it through :func:`derive_rng`.
    """

    delta: Fraction = DEFAULT_DELTA
    """
    Proximity parameter.
    """

    repetitions: int = 1
    """
    Number of column samples taken by proximity verifiers.
    """

    budgets: Budgets = field(default_factory=Budgets)

    code: CodeSpec = DEFAULT_CODE

    output: Optional[str] = None
    """
    Output directory or file, depending on the command.
    """

    def __post_init__(self):
        from .ecc import family_relative_distance

        if not 0 <= self.seed < 1 << 64:
            raise MalformedInputError("Seed must be a 64-bit unsigned integer")
        if not (0 < self.delta <= Fraction(1, 2)):
            raise MalformedInputError(
                f"Proximity parameter {self.delta} is not in (0, 1/2]"
            )
        if self.repetitions < 1:
            raise MalformedInputError("Repetition count must be at least 1")
        rel_dist = family_relative_distance(self.code.family)
        if not 2 * self.delta < rel_dist:
            raise MalformedInputError(
                f"Proximity parameter {self.delta} must be strictly below "
                f"half of the relative distance {rel_dist} of "
                f"'{self.code.family}' codes"
            )

    def canonical_lines(self):
        b = self.budgets
        return [
            f"seed={self.seed}",
            f"delta={self.delta}",
            f"repetitions={self.repetitions}",
            f"budget.states={b.max_states}",
            f"budget.triples={b.max_triples}",
            f"budget.oracle_states={b.max_oracle_states}",
            f"budget.code_messages={b.max_code_messages}",
            f"budget.table_entries={b.max_table_entries}",
            f"code={self.code}",
        ]


def config_hash(config: ExperimentConfig) -> str:
    """
    Stable digest of a configuration, embedded in every report row.
    The output location does not contribute.
    """
    data = '\n'.join(config.canonical_lines()).encode('utf-8')
    return hashlib.sha256(data).hexdigest()[:16]


def derive_rng(seed: int, name: str) -> np.random.Generator:
    """
    Derive an independent generator for the named stream from the root seed.

    :param seed:
        The root seed.
    :param name:
        Stream name; distinct names give statistically independent streams,
        identical names give identical streams.
    """
    name_key = int.from_bytes(
        hashlib.sha256(name.encode('utf-8')).digest()[:8], 'little'
    )
    seq = np.random.SeedSequence(entropy=seed, spawn_key=(name_key,))
    return np.random.default_rng(seq)
