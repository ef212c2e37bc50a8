"""
Constraint satisfaction instances over finite alphabets, their assignments
and the exact fractional value function.
"""
import abc
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    Callable,
    FrozenSet,
    Iterable,
    Iterator,
    Optional,
    Sequence,
    Tuple,
)

from .config import DEFAULT_BUDGETS, Budgets, check_budget
from .errors import MalformedInputError, UnsupportedFormError
from .util import RecordReader, iter_mixed_radix

__all__ = [
    'Assignment',
    'Predicate',
    'TablePredicate',
    'StructuredPredicate',
    'Constraint',
    'CspInstance',
    'serialize_instance',
    'parse_instance',
    'read_instance',
]

Assignment = Tuple[int, ...]


class Predicate(abc.ABC):
    """
    A total deterministic function ``Sigma^arity -> {0, 1}``.
    """

    arity: int

    @abc.abstractmethod
    def accepts(self, symbols: Tuple[int, ...]) -> bool:
        raise NotImplementedError

    @property
    def is_table(self) -> bool:
        return False


@dataclass(frozen=True)
class TablePredicate(Predicate):
    """
    Predicate given by the explicit set of accepted tuples.
    """

    arity: int
    accepted: FrozenSet[Tuple[int, ...]]

    def __post_init__(self):
        for tup in self.accepted:
            if len(tup) != self.arity:
                raise MalformedInputError(
                    f"Accepted tuple {tup} does not have arity {self.arity}"
                )

    def accepts(self, symbols: Tuple[int, ...]) -> bool:
        return symbols in self.accepted

    @property
    def is_table(self) -> bool:
        return True

    @classmethod
    def from_function(
        cls,
        arity: int,
        alphabet_size: int,
        fn: Callable[[Tuple[int, ...]], bool],
    ) -> 'TablePredicate':
        """
        Tabulate a predicate given as a Python function.
        """
        accepted = frozenset(
            tup
            for tup in iter_mixed_radix((alphabet_size,) * arity)
            if fn(tup)
        )
        return cls(arity, accepted)


class StructuredPredicate(Predicate):
    """
    Predicate delegating to an evaluator, for arities where a table of
    accepted tuples would be infeasible.

    :param arity:
        Number of symbols the evaluator takes.
    :param evaluator:
        Pure function of the symbol tuple.
    :param description:
        Short human-readable description, used in diagnostics.
    """

    def __init__(
        self,
        arity: int,
        evaluator: Callable[[Tuple[int, ...]], bool],
        description: str = 'structured',
    ):
        self.arity = arity
        self._evaluator = evaluator
        self.description = description

    def accepts(self, symbols: Tuple[int, ...]) -> bool:
        return bool(self._evaluator(symbols))

    def __repr__(self):
        return f"StructuredPredicate(arity={self.arity}, {self.description})"


@dataclass(frozen=True)
class Constraint:
    var_indices: Tuple[int, ...]
    """
    The hyperedge: pairwise distinct variable indices.
    """

    predicate: Predicate

    def __post_init__(self):
        if len(self.var_indices) != self.predicate.arity:
            raise MalformedInputError(
                f"Constraint on {len(self.var_indices)} variables has a "
                f"predicate of arity {self.predicate.arity}"
            )
        if len(set(self.var_indices)) != len(self.var_indices):
            raise MalformedInputError(
                f"Constraint variables {self.var_indices} are not distinct"
            )

    @property
    def arity(self) -> int:
        return len(self.var_indices)

    @classmethod
    def table(
        cls, var_indices: Sequence[int], accepted: Iterable[Sequence[int]]
    ) -> 'Constraint':
        var_indices = tuple(var_indices)
        return cls(
            var_indices,
            TablePredicate(
                len(var_indices), frozenset(tuple(t) for t in accepted)
            ),
        )

    def restrict(self, a: Assignment) -> Tuple[int, ...]:
        return tuple(a[ix] for ix in self.var_indices)

    def holds(self, a: Assignment) -> bool:
        return self.predicate.accepts(self.restrict(a))


@dataclass(frozen=True)
class CspInstance:
    """
    A q-CSP instance: variables ``0..num_vars-1`` over the alphabet
    ``0..alphabet_size-1`` and an ordered multiset of constraints.
    """

    num_vars: int
    alphabet_size: int
    constraints: Tuple[Constraint, ...]

    def __post_init__(self):
        if self.num_vars < 1:
            raise MalformedInputError("An instance needs at least 1 variable")
        if self.alphabet_size < 1:
            raise MalformedInputError("The alphabet must be non-empty")
        if not self.constraints:
            raise MalformedInputError("The constraint list must be non-empty")
        for ix, con in enumerate(self.constraints):
            for var in con.var_indices:
                if not 0 <= var < self.num_vars:
                    raise MalformedInputError(
                        f"Constraint {ix} refers to variable {var}, "
                        f"not in [0, {self.num_vars})"
                    )
            pred = con.predicate
            if isinstance(pred, TablePredicate):
                for tup in pred.accepted:
                    if any(not 0 <= s < self.alphabet_size for s in tup):
                        raise MalformedInputError(
                            f"Constraint {ix} accepts {tup}, which leaves "
                            f"the alphabet of size {self.alphabet_size}"
                        )

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    @property
    def state_count(self) -> int:
        return self.alphabet_size**self.num_vars

    @property
    def max_arity(self) -> int:
        return max(con.arity for con in self.constraints)

    @property
    def is_table_form(self) -> bool:
        return all(con.predicate.is_table for con in self.constraints)

    def check_assignment(self, a: Sequence[int]) -> Assignment:
        """
        Validate an assignment and return it as a tuple.

        :raises MalformedInputError:
        """
        try:
            result = tuple(operator.index(s) for s in a)
        except TypeError:
            raise MalformedInputError("Assignment symbols must be integers")
        if len(result) != self.num_vars:
            raise MalformedInputError(
                f"Assignment has length {len(result)}, "
                f"expected {self.num_vars}"
            )
        for ix, s in enumerate(result):
            if not 0 <= s < self.alphabet_size:
                raise MalformedInputError(
                    f"Symbol {s!r} at position {ix} is not in "
                    f"[0, {self.alphabet_size})"
                )
        return result

    def eval_constraint(self, idx: int, a: Sequence[int]) -> bool:
        if not 0 <= idx < len(self.constraints):
            raise MalformedInputError(
                f"Constraint index {idx} not in "
                f"[0, {len(self.constraints)})"
            )
        return self.constraints[idx].holds(self.check_assignment(a))

    def satisfied_count(self, a: Sequence[int]) -> int:
        a = self.check_assignment(a)
        return sum(1 for con in self.constraints if con.holds(a))

    def value(self, a: Sequence[int]) -> Fraction:
        """
        Fraction of constraints satisfied by ``a``, counted with
        multiplicity.
        """
        return Fraction(self.satisfied_count(a), len(self.constraints))

    def is_solution(self, a: Sequence[int]) -> bool:
        return self.satisfied_count(a) == len(self.constraints)

    def enumerate_assignments(
        self, budgets: Optional[Budgets] = None
    ) -> Iterator[Assignment]:
        """
        Yield every assignment once, in lexicographic order.

        :raises BudgetExceededError:
            If the number of assignments exceeds ``budgets.max_states``.
            The check happens before anything is yielded.
        """
        budgets = budgets or DEFAULT_BUDGETS
        check_budget('assignments', self.state_count, budgets.max_states)
        return iter_mixed_radix((self.alphabet_size,) * self.num_vars)

    def with_constraints(
        self, extra: Iterable[Constraint]
    ) -> 'CspInstance':
        return CspInstance(
            self.num_vars,
            self.alphabet_size,
            self.constraints + tuple(extra),
        )


def serialize_instance(instance: CspInstance) -> str:
    """
    Render an instance in the line-oriented text format.

    :raises UnsupportedFormError:
        If some constraint is not in table form.
    """
    lines = [
        f"csp {instance.num_vars} {instance.alphabet_size} "
        f"{instance.num_constraints}"
    ]
    for ix, con in enumerate(instance.constraints):
        pred = con.predicate
        if not isinstance(pred, TablePredicate):
            raise UnsupportedFormError(
                f"Constraint {ix} is structured and cannot be written as "
                f"a table; serialise its owning system instead."
            )
        vars_str = ' '.join(str(v) for v in con.var_indices)
        lines.append(f"con {con.arity} {vars_str} {len(pred.accepted)}")
        for tup in sorted(pred.accepted):
            lines.append('acc ' + ' '.join(str(s) for s in tup))
    return '\n'.join(lines) + '\n'


def read_instance(reader: RecordReader) -> CspInstance:
    header = reader.next('csp', count=3)
    num_vars = header.int_at(0, 'num_vars', lo=1)
    alphabet_size = header.int_at(1, 'alphabet_size', lo=1)
    num_constraints = header.int_at(2, 'num_constraints', lo=1)
    constraints = []
    for _ in range(num_constraints):
        rec = reader.next('con')
        arity = rec.int_at(0, 'arity', lo=1)
        rec.expect_len(arity + 2)
        var_indices = tuple(
            rec.int_at(1 + j, f"v[{j}]", hi=num_vars) for j in range(arity)
        )
        if len(set(var_indices)) != arity:
            raise rec.error("variable indices are not distinct")
        num_accepted = rec.int_at(arity + 1, 'num_accepted')
        accepted = set()
        for _ in range(num_accepted):
            acc = reader.next('acc', count=arity)
            tup = tuple(
                acc.int_at(j, f"s[{j}]", hi=alphabet_size)
                for j in range(arity)
            )
            if tup in accepted:
                raise acc.error(f"duplicate accepted tuple {tup}")
            accepted.add(tup)
        constraints.append(Constraint.table(var_indices, accepted))
    return CspInstance(num_vars, alphabet_size, tuple(constraints))


def parse_instance(text: str) -> CspInstance:
    """
    Parse the text format produced by :func:`serialize_instance`.

    :raises ParseError:
        Naming the line (and field) of the first violation.
    """
    reader = RecordReader(text)
    instance = read_instance(reader)
    reader.finish()
    return instance
