# coding: utf-8
from typing import Iterable, Iterator, Optional, Sequence, Tuple, Union

from .csp import Assignment, CspInstance, read_instance, serialize_instance
from .errors import MalformedInputError
from .util import RecordReader

__all__ = [
    'ReconfigProblem',
    'ReconfigPath',
    'step_distance',
    'serialize_problem',
    'parse_problem',
    'serialize_path',
    'parse_path',
]


def step_distance(a: Sequence[int], b: Sequence[int]) -> int:
    """
    Number of coordinates in which two assignments differ.
    """
    return sum(1 for x, y in zip(a, b) if x != y)


class ReconfigProblem:
    """
    A reconfiguration question: can ``sigma_ini`` be turned into
    ``sigma_tar`` one coordinate at a time, and how good do the intermediate
    assignments have to be?

    :param instance:
        The underlying CSP instance.
    :param sigma_ini:
        Initial assignment.
    :param sigma_tar:
        Target assignment.
    :param relaxed:
        Admit endpoints that are not solutions. Such problems are marked
        as relaxed; they exist for oracle tests.
    """

    def __init__(
        self,
        instance: CspInstance,
        sigma_ini: Sequence[int],
        sigma_tar: Sequence[int],
        *,
        relaxed: bool = False,
    ):
        self._instance = instance
        self._ini = instance.check_assignment(sigma_ini)
        self._tar = instance.check_assignment(sigma_tar)
        self._relaxed = relaxed
        if not relaxed:
            endpoints = (('initial', self._ini), ('target', self._tar))
            for name, endpoint in endpoints:
                if not instance.is_solution(endpoint):
                    raise MalformedInputError(
                        f"The {name} assignment {endpoint} is not a solution; "
                        f"use a relaxed problem for non-solution endpoints."
                    )

    @classmethod
    def relaxed_problem(
        cls,
        instance: CspInstance,
        sigma_ini: Sequence[int],
        sigma_tar: Sequence[int],
    ) -> 'ReconfigProblem':
        return cls(instance, sigma_ini, sigma_tar, relaxed=True)

    @property
    def instance(self) -> CspInstance:
        return self._instance

    @property
    def sigma_ini(self) -> Assignment:
        return self._ini

    @property
    def sigma_tar(self) -> Assignment:
        return self._tar

    @property
    def is_relaxed(self) -> bool:
        return self._relaxed

    def reversed(self) -> 'ReconfigProblem':
        return ReconfigProblem(
            self._instance, self._tar, self._ini, relaxed=self._relaxed
        )

    def __eq__(self, other):
        if not isinstance(other, ReconfigProblem):
            return False
        return (
            self._instance == other._instance
            and self._ini == other._ini
            and self._tar == other._tar
            and self._relaxed == other._relaxed
        )

    def __repr__(self):
        return (
            f"ReconfigProblem(n={self._instance.num_vars}, "
            f"ini={self._ini}, tar={self._tar}"
            f"{', relaxed' if self._relaxed else ''})"
        )


class ReconfigPath:
    """
    A reconfiguration sequence: a non-empty list of assignments in which
    consecutive entries differ in at most one coordinate.
    """

    def __init__(self, steps: Iterable[Sequence[int]]):
        self._steps: Tuple[Assignment, ...] = tuple(tuple(s) for s in steps)
        if not self._steps:
            raise MalformedInputError("A reconfiguration path is non-empty")
        for ix in range(1, len(self._steps)):
            prev, cur = self._steps[ix - 1], self._steps[ix]
            if len(prev) != len(cur) or step_distance(prev, cur) > 1:
                raise MalformedInputError(
                    f"Steps {ix - 1} and {ix} differ in more than "
                    f"one coordinate"
                )

    @property
    def steps(self) -> Tuple[Assignment, ...]:
        return self._steps

    @property
    def first(self) -> Assignment:
        return self._steps[0]

    @property
    def last(self) -> Assignment:
        return self._steps[-1]

    def copy_and_append(self, step: Sequence[int]) -> 'ReconfigPath':
        return ReconfigPath(self._steps + (tuple(step),))

    def __len__(self):
        return len(self._steps)

    def __iter__(self) -> Iterator[Assignment]:
        return iter(self._steps)

    def __getitem__(self, key):
        return self._steps[key]

    def __eq__(self, other):
        if not isinstance(other, ReconfigPath):
            return False
        return self._steps == other._steps

    def __repr__(self):
        return f"ReconfigPath({list(self._steps)})"


def serialize_problem(problem: ReconfigProblem) -> str:
    """
    Instance text followed by the ``ini`` and ``tar`` lines.
    """
    ini = ' '.join(str(s) for s in problem.sigma_ini)
    tar = ' '.join(str(s) for s in problem.sigma_tar)
    return serialize_instance(problem.instance) + f"ini {ini}\ntar {tar}\n"


def read_endpoints(
    reader: RecordReader, instance: CspInstance
) -> Tuple[Assignment, Assignment]:
    n = instance.num_vars
    endpoints = []
    for keyword in ('ini', 'tar'):
        rec = reader.next(keyword, count=n)
        endpoints.append(
            tuple(
                rec.int_at(j, f"s[{j}]", hi=instance.alphabet_size)
                for j in range(n)
            )
        )
    return endpoints[0], endpoints[1]


def parse_problem(text: str, *, relaxed: bool = False) -> ReconfigProblem:
    reader = RecordReader(text)
    instance = read_instance(reader)
    ini, tar = read_endpoints(reader, instance)
    reader.finish()
    return ReconfigProblem(instance, ini, tar, relaxed=relaxed)


def serialize_path(path: Union[ReconfigPath, Sequence[Sequence[int]]]) -> str:
    return ''.join(
        'step ' + ' '.join(str(s) for s in step) + '\n' for step in path
    )


def parse_path(
    text: str, num_vars: Optional[int] = None
) -> Tuple[Assignment, ...]:
    """
    Parse a path file into its raw list of steps.

    The result is not a :class:`ReconfigPath`: adjacency violations in path
    files are reported by :func:`~pcpp_reconfig.reconfig.verify_path` as a
    verdict, not as a parse error.
    """
    reader = RecordReader(text)
    steps = []
    for rec in reader:
        if rec.keyword != 'step':
            raise rec.error(f"expected 'step', got '{rec.keyword}'")
        if num_vars is not None:
            rec.expect_len(num_vars)
        steps.append(rec.ints_from(0, 's'))
    if not steps:
        raise MalformedInputError("Path file contains no steps")
    return tuple(steps)
