"""
Exact and gap reconfiguration answers over the configuration graph of an
instance.

Two assignments are adjacent when they differ in exactly one coordinate.
The reconfiguration value of a problem is the best achievable bottleneck:
the maximum, over all paths between the endpoints, of the minimum value of
an assignment on the path. Only simple paths need to be considered, which
loses nothing for either existence or bottleneck value.
"""
import enum
import heapq
import logging
from collections import deque
from fractions import Fraction
from typing import (
    Callable,
    Dict,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx

from .config import DEFAULT_BUDGETS, Budgets, check_budget
from .csp import Assignment, CspInstance
from .errors import MalformedInputError
from .path import ReconfigPath, ReconfigProblem, step_distance
from .util import iter_mixed_radix, mixed_radix_weights

__all__ = [
    'GapVerdict',
    'ThresholdSearch',
    'neighbors',
    'exact_path',
    'reconfig_value',
    'bottleneck_path',
    'reconfig_value_with_path',
    'verify_path',
    'explain_path_failure',
    'brute_force_reconfig_value',
    'classify_gap',
]

logger = logging.getLogger(__name__)


@enum.unique
class GapVerdict(enum.Enum):
    """
    Outcome of comparing a reconfiguration value against the thresholds of
    a ``Gap_{c,s}`` promise problem.
    """

    YES = 'yes'
    """
    The value reaches the completeness threshold.
    """

    NO = 'no'
    """
    The value is below the soundness threshold.
    """

    OUTSIDE_PROMISE = 'outside-promise'
    """
    The value lies in the gap, so the instance violates the promise.
    """


def classify_gap(
    value: Fraction, completeness: Fraction, soundness: Fraction
) -> GapVerdict:
    if soundness > completeness:
        raise MalformedInputError(
            f"Soundness {soundness} exceeds completeness {completeness}"
        )
    if value >= completeness:
        return GapVerdict.YES
    elif value < soundness:
        return GapVerdict.NO
    return GapVerdict.OUTSIDE_PROMISE


class ThresholdSearch:
    """
    Bottleneck search over a finite product state space.

    States are digit tuples with the given radices, adjacent when they
    differ in exactly one digit. Each state has an integer score in
    ``[0, denominator]``; scores are computed on demand and memoised.

    :param radices:
        Number of values of each coordinate.
    :param score:
        Integer score of a state (numerator of its value).
    :param denominator:
        Common denominator of all values; the candidate thresholds are
        ``k / denominator`` for ``k = 0, ..., denominator``.
    """

    def __init__(
        self,
        radices: Sequence[int],
        score: Callable[[Tuple[int, ...]], int],
        denominator: int,
    ):
        self.radices = tuple(radices)
        self.denominator = denominator
        self._weights = mixed_radix_weights(self.radices)
        self._score_fn = score
        self._scores: Dict[int, int] = {}

    def index_of(self, state: Sequence[int]) -> int:
        return sum(d * w for d, w in zip(state, self._weights))

    def state_of(self, index: int) -> Tuple[int, ...]:
        return tuple(
            (index // w) % r for w, r in zip(self._weights, self.radices)
        )

    def score(self, index: int) -> int:
        try:
            return self._scores[index]
        except KeyError:
            value = self._score_fn(self.state_of(index))
            self._scores[index] = value
            return value

    def adjacent(self, index: int) -> Iterator[int]:
        for w, r in zip(self._weights, self.radices):
            digit = (index // w) % r
            base = index - digit * w
            for s in range(r):
                if s != digit:
                    yield base + s * w

    def connect(
        self, src: int, dst: int, threshold: int
    ) -> Optional[List[int]]:
        """
        Breadth-first search from ``src`` to ``dst`` through states scoring
        at least ``threshold``. Returns the shortest path, or ``None``.
        """
        if self.score(src) < threshold or self.score(dst) < threshold:
            return None
        parent: Dict[int, int] = {src: src}
        queue = deque([src])
        while queue:
            cur = queue.popleft()
            if cur == dst:
                break
            for nxt in self.adjacent(cur):
                if nxt not in parent and self.score(nxt) >= threshold:
                    parent[nxt] = cur
                    queue.append(nxt)
        if dst not in parent:
            return None
        path = [dst]
        while path[-1] != src:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def bottleneck(self, src: int, dst: int) -> Tuple[int, List[int]]:
        """
        Largest ``k`` such that ``dst`` is reachable from ``src`` through
        states scoring at least ``k``, with a witnessing shortest path.
        """
        lo, hi = 0, min(self.score(src), self.score(dst))
        # score 0 admits every state, and the product graph is connected
        best = self.connect(src, dst, 0)
        assert best is not None
        while lo < hi:
            mid = (lo + hi + 1) // 2
            found = self.connect(src, dst, mid)
            if found is not None:
                lo, best = mid, found
            else:
                hi = mid - 1
        logger.debug(
            f"Bottleneck {lo}/{self.denominator} found after visiting "
            f"{len(self._scores)} states"
        )
        return lo, best


def _search_for(
    problem: ReconfigProblem, budgets: Optional[Budgets]
) -> ThresholdSearch:
    instance = problem.instance
    budgets = budgets or DEFAULT_BUDGETS
    check_budget(
        'configuration graph states', instance.state_count, budgets.max_states
    )
    return ThresholdSearch(
        (instance.alphabet_size,) * instance.num_vars,
        instance.satisfied_count,
        instance.num_constraints,
    )


def neighbors(instance: CspInstance, a: Sequence[int]) -> Iterator[Assignment]:
    """
    All assignments differing from ``a`` in exactly one coordinate,
    coordinate by coordinate, symbols in increasing order.
    """
    a = instance.check_assignment(a)
    for pos in range(instance.num_vars):
        for s in range(instance.alphabet_size):
            if s != a[pos]:
                yield a[:pos] + (s,) + a[pos + 1 :]


def exact_path(
    problem: ReconfigProblem, budgets: Optional[Budgets] = None
) -> Optional[ReconfigPath]:
    """
    Shortest reconfiguration path through solutions only, or ``None`` if
    the endpoints are not connected in the solution space.
    """
    search = _search_for(problem, budgets)
    found = search.connect(
        search.index_of(problem.sigma_ini),
        search.index_of(problem.sigma_tar),
        problem.instance.num_constraints,
    )
    if found is None:
        logger.info(f"No exact path for {problem}")
        return None
    return ReconfigPath(search.state_of(ix) for ix in found)


def reconfig_value_with_path(
    problem: ReconfigProblem, budgets: Optional[Budgets] = None
) -> Tuple[Fraction, ReconfigPath]:
    """
    :func:`reconfig_value` and :func:`bottleneck_path` from a single
    search.
    """
    search = _search_for(problem, budgets)
    logger.info(
        f"Computing reconfiguration value over "
        f"{problem.instance.state_count} assignments"
    )
    k, found = search.bottleneck(
        search.index_of(problem.sigma_ini),
        search.index_of(problem.sigma_tar),
    )
    path = ReconfigPath(search.state_of(ix) for ix in found)
    return Fraction(k, problem.instance.num_constraints), path


def reconfig_value(
    problem: ReconfigProblem, budgets: Optional[Budgets] = None
) -> Fraction:
    """
    Exact bottleneck value: binary search over the thresholds ``k/|E|``,
    with a connectivity test for each.
    """
    return reconfig_value_with_path(problem, budgets)[0]


def bottleneck_path(
    problem: ReconfigProblem, budgets: Optional[Budgets] = None
) -> ReconfigPath:
    """
    A shortest path whose every step has value at least
    :func:`reconfig_value`.
    """
    return reconfig_value_with_path(problem, budgets)[1]


def explain_path_failure(
    problem: ReconfigProblem,
    path: Union[ReconfigPath, Sequence[Sequence[int]]],
    threshold: Fraction,
) -> Optional[str]:
    """
    Return ``None`` if the path is a valid reconfiguration sequence for the
    problem at the given threshold, or a description of the first violated
    condition otherwise.
    """
    instance = problem.instance
    steps = list(path)
    if not steps:
        return "path is empty"
    checked = []
    for ix, step in enumerate(steps):
        try:
            checked.append(instance.check_assignment(step))
        except MalformedInputError as e:
            return f"step {ix} is malformed: {e.failure_msg}"
    if checked[0] != problem.sigma_ini:
        return f"path starts at {checked[0]}, not at {problem.sigma_ini}"
    if checked[-1] != problem.sigma_tar:
        return f"path ends at {checked[-1]}, not at {problem.sigma_tar}"
    for ix in range(1, len(checked)):
        dist = step_distance(checked[ix - 1], checked[ix])
        if dist > 1:
            return f"steps {ix - 1} and {ix} differ in {dist} coordinates"
    for ix, step in enumerate(checked):
        val = instance.value(step)
        if val < threshold:
            return f"step {ix} has value {val} < {threshold}"
    return None


def verify_path(
    problem: ReconfigProblem,
    path: Union[ReconfigPath, Sequence[Sequence[int]]],
    threshold: Fraction,
) -> bool:
    diagnostic = explain_path_failure(problem, path, threshold)
    if diagnostic is not None:
        logger.info(f"Path rejected at threshold {threshold}: {diagnostic}")
        return False
    return True


def brute_force_reconfig_value(
    problem: ReconfigProblem, budgets: Optional[Budgets] = None
) -> Fraction:
    """
    Independent oracle for :func:`reconfig_value`: materialise the whole
    configuration graph and run a widest-bottleneck search on it, with a
    max-heap keyed by the best bottleneck known for each node.
    """
    instance = problem.instance
    budgets = budgets or DEFAULT_BUDGETS
    check_budget(
        'oracle configuration graph states',
        instance.state_count,
        budgets.max_oracle_states,
    )
    graph = nx.Graph()
    for a in iter_mixed_radix((instance.alphabet_size,) * instance.num_vars):
        graph.add_node(a, value=instance.value(a))
        for pos in range(instance.num_vars):
            for s in range(a[pos]):
                graph.add_edge(a, a[:pos] + (s,) + a[pos + 1 :])

    src, dst = problem.sigma_ini, problem.sigma_tar
    best = {src: graph.nodes[src]['value']}
    heap = [(-best[src], src)]
    done = set()
    while heap:
        neg_width, node = heapq.heappop(heap)
        if node in done:
            continue
        done.add(node)
        if node == dst:
            return -neg_width
        for nb in graph.neighbors(node):
            width = min(-neg_width, graph.nodes[nb]['value'])
            if nb not in done and width > best.get(nb, Fraction(-1)):
                best[nb] = width
                heapq.heappush(heap, (-width, nb))
    # the configuration graph is connected
    raise AssertionError("target unreachable in configuration graph")
