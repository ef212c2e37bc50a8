"""
From layered systems to CSP instances, and the reconfiguration values of
the layered formulations.
"""
import logging
from fractions import Fraction
from typing import Optional, Tuple

from ..config import DEFAULT_BUDGETS, Budgets, check_budget
from ..csp import Constraint, CspInstance, StructuredPredicate
from ..reconfig import ThresholdSearch
from .system import LayeredAssignment, ParallelPcppSystem

__all__ = [
    'parallelize_to_csp',
    'stack_to_csp',
    'dedup_columns',
    'layered_reconfig_value',
    'indicator_reconfig_value',
]

logger = logging.getLogger(__name__)


def dedup_columns(
    query: Tuple[int, ...]
) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    Distinct columns of a query tuple in first-occurrence order, and for
    every query slot the index of its column in that list.
    """
    uniq = tuple(dict.fromkeys(query))
    where = {col: ix for ix, col in enumerate(uniq)}
    return uniq, tuple(where[col] for col in query)


class _ParallelEvaluator:
    def __init__(self, system: ParallelPcppSystem, omega: int, slots):
        self._t = system.t
        self._preds = [preds[omega] for preds in system.layer_predicates]
        self._slots = slots

    def __call__(self, symbols: Tuple[int, ...]) -> bool:
        v = symbols[0]
        if v >= self._t:
            return False
        values = tuple(symbols[1 + s] for s in self._slots)
        return bool(self._preds[v](values))


class _StackedEvaluator:
    def __init__(self, system: ParallelPcppSystem, layer: int, omega, slots):
        self._t = system.t
        self._layer = layer
        self._pred = system.layer_predicates[layer][omega]
        self._slots = slots

    def __call__(self, symbols: Tuple[int, ...]) -> bool:
        v = symbols[0]
        if v >= self._t:
            return False
        if v != self._layer:
            return True
        values = tuple(symbols[1 + s] for s in self._slots)
        return bool(self._pred(values))


def _structured(system, omega, make_evaluator, description) -> Constraint:
    uniq, slots = dedup_columns(system.query_map[omega])
    var_indices = (0,) + tuple(col + 1 for col in uniq)
    pred = StructuredPredicate(
        len(var_indices), make_evaluator(slots), description
    )
    return Constraint(var_indices, pred)


def parallelize_to_csp(system: ParallelPcppSystem) -> CspInstance:
    """
    The ``(q+1)``-CSP over the alphabet ``{0,1}^t``: variable ``0`` is the
    indicator ``v``, variable ``1 + col`` is column ``col``. There is one
    constraint per randomness string, satisfied iff ``v < t`` and layer
    ``v`` accepts the queried columns.
    """
    constraints = tuple(
        _structured(
            system,
            omega,
            lambda slots, _o=omega: _ParallelEvaluator(system, _o, slots),
            f"omega={omega}",
        )
        for omega in range(system.randomness_count)
    )
    instance = CspInstance(system.width + 1, system.alphabet_size, constraints)
    logger.info(
        f"Parallelised {system}: {instance.num_vars} variables, alphabet "
        f"{instance.alphabet_size}, {instance.num_constraints} constraints "
        f"of arity <= {instance.max_arity}"
    )
    return instance


def stack_to_csp(system: ParallelPcppSystem) -> CspInstance:
    """
    The unparallelised combination: one constraint per layer and
    randomness string, satisfied iff ``v < t`` and either ``v`` is another
    layer or the layer accepts. Its value at ``v = i`` is
    ``(t - 1 + p_i) / t``.
    """
    constraints = tuple(
        _structured(
            system,
            omega,
            lambda slots, _i=i, _o=omega: _StackedEvaluator(
                system, _i, _o, slots
            ),
            f"layer={i} omega={omega}",
        )
        for i in range(system.t)
        for omega in range(system.randomness_count)
    )
    return CspInstance(system.width + 1, system.alphabet_size, constraints)


def _check_endpoints(system: ParallelPcppSystem, *psis: LayeredAssignment):
    for psi in psis:
        system.check_assignment(psi)
        system.check_layer(psi.v)


def layered_reconfig_value(
    system: ParallelPcppSystem,
    psi_ini: LayeredAssignment,
    psi_tar: LayeredAssignment,
    budgets: Optional[Budgets] = None,
) -> Fraction:
    """
    Bottleneck value over column assignments alone, where a step's value
    is :func:`~pcpp_reconfig.parallel.system.parallel_value`. Indicator
    values of the endpoints are ignored.
    """
    budgets = budgets or DEFAULT_BUDGETS
    check_budget(
        'layered assignments',
        system.alphabet_size**system.width,
        budgets.max_states,
    )
    system.check_assignment(psi_ini)
    system.check_assignment(psi_tar)

    def _score(cols):
        psi = LayeredAssignment(cols)
        return max(system.accept_count(psi, i) for i in range(system.t))

    search = ThresholdSearch(
        (system.alphabet_size,) * system.width,
        _score,
        system.randomness_count,
    )
    k, _ = search.bottleneck(
        search.index_of(psi_ini.columns), search.index_of(psi_tar.columns)
    )
    return Fraction(k, system.randomness_count)


def indicator_reconfig_value(
    system: ParallelPcppSystem,
    psi_ini: LayeredAssignment,
    psi_tar: LayeredAssignment,
    budgets: Optional[Budgets] = None,
) -> Fraction:
    """
    Bottleneck value over pairs ``(v, columns)`` with ``v`` in ``[0, t)``,
    where a step's value is the acceptance probability of layer ``v``.
    Moving ``v`` is a step of its own.
    """
    budgets = budgets or DEFAULT_BUDGETS
    check_budget(
        'indicator/layered assignment pairs',
        system.t * system.alphabet_size**system.width,
        budgets.max_states,
    )
    _check_endpoints(system, psi_ini, psi_tar)

    def _score(state):
        return system.accept_count(LayeredAssignment(state[1:]), state[0])

    search = ThresholdSearch(
        (system.t,) + (system.alphabet_size,) * system.width,
        _score,
        system.randomness_count,
    )
    k, _ = search.bottleneck(
        search.index_of(psi_ini.to_csp()), search.index_of(psi_tar.to_csp())
    )
    return Fraction(k, system.randomness_count)
