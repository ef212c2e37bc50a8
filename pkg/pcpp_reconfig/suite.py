"""
The acceptance battery: exhaustive oracle and property checks of every
layer of the pipeline on seeded desk-scale instances.
"""
import logging
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, Optional

from .config import ExperimentConfig, derive_rng
from .ecc import Decoded, hadamard_code, min_distance
from .errors import MalformedInputError
from .generators import (
    random_binary_source,
    random_csp,
    random_layered_assignment,
    random_micro_system,
)
from .parallel.km24 import (
    KM24_LAYERS,
    completeness_path,
    extract_assignment,
    km24_build,
)
from .parallel.reduction import (
    dedup_columns,
    indicator_reconfig_value,
    parallelize_to_csp,
)
from .parallel.system import LayeredAssignment, parallel_accept_prob
from .path import ReconfigPath, ReconfigProblem
from .pcpp.audit import audit_completeness, run_soundness_audit
from .pcpp.circuit import Circuit
from .pcpp.proximity import build_proximity_pcpp, proximity_soundness_bound
from .reconfig import (
    brute_force_reconfig_value,
    exact_path,
    reconfig_value,
    verify_path,
)
from .report import Report
from .util import iter_mixed_radix

__all__ = ['CRITERIA', 'run_suite']

logger = logging.getLogger(__name__)

MICRO_SYSTEMS = 50
ORACLE_INSTANCES = 100
KM24_SOURCES = 10
AUDIT_DELTA = Fraction(1, 4)


def check_value_identity(report: Report, config: ExperimentConfig):
    rng = derive_rng(config.seed, 'suite.value-identity')
    with report.timed('value-identity') as row:
        checked = 0
        for _ in range(MICRO_SYSTEMS):
            system = random_micro_system(rng)
            csp = parallelize_to_csp(system)
            radices = (system.alphabet_size,) * system.width
            for cols in iter_mixed_radix(radices):
                psi = LayeredAssignment(cols)
                for v in range(system.alphabet_size):
                    expected = (
                        parallel_accept_prob(system, psi, v)
                        if v < system.t
                        else Fraction(0)
                    )
                    checked += 1
                    if csp.value((v,) + cols) != expected:
                        logger.warning(
                            f"Value identity fails on {system} at "
                            f"v={v}, columns={cols}"
                        )
                        row.check(False)
        row.check(True)
        row.set('systems', MICRO_SYSTEMS)
        row.set('assignments', checked)


def check_reconfig_agreement(report: Report, config: ExperimentConfig):
    rng = derive_rng(config.seed, 'suite.reconfig-agreement')
    with report.timed('reconfig-agreement') as row:
        for _ in range(MICRO_SYSTEMS):
            system = random_micro_system(rng)
            ini = random_layered_assignment(rng, system)
            tar = random_layered_assignment(rng, system)
            problem = ReconfigProblem.relaxed_problem(
                parallelize_to_csp(system), ini.to_csp(), tar.to_csp()
            )
            oracle = brute_force_reconfig_value(problem, config.budgets)
            direct = indicator_reconfig_value(
                system, ini, tar, config.budgets
            )
            if oracle != direct:
                logger.warning(
                    f"Reconfiguration values differ on {system}: "
                    f"{oracle} vs {direct}"
                )
            row.check(oracle == direct)
        row.set('systems', MICRO_SYSTEMS)


def _oracle_shapes() -> Iterable:
    # (alphabet, variables) with alphabet^variables <= 81
    return [(2, 2), (2, 3), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4)]


def check_engine_oracle(report: Report, config: ExperimentConfig):
    rng = derive_rng(config.seed, 'suite.engine-oracle')
    shapes = _oracle_shapes()
    with report.timed('engine-oracle') as row:
        yes = 0
        for ix in range(ORACLE_INSTANCES):
            alphabet, n = shapes[ix % len(shapes)]
            problem = random_csp(
                rng, n, alphabet, int(rng.integers(1, 5)), density=0.6
            )
            value = reconfig_value(problem, config.budgets)
            oracle = brute_force_reconfig_value(problem, config.budgets)
            path = exact_path(problem, config.budgets)
            yes += value == 1
            row.check(value == oracle)
            row.check((path is not None) == (value == 1))
        row.set('instances', ORACLE_INSTANCES)
        row.set('yes_instances', yes)


def check_codes(report: Report, config: ExperimentConfig):
    with report.timed('ecc') as row:
        for k in range(1, 5):
            code = hadamard_code(k, config.budgets)
            row.check(min_distance(code, config.budgets) == 1 << (k - 1))
        for k in range(1, 4):
            code = hadamard_code(k, config.budgets)
            radius = code.unique_radius
            for j in range(1 << k):
                msg = tuple((j >> i) & 1 for i in range(k))
                word = code.encode(msg)
                for e in range(radius + 1):
                    for flips in combinations(range(code.block_len), e):
                        noisy = list(word)
                        for pos in flips:
                            noisy[pos] ^= 1
                        decoded = code.decode_nearest(noisy)
                        row.check(
                            isinstance(decoded, Decoded)
                            and decoded.message == msg
                        )


def _random_circuit(rng, n: int) -> Circuit:
    table = (rng.random(1 << n) < 0.3).astype(int)
    table[int(rng.integers(1 << n))] = 1
    return Circuit.from_truth_table(table, description=f"random/{n}")


def check_pcpp_audits(report: Report, config: ExperimentConfig):
    rng = derive_rng(config.seed, 'suite.pcpp-audits')
    for n in (2, 4, 8):
        circuit = _random_circuit(rng, n)
        for k in (1, 2, 3):
            with report.timed(f"pcpp-audit-n{n}-k{k}") as row:
                v = build_proximity_pcpp(
                    circuit, k, AUDIT_DELTA, config.budgets
                )
                complete = audit_completeness(v, circuit, config.budgets)
                audit = run_soundness_audit(
                    v, circuit, AUDIT_DELTA, config.budgets
                )
                bound = proximity_soundness_bound(n, k, AUDIT_DELTA)
                row.check(complete and audit.within(bound))
                row.set('completeness', complete)
                row.set('measured', audit.measured)
                row.set('bound', bound)
                row.set('far_inputs', audit.far_inputs)
                row.set('evaluations', audit.evaluations)


def _km24_cases(config: ExperimentConfig):
    rng = derive_rng(config.seed, 'suite.km24')
    for ix in range(KM24_SOURCES):
        n = 2 + ix % 2
        source, planted = random_binary_source(rng, n)
        found = exact_path(source, config.budgets)
        source_path = found if found is not None else ReconfigPath(planted)
        inst = km24_build(
            source,
            hadamard_code(n, config.budgets),
            config.repetitions,
            config.delta,
            config.budgets,
        )
        yield inst, source_path


def check_km24(report: Report, config: ExperimentConfig):
    with report.timed('km24-completeness') as c_row, report.timed(
        'km24-extraction'
    ) as e_row:
        longest = 0
        for inst, source_path in _km24_cases(config):
            steps = completeness_path(inst, source_path)
            csp_path = [psi.to_csp() for psi in steps]
            longest = max(longest, len(steps))
            c_row.check(
                verify_path(inst.reduced_problem(), csp_path, Fraction(1))
            )
            c_row.check(
                all(
                    sum(a != b for a, b in zip(p, s)) == 1
                    for p, s in zip(csp_path, csp_path[1:])
                )
            )
            previous = None
            for psi in steps:
                y = extract_assignment(inst, psi)
                ok = y is not None and inst.source.instance.is_solution(y)
                if ok and previous is not None:
                    ok = sum(a != b for a, b in zip(previous, y)) <= 1
                e_row.check(ok)
                previous = y
            _check_corruption(inst, e_row)
        c_row.set('sources', KM24_SOURCES)
        c_row.set('longest_path', longest)


def _check_corruption(inst, row):
    psi = inst.psi_ini
    expected = inst.source.sigma_ini
    radius = inst.code.unique_radius
    for j in range(KM24_LAYERS):
        if j == psi.v:
            continue
        for e in range(1, radius + 1):
            for flips in combinations(range(inst.n_blk), e):
                corrupted = psi
                for col in flips:
                    corrupted = corrupted.with_column(
                        col, corrupted.columns[col] ^ (1 << j)
                    )
                row.check(extract_assignment(inst, corrupted) == expected)


def check_structure(report: Report, config: ExperimentConfig):
    rng = derive_rng(config.seed, 'suite.structure')
    with report.timed('structure') as row:
        for _ in range(MICRO_SYSTEMS):
            system = random_micro_system(rng)
            csp = parallelize_to_csp(system)
            row.check(csp.num_vars == system.width + 1)
            row.check(csp.alphabet_size == 1 << system.t)
            row.check(csp.num_constraints == system.randomness_count)
            for con, query in zip(csp.constraints, system.query_map):
                uniq, _ = dedup_columns(query)
                row.check(con.arity == len(uniq) + 1)


CRITERIA: Dict[str, Callable[[Report, ExperimentConfig], None]] = {
    'value-identity': check_value_identity,
    'reconfig-agreement': check_reconfig_agreement,
    'engine-oracle': check_engine_oracle,
    'ecc': check_codes,
    'pcpp-audits': check_pcpp_audits,
    'km24': check_km24,
    'structure': check_structure,
}


def run_suite(
    config: ExperimentConfig, only: Optional[Iterable[str]] = None
) -> Report:
    """
    Run the named checks (all by default) and collect their rows.
    """
    report = Report(config)
    names = list(only) if only is not None else list(CRITERIA)
    for name in names:
        try:
            check = CRITERIA[name]
        except KeyError:
            raise MalformedInputError(f"Unknown suite check '{name}'")
        logger.info(f"Running suite check {name}")
        check(report, config)
    return report
