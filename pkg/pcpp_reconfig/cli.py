"""
Command-line harness.

Exit codes: 0 on success, 1 when a verification or audit fails, 2 on
usage and input errors, 3 when an enumeration budget is exceeded.
"""
import argparse
import logging
import os
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .config import Budgets, CodeSpec, ExperimentConfig, derive_rng
from .ecc import code_from_tag
from .errors import (
    BudgetExceededError,
    MalformedInputError,
    PreconditionError,
    ReconfigToolError,
    UnsupportedFormError,
)
from .generators import GENERATOR_KINDS, equality_chain, or_chain, random_csp
from .parallel.binarize import binarize_problem
from .parallel.km24 import (
    completeness_csp_path,
    export_reduced,
    km24_build,
    parse_reduced,
    serialize_km24_system,
)
from .path import (
    ReconfigProblem,
    parse_path,
    parse_problem,
    serialize_path,
    serialize_problem,
)
from .pcpp.audit import audit_completeness, run_soundness_audit
from .pcpp.circuit import parse_circuit
from .pcpp.proximity import build_proximity_pcpp
from .pcpp.verifier import parse_pcpp
from .reconfig import (
    brute_force_reconfig_value,
    exact_path,
    explain_path_failure,
    reconfig_value_with_path,
)
from .report import Report
from .suite import CRITERIA, run_suite
from .util import RecordReader, parse_fraction, read_text
from .version import __version__

__all__ = ['main', 'build_parser']

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _fraction_arg(text: str) -> Fraction:
    try:
        return parse_fraction(text)
    except MalformedInputError as e:
        raise argparse.ArgumentTypeError(e.failure_msg)


def _common_options(suppress: bool) -> argparse.ArgumentParser:
    """
    Options accepted both before and after the subcommand. With
    ``suppress``, unset options stay out of the namespace, so a subcommand
    never overwrites a value given before it.
    """
    common = argparse.ArgumentParser(add_help=False)

    def add(*names, default=None, **kwargs):
        if suppress:
            default = argparse.SUPPRESS
        common.add_argument(*names, default=default, **kwargs)

    add('--seed', type=int, default=0, help="root seed")
    add(
        '--delta', type=_fraction_arg,
        help="proximity parameter as p/q (default 1/5)",
    )
    add('--reps', type=int, default=1, help="sampled columns per check")
    add(
        '--budget-states', type=int, default=Budgets.max_states,
        help="maximal configuration graph size",
    )
    add(
        '--budget-triples', type=int, default=Budgets.max_triples,
        help="maximal number of (x, pi, omega) triples in audits",
    )
    add(
        '--code-k', type=int,
        help="message length of the Hadamard code (default: source size)",
    )
    add('--out', help="output file or directory")
    add(
        '--kappa', type=_fraction_arg,
        help="declared soundness for verifier files without one",
    )
    add('-v', '--verbose', action='store_true', default=False)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options(suppress=True)
    parser = argparse.ArgumentParser(
        prog='pcpp-reconfig',
        description="Reductions from PCPP systems to gap CSP reconfiguration",
        parents=[_common_options(suppress=False)],
    )
    parser.add_argument(
        '--version', action='version', version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest='command', required=True)

    gen = sub.add_parser(
        'gen', parents=[common], help="generate a reconfiguration problem"
    )
    gen.add_argument('kind', choices=GENERATOR_KINDS)
    gen.add_argument(
        'params', nargs='*', metavar='KEY=VALUE',
        help="n, alphabet, m, arity, density",
    )
    gen.set_defaults(handler=cmd_gen)

    reduce = sub.add_parser(
        'reduce', parents=[common], help="apply the four-layer reduction"
    )
    reduce.add_argument('source', help="reconfiguration problem file")
    reduce.add_argument(
        '--binarize', action='store_true',
        help="binarize a non-binary source first",
    )
    reduce.add_argument(
        '--with-path', action='store_true',
        help="also write the lifted path of a shortest exact source path",
    )
    reduce.set_defaults(handler=cmd_reduce)

    audit = sub.add_parser(
        'audit', parents=[common], help="audit a verifier exhaustively"
    )
    audit.add_argument(
        'verifier', nargs='?', default=None,
        help="verifier file (default: column-sampling verifier)",
    )
    audit.add_argument('--circuit', required=True, help="circuit file")
    audit.set_defaults(handler=cmd_audit)

    recval = sub.add_parser(
        'recval', parents=[common], help="exact reconfiguration value"
    )
    recval.add_argument('problem', help="reconfiguration problem file")
    recval.set_defaults(handler=cmd_recval)

    verify = sub.add_parser(
        'verify', parents=[common], help="check a reconfiguration path"
    )
    verify.add_argument('problem', help="problem or reduced-instance file")
    verify.add_argument('path', help="path file")
    verify.add_argument(
        '--threshold', type=_fraction_arg, default=Fraction(1),
        help="minimal step value as p/q (default 1)",
    )
    verify.set_defaults(handler=cmd_verify)

    suite = sub.add_parser(
        'suite', parents=[common], help="run the acceptance battery"
    )
    suite.add_argument(
        '--only', nargs='+', choices=sorted(CRITERIA), default=None
    )
    suite.set_defaults(handler=cmd_suite)
    return parser


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    budgets = Budgets(
        max_states=args.budget_states, max_triples=args.budget_triples
    )
    kwargs = {}
    if args.delta is not None:
        kwargs['delta'] = args.delta
    return ExperimentConfig(
        seed=args.seed,
        repetitions=args.reps,
        budgets=budgets,
        code=CodeSpec('hadamard', args.code_k),
        output=args.out,
        **kwargs,
    )


def _emit(text: str, path: Optional[str]):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, 'w') as f:
            f.write(text)


def _finish(report: Report) -> int:
    sys.stdout.write(report.render_table())
    if report.config.output is not None and not os.path.isdir(
        report.config.output
    ):
        report.write(report.config.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def _parse_params(tokens: List[str]) -> Dict[str, str]:
    params = {}
    for token in tokens:
        key, sep, value = token.partition('=')
        if not sep or not key:
            raise MalformedInputError(f"Parameter '{token}' is not KEY=VALUE")
        params[key] = value
    return params


def _int_param(params: Dict[str, str], key: str, default: int) -> int:
    try:
        return int(params.pop(key, default))
    except ValueError:
        raise MalformedInputError(f"Parameter '{key}' must be an integer")


def cmd_gen(args, config: ExperimentConfig) -> int:
    params = _parse_params(args.params)
    n = _int_param(params, 'n', 3)
    if args.kind == 'equality-chain':
        problem = equality_chain(n)
    elif args.kind == 'or-chain':
        problem = or_chain(n)
    else:
        alphabet = _int_param(params, 'alphabet', 2)
        m = _int_param(params, 'm', 3)
        arity = _int_param(params, 'arity', 2)
        try:
            density = float(params.pop('density', 0.5))
        except ValueError:
            raise MalformedInputError("Parameter 'density' must be a number")
        rng = derive_rng(config.seed, 'gen.random-csp')
        problem = random_csp(rng, n, alphabet, m, arity, density)
    if params:
        raise MalformedInputError(
            f"Unknown parameters for {args.kind}: {', '.join(sorted(params))}"
        )
    _emit(serialize_problem(problem), config.output)
    return EXIT_OK


def cmd_reduce(args, config: ExperimentConfig) -> int:
    source = parse_problem(read_text(args.source))
    if source.instance.alphabet_size != 2:
        if not args.binarize:
            raise PreconditionError(
                f"The source alphabet has {source.instance.alphabet_size} "
                f"symbols; pass --binarize to reduce its binary encoding."
            )
        source = binarize_problem(source)
    k_code = config.code.msg_len or source.instance.num_vars
    code = code_from_tag(config.code.family, k_code, config.budgets)
    inst = km24_build(
        source, code, config.repetitions, config.delta, config.budgets
    )
    out_dir = config.output or '.'
    os.makedirs(out_dir, exist_ok=True)
    _emit(serialize_problem(source), os.path.join(out_dir, 'source.rcp'))
    _emit(
        serialize_km24_system(inst, 'source.rcp'),
        os.path.join(out_dir, 'system.psys'),
    )
    _emit(
        export_reduced(inst, 'system.psys'),
        os.path.join(out_dir, 'reduced.rcp'),
    )
    summary: List[Tuple[str, str]] = inst.summary()
    if args.with_path:
        source_path = exact_path(source, config.budgets)
        if source_path is None:
            logger.warning("Source has no exact path; no lifted path written")
            summary.append(('path', '-'))
        else:
            lifted = completeness_csp_path(inst, source_path)
            _emit(serialize_path(lifted), os.path.join(out_dir, 'path.txt'))
            summary.append(('path_length', str(len(lifted))))
    sys.stdout.write(''.join(f"{k}={v}\n" for k, v in summary))
    return EXIT_OK


def cmd_audit(args, config: ExperimentConfig) -> int:
    circuit = parse_circuit(read_text(args.circuit))
    delta = config.delta
    if args.verifier is None:
        v = build_proximity_pcpp(
            circuit, config.repetitions, delta, config.budgets
        )
    else:
        v = parse_pcpp(read_text(args.verifier), config.budgets)
        if args.delta is None and v.declared_delta is not None:
            delta = v.declared_delta
    if args.kappa is not None:
        v = v.with_kappa(args.kappa)
    report = Report(config)
    with report.timed('completeness') as row:
        ok = audit_completeness(
            v, circuit, config.budgets, search_proofs=True
        )
        row.check(ok)
    with report.timed('soundness') as row:
        audit = run_soundness_audit(v, circuit, delta, config.budgets)
        row.set('delta', delta)
        row.set('measured', audit.measured)
        row.set('kappa', v.declared_kappa)
        row.set('far_inputs', audit.far_inputs)
        row.set('evaluations', audit.evaluations)
        row.set('witness_x', audit.witness_x)
        row.set('witness_pi', audit.witness_pi)
        if v.declared_kappa is not None:
            row.check(audit.within(v.declared_kappa))
    return _finish(report)


def cmd_recval(args, config: ExperimentConfig) -> int:
    problem = _load_problem(args.problem)
    report = Report(config)
    with report.timed('recval') as row:
        value, path = reconfig_value_with_path(problem, config.budgets)
        row.set('value', value)
        row.set('path_length', len(path))
        state_count = problem.instance.state_count
        if state_count <= config.budgets.max_oracle_states:
            oracle = brute_force_reconfig_value(problem, config.budgets)
            row.set('oracle', oracle)
            row.set('oracle_agrees', oracle == value)
            row.check(oracle == value)
        else:
            row.set('oracle', None)
    sys.stdout.write(report.render_rows())
    if config.output is not None:
        _emit(serialize_path(path), config.output)
    return EXIT_OK if report.passed else EXIT_FAIL


def _load_problem(path: str) -> ReconfigProblem:
    text = read_text(path)
    reader = RecordReader(text)
    reader.next('csp')
    second = reader.peek()
    if second is not None and second.keyword == 'structured':
        base_dir = os.path.dirname(path) or '.'
        return parse_reduced(text, base_dir)[1]
    return parse_problem(text)


def cmd_verify(args, config: ExperimentConfig) -> int:
    problem = _load_problem(args.problem)
    steps = parse_path(read_text(args.path), problem.instance.num_vars)
    diagnostic = explain_path_failure(problem, steps, args.threshold)
    if diagnostic is None:
        sys.stdout.write(f"pass steps={len(steps)}\n")
        return EXIT_OK
    sys.stdout.write(f"fail {diagnostic}\n")
    return EXIT_FAIL


def cmd_suite(args, config: ExperimentConfig) -> int:
    report = run_suite(config, args.only)
    return _finish(report)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s',
    )
    try:
        config = config_from_args(args)
        return args.handler(args, config)
    except BudgetExceededError as e:
        sys.stderr.write(f"budget exceeded: {e.failure_msg}\n")
        return EXIT_BUDGET
    except (
        MalformedInputError,
        PreconditionError,
        UnsupportedFormError,
    ) as e:
        sys.stderr.write(f"error: {e.failure_msg}\n")
        return EXIT_USAGE
    except ReconfigToolError as e:
        sys.stderr.write(f"error: {e.failure_msg}\n")
        return EXIT_FAIL
    except OSError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
