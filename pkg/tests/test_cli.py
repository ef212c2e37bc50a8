import pytest

from pcpp_reconfig.cli import build_parser, main
from pcpp_reconfig.csp import Constraint, CspInstance
from pcpp_reconfig.generators import equality_chain
from pcpp_reconfig.path import ReconfigProblem, serialize_problem

from .common import fixture_path, or_source


def _write_problem(tmp_path, name, problem):
    path = tmp_path / name
    path.write_text(serialize_problem(problem))
    return str(path)


def test_gen_equality_chain(capsys):
    assert main(['gen', 'equality-chain', 'n=2']) == 0
    out = capsys.readouterr().out
    assert out == serialize_problem(equality_chain(2))


def test_gen_random_is_seeded(capsys):
    args = ['gen', 'random-csp', 'n=3', 'alphabet=3', 'm=4', '--seed', '5']
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert first.startswith('csp 3 3 4\n')


@pytest.mark.parametrize(
    'params', [['n=2', 'colour=red'], ['n=two'], ['n2'], ['n=1']]
)
def test_gen_bad_params(params, capsys):
    assert main(['gen', 'equality-chain'] + params) == 2
    assert 'error:' in capsys.readouterr().err


def test_gen_to_file(tmp_path):
    out = tmp_path / 'chain.rcp'
    assert main(['gen', 'or-chain', 'n=4', '--out', str(out)]) == 0
    assert out.read_text().startswith('csp 4 2 3\n')


def test_recval(tmp_path, capsys):
    problem = _write_problem(tmp_path, 'eq2.rcp', equality_chain(2))
    path_file = tmp_path / 'path.txt'
    assert main(['recval', problem, '--out', str(path_file)]) == 0
    out = capsys.readouterr().out
    assert out.startswith('experiment=recval status=pass seed=0 ')
    assert ' value=0 ' in out
    assert ' oracle_agrees=true ' in out
    assert path_file.read_text().startswith('step 0 0\n')


def test_recval_budget(capsys):
    problem = fixture_path('problems', 'equality3.rcp')
    assert main(['recval', problem, '--budget-states', '4']) == 3
    assert 'budget exceeded' in capsys.readouterr().err


def test_verify(tmp_path, capsys):
    problem = fixture_path('problems', 'or3.rcp')
    good = tmp_path / 'good.txt'
    good.write_text('step 1 0 1\nstep 1 1 1\nstep 0 1 1\nstep 0 1 0\n')
    assert main(['verify', problem, str(good)]) == 0
    assert capsys.readouterr().out == 'pass steps=4\n'

    bad = tmp_path / 'bad.txt'
    bad.write_text('step 1 0 1\nstep 0 0 1\nstep 0 1 1\nstep 0 1 0\n')
    assert main(['verify', problem, str(bad)]) == 1
    assert capsys.readouterr().out.startswith('fail step 1 has value 1/2')
    assert main(['verify', problem, str(bad), '--threshold', '1/2']) == 0


def test_verify_missing_file(tmp_path):
    problem = fixture_path('problems', 'or3.rcp')
    assert main(['verify', problem, str(tmp_path / 'nope.txt')]) == 2


def test_reduce_and_verify(tmp_path, capsys):
    source = _write_problem(tmp_path, 'or.rcp', or_source())
    out_dir = tmp_path / 'out'
    assert main(['reduce', source, '--with-path', '--out', str(out_dir)]) == 0
    summary = capsys.readouterr().out.splitlines()
    assert 't=4' in summary
    assert 'variables=17' in summary
    assert 'alphabet=16' in summary
    for name in ('source.rcp', 'system.psys', 'reduced.rcp', 'path.txt'):
        assert (out_dir / name).exists()
    reduced = str(out_dir / 'reduced.rcp')
    assert main(['verify', reduced, str(out_dir / 'path.txt')]) == 0
    assert capsys.readouterr().out.startswith('pass ')


def test_reduce_non_binary(tmp_path, capsys):
    con = Constraint.table((0,), [(1,), (2,)])
    problem = ReconfigProblem(CspInstance(1, 4, (con,)), (1,), (2,))
    source = _write_problem(tmp_path, 'quad.rcp', problem)
    out_dir = tmp_path / 'out'
    assert main(['reduce', source, '--out', str(out_dir)]) == 2
    assert '--binarize' in capsys.readouterr().err
    assert main(['reduce', source, '--binarize', '--out', str(out_dir)]) == 0
    assert 'code=hadamard 2' in capsys.readouterr().out.splitlines()


def test_reduce_unsupported_delta(tmp_path):
    source = _write_problem(tmp_path, 'or.rcp', or_source())
    args = ['reduce', source, '--delta', '1/4', '--out', str(tmp_path)]
    assert main(args) == 2


def test_audit_default_verifier(capsys):
    circuit = fixture_path('circuits', 'and2.circuit')
    assert main(['audit', '--circuit', circuit]) == 0
    out = capsys.readouterr().out
    assert 'measured=1/2' in out
    assert 'kappa=1/2' in out


def test_audit_accept_all(capsys):
    circuit = fixture_path('circuits', 'and2.circuit')
    verifier = fixture_path('verifiers', 'accept-all.pcpp')
    assert main(['audit', verifier, '--circuit', circuit]) == 1
    assert 'measured=1 ' in capsys.readouterr().out


def test_suite_subset(capsys):
    assert main(['suite', '--only', 'ecc', 'structure']) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0].startswith('experiment')
    assert 'structure' in out


def test_parser_rejects_decimal_delta(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(['suite', '--delta', '0.25'])


@pytest.mark.parametrize(
    'argv',
    [
        ['--seed', '7', 'gen', 'random-csp'],
        ['gen', 'random-csp', '--seed', '7'],
    ],
)
def test_global_flags_survive_subcommand(argv):
    args = build_parser().parse_args(argv)
    assert args.seed == 7
    assert args.reps == 1
    assert args.delta is None


def test_subcommand_flag_overrides_global():
    args = build_parser().parse_args(
        ['--seed', '7', '-v', 'gen', 'random-csp', '--seed', '8']
    )
    assert args.seed == 8
    assert args.verbose


def test_seed_before_subcommand(capsys):
    params = ['random-csp', 'n=3', 'alphabet=3', 'm=4']
    assert main(['--seed', '5'] + ['gen'] + params) == 0
    before = capsys.readouterr().out
    assert main(['gen'] + params + ['--seed', '5']) == 0
    assert before == capsys.readouterr().out


def test_recval_unicode_digit(tmp_path, capsys):
    problem = tmp_path / 'bad.rcp'
    problem.write_text('csp ² 2 1\n', encoding='utf-8')
    assert main(['recval', str(problem)]) == 2
    err = capsys.readouterr().err
    assert "line 1, field 'num_vars'" in err
    assert 'not a decimal integer' in err


def test_recval_invalid_utf8(tmp_path, capsys):
    problem = tmp_path / 'bad.rcp'
    problem.write_bytes(b'csp 2 2 1\n\xff\xfe\n')
    assert main(['recval', str(problem)]) == 2
    assert 'not UTF-8 text' in capsys.readouterr().err
