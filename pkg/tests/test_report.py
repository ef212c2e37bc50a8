from fractions import Fraction

import pytest
from freezegun import freeze_time

from pcpp_reconfig.config import ExperimentConfig, config_hash
from pcpp_reconfig.errors import MalformedInputError
from pcpp_reconfig.report import Report, Status, format_value
from pcpp_reconfig.suite import CRITERIA, run_suite


@pytest.mark.parametrize(
    'value,expected',
    [
        (None, '-'),
        (True, 'true'),
        (False, 'false'),
        (Fraction(3, 8), '3/8'),
        (Fraction(2), '2'),
        ((1, 0, 1), '1,0,1'),
        ((), '()'),
        (Status.PASS, 'pass'),
        ('two words', 'two_words'),
        (17, '17'),
    ],
)
def test_format_value(value, expected):
    assert format_value(value) == expected


@freeze_time('2024-03-01 12:00:00')
def test_row_render():
    config = ExperimentConfig(seed=9)
    report = Report(config)
    row = report.add('demo', Status.PASS, {'value': Fraction(1, 2)})
    assert row.render() == (
        f"experiment=demo status=pass seed=9 config={config_hash(config)} "
        f"elapsed=0.000 value=1/2 time=2024-03-01T12:00:00+00:00"
    )
    assert report.render_rows() == row.render() + '\n'


def test_timed_rows():
    report = Report(ExperimentConfig())
    with report.timed('first') as row:
        row.set('n', 3)
    with report.timed('second') as row:
        row.check(False)
        row.check(True)
    assert [r.status for r in report.rows] == [Status.INFO, Status.FAIL]
    assert report.rows[0].values == (('n', '3'),)
    assert report.rows[1].elapsed >= 0
    assert not report.passed


def test_timed_row_dropped_on_error():
    report = Report(ExperimentConfig())
    with pytest.raises(RuntimeError):
        with report.timed('broken'):
            raise RuntimeError('boom')
    assert report.rows == []
    assert report.passed


def test_render_table():
    report = Report(ExperimentConfig())
    report.add('a', Status.PASS, {'x': 1})
    report.add('longer-name', Status.FAIL)
    lines = report.render_table().splitlines()
    assert lines[0].split() == ['experiment', 'status', 'elapsed', 'details']
    assert lines[1].split() == ['a', 'pass', '0.000s', 'x=1']
    assert lines[2].split() == ['longer-name', 'fail', '0.000s']
    assert lines[1].index('pass') == lines[2].index('fail')


def test_write(tmp_path):
    report = Report(ExperimentConfig())
    report.add('a', Status.INFO)
    out = tmp_path / 'report.txt'
    report.write(str(out))
    assert out.read_text() == report.render_rows()


def test_suite_unknown_check():
    with pytest.raises(MalformedInputError, match='nonsense'):
        run_suite(ExperimentConfig(), ['nonsense'])


def test_suite_subset():
    report = run_suite(ExperimentConfig(seed=1), ['ecc', 'structure'])
    assert [row.experiment for row in report.rows] == ['ecc', 'structure']
    assert report.passed
    assert set(CRITERIA) >= {'ecc', 'structure', 'km24'}
