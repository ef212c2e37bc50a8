"""
Report rows produced by the harness: one machine-readable ``key=value``
line per experiment, plus a human-readable table.
"""
import enum
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Tuple

from .config import ExperimentConfig, config_hash

__all__ = ['Status', 'ReportRow', 'Report', 'format_value']

logger = logging.getLogger(__name__)


@enum.unique
class Status(enum.Enum):
    PASS = 'pass'
    FAIL = 'fail'
    INFO = 'info'


def format_value(value: Any) -> str:
    """
    Render a value as a single whitespace-free token.
    """
    if value is None:
        return '-'
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, enum.Enum):
        return str(value.value)
    if isinstance(value, (tuple, list)):
        return ','.join(format_value(v) for v in value) or '()'
    if isinstance(value, Fraction):
        return str(value)
    return '_'.join(str(value).split())


@dataclass(frozen=True)
class ReportRow:
    experiment: str
    status: Status
    seed: int
    config_hash: str
    elapsed: float
    """
    Wall-clock seconds.
    """
    timestamp: datetime
    values: Tuple[Tuple[str, str], ...] = ()

    def render(self) -> str:
        parts = [
            f"experiment={self.experiment}",
            f"status={self.status.value}",
            f"seed={self.seed}",
            f"config={self.config_hash}",
            f"elapsed={self.elapsed:.3f}",
        ]
        parts.extend(f"{k}={v}" for k, v in self.values)
        parts.append(f"time={self.timestamp.isoformat()}")
        return ' '.join(parts)


@dataclass
class _PendingRow:
    status: Status = Status.INFO
    values: Dict[str, str] = field(default_factory=dict)

    def set(self, key: str, value: Any):
        self.values[key] = format_value(value)

    def check(self, ok: bool):
        """
        Record a pass/fail verdict; a failure is never overwritten.
        """
        if self.status is not Status.FAIL:
            self.status = Status.PASS if ok else Status.FAIL


class Report:
    """
    Collects rows for one harness run. Every row carries the seed and the
    configuration hash of the run.
    """

    def __init__(self, config: ExperimentConfig):
        self.config = config
        self.config_hash = config_hash(config)
        self.rows: List[ReportRow] = []

    def add(
        self,
        experiment: str,
        status: Status,
        values: Optional[Dict[str, Any]] = None,
        elapsed: float = 0.0,
    ) -> ReportRow:
        row = ReportRow(
            experiment=experiment,
            status=status,
            seed=self.config.seed,
            config_hash=self.config_hash,
            elapsed=elapsed,
            timestamp=datetime.now(timezone.utc),
            values=tuple(
                (k, format_value(v)) for k, v in (values or {}).items()
            ),
        )
        self.rows.append(row)
        logger.info(f"Report row: {row.render()}")
        return row

    @contextmanager
    def timed(self, experiment: str) -> Iterator[_PendingRow]:
        """
        Time a block and add its row when it completes normally.
        """
        pending = _PendingRow()
        start = time.perf_counter()
        yield pending
        elapsed = time.perf_counter() - start
        row = ReportRow(
            experiment=experiment,
            status=pending.status,
            seed=self.config.seed,
            config_hash=self.config_hash,
            elapsed=elapsed,
            timestamp=datetime.now(timezone.utc),
            values=tuple(pending.values.items()),
        )
        self.rows.append(row)
        logger.info(f"Report row: {row.render()}")

    @property
    def passed(self) -> bool:
        return all(row.status is not Status.FAIL for row in self.rows)

    def render_rows(self) -> str:
        return ''.join(row.render() + '\n' for row in self.rows)

    def render_table(self) -> str:
        header = ('experiment', 'status', 'elapsed', 'details')
        body = [
            (
                row.experiment,
                row.status.value,
                f"{row.elapsed:.3f}s",
                ' '.join(f"{k}={v}" for k, v in row.values),
            )
            for row in self.rows
        ]
        widths = [
            max(len(line[col]) for line in [header] + body)
            for col in range(3)
        ]
        lines = []
        for line in [header] + body:
            cells = [line[col].ljust(widths[col]) for col in range(3)]
            lines.append('  '.join(cells + [line[3]]).rstrip())
        return '\n'.join(lines) + '\n'

    def write(self, path: str):
        with open(path, 'w') as f:
            f.write(self.render_rows())
