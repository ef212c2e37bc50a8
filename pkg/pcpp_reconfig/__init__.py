from .config import Budgets, CodeSpec, ExperimentConfig
from .csp import Constraint, CspInstance
from .ecc import LinearCode, hadamard_code
from .errors import BudgetExceededError, MalformedInputError, ReconfigToolError
from .parallel import (
    Km24Instance,
    LayeredAssignment,
    ParallelPcppSystem,
    km24_build,
    parallelize_to_csp,
)
from .path import ReconfigPath, ReconfigProblem
from .pcpp import Circuit, ScalarPcpp, build_proximity_pcpp
from .reconfig import bottleneck_path, exact_path, reconfig_value, verify_path
from .version import __version__, __version_info__

__all__ = [
    '__version__',
    '__version_info__',
    'Budgets',
    'BudgetExceededError',
    'Circuit',
    'CodeSpec',
    'Constraint',
    'CspInstance',
    'ExperimentConfig',
    'Km24Instance',
    'LayeredAssignment',
    'LinearCode',
    'MalformedInputError',
    'ParallelPcppSystem',
    'ReconfigPath',
    'ReconfigProblem',
    'ReconfigToolError',
    'ScalarPcpp',
    'bottleneck_path',
    'build_proximity_pcpp',
    'exact_path',
    'hadamard_code',
    'km24_build',
    'parallelize_to_csp',
    'reconfig_value',
    'verify_path',
]
