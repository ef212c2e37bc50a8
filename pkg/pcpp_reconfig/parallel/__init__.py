from .binarize import (
    binarize_assignment,
    binarize_csp,
    binarize_problem,
    debinarize_assignment,
)
from .km24 import (
    Km24Instance,
    completeness_csp_path,
    completeness_path,
    export_reduced,
    extract_assignment,
    km24_build,
    km24_circuit,
    load_system_file,
    parse_reduced,
    parse_system_file,
    serialize_km24_system,
)
from .reduction import (
    indicator_reconfig_value,
    layered_reconfig_value,
    parallelize_to_csp,
    stack_to_csp,
)
from .system import (
    LayeredAssignment,
    ParallelPcppSystem,
    lift_scalars,
    parallel_accept_prob,
    parallel_value,
    parse_micro_system,
    serialize_micro_system,
)

__all__ = [
    'Km24Instance',
    'LayeredAssignment',
    'ParallelPcppSystem',
    'binarize_assignment',
    'binarize_csp',
    'binarize_problem',
    'completeness_csp_path',
    'completeness_path',
    'debinarize_assignment',
    'export_reduced',
    'extract_assignment',
    'indicator_reconfig_value',
    'km24_build',
    'km24_circuit',
    'layered_reconfig_value',
    'lift_scalars',
    'load_system_file',
    'parallel_accept_prob',
    'parallel_value',
    'parallelize_to_csp',
    'parse_micro_system',
    'parse_reduced',
    'parse_system_file',
    'serialize_km24_system',
    'serialize_micro_system',
    'stack_to_csp',
]
