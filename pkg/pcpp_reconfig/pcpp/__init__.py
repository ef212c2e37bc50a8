from .audit import (
    SoundnessAudit,
    audit_completeness,
    audit_soundness,
    far_mask,
    find_accepting_proof,
    is_delta_far,
    run_soundness_audit,
)
from .circuit import Circuit, parse_circuit, serialize_circuit
from .proximity import build_proximity_pcpp, proximity_soundness_bound
from .verifier import (
    ScalarPcpp,
    check_parallelizable,
    parse_pcpp,
    serialize_pcpp,
)

__all__ = [
    'Circuit',
    'ScalarPcpp',
    'SoundnessAudit',
    'audit_completeness',
    'audit_soundness',
    'build_proximity_pcpp',
    'check_parallelizable',
    'far_mask',
    'find_accepting_proof',
    'is_delta_far',
    'parse_circuit',
    'parse_pcpp',
    'proximity_soundness_bound',
    'run_soundness_audit',
    'serialize_circuit',
    'serialize_pcpp',
]
