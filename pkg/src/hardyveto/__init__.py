"""Hardy-paradox states, nonlocality bounds, and an anonymous veto protocol.

The package splits into four layers:

- :mod:`hardyveto.quantum` — states, measurement pairs, Born-rule machinery;
- :mod:`hardyveto.hardy` — zero-condition families, state construction, and
  the certificates (conditions, entanglement) that go with them;
- :mod:`hardyveto.bounds` — exact classical (LHV) and no-signaling ceilings
  on the success probability, over rational arithmetic;
- :mod:`hardyveto.protocol` — the n-party anonymous veto protocol built on
  the cyclic zero conditions, with its source witness and privacy audit.

``hardyveto.cli`` exposes the same functionality as the ``hardy-veto``
command.
"""

from .bounds import (
    BehaviorTable,
    DeterministicStrategy,
    deterministic_behavior,
    enumerate_lhv_max_q,
    max_q_nosignaling,
    quantum_behavior,
)
from .hardy import (
    ConditionReport,
    DegenerateObservables,
    EntanglementReport,
    HardySpec,
    HardyState,
    HardySubspace,
    Variant,
    ZeroCondition,
    build_hardy_state,
    build_hardy_subspace,
    build_veto_state,
    maximize_q_3qubit,
    q_value_3qubit,
    verify_genuine_entanglement,
    verify_hardy_conditions,
    veto_observables,
    zero_conditions,
)
from .protocol import (
    PrivacyAuditReport,
    ProtocolParams,
    RatioMode,
    RefereeTranscript,
    Verdict,
    Vote,
    WitnessReport,
    parse_votes,
    privacy_audit,
    simulate,
    target_ratio,
)
from .quantum import (
    ObservablePair,
    Setting,
    StateVector,
    born_probability,
    marginal_probability,
    outcome_distribution,
    schmidt_rank,
)
from .rational_lp import Infeasible, LinearProgram, LPSolution, Unbounded, simplex_solve

__version__ = "0.1.0"

__all__ = [
    "BehaviorTable",
    "ConditionReport",
    "DegenerateObservables",
    "DeterministicStrategy",
    "EntanglementReport",
    "HardySpec",
    "HardyState",
    "HardySubspace",
    "Infeasible",
    "LPSolution",
    "LinearProgram",
    "ObservablePair",
    "PrivacyAuditReport",
    "ProtocolParams",
    "RatioMode",
    "RefereeTranscript",
    "Setting",
    "StateVector",
    "Unbounded",
    "Variant",
    "Verdict",
    "Vote",
    "WitnessReport",
    "ZeroCondition",
    "born_probability",
    "build_hardy_state",
    "build_hardy_subspace",
    "build_veto_state",
    "deterministic_behavior",
    "enumerate_lhv_max_q",
    "marginal_probability",
    "max_q_nosignaling",
    "maximize_q_3qubit",
    "outcome_distribution",
    "parse_votes",
    "privacy_audit",
    "q_value_3qubit",
    "quantum_behavior",
    "schmidt_rank",
    "simplex_solve",
    "simulate",
    "target_ratio",
    "verify_genuine_entanglement",
    "verify_hardy_conditions",
    "veto_observables",
    "zero_conditions",
]
