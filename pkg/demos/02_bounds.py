"""
Classical impossibility, non-signaling headroom
===============================================

The same forbidden-event lists from demo 01, viewed as constraints on
correlations rather than on states.  Classically the success event is not
just unlikely, it is impossible: every local deterministic strategy that
respects the zero conditions has q = 0 exactly.  At the opposite extreme,
boxes limited only by no-signaling reach q as large as 1/n.  Quantum
states live strictly between the two, which is the whole point.
"""

from hardyveto import (
    HardySpec,
    Variant,
    build_veto_state,
    enumerate_lhv_max_q,
    marginal_probability,
    max_q_nosignaling,
    maximize_q_3qubit,
    veto_observables,
)
from hardyveto.quantum import Setting

# ---------------------------------------------------------------------------
# 1. Local hidden variables score exactly zero
# ---------------------------------------------------------------------------
# A deterministic strategy fixes each party's answer to U and to V up front.
# Suppose every party answers U with 1, so the success event fires.  The
# pair condition "u_i = 1 & v_j = 1" then forces every V answer to 2 — but
# all parties answering V with 2 is itself forbidden.  The enumeration
# below confirms there is no way out, for every shape we can enumerate.

print("shape          variant        LHV max   sample optimal strategy")
cases = [
    (HardySpec.qubits(n, v), f"{n} qubits")
    for n in (2, 3, 4)
    for v in (Variant.MODIFIED, Variant.CONVENTIONAL)
] + [
    (HardySpec(2, (3, 3), v), "2 qutrits")
    for v in (Variant.MODIFIED, Variant.CONVENTIONAL)
]
for spec, shape in cases:
    value, strategy = enumerate_lhv_max_q(spec)
    print(f"{shape:12s}   {spec.variant.value:12s}   {str(value):6s}    "
          f"responses (u,v) per party: {strategy.responses}")

# The witness strategies all satisfy the zero conditions, and all of them
# answer U with 2 somewhere — q = 0 is the best classical physics can do.

# ---------------------------------------------------------------------------
# 2. The non-signaling ceiling
# ---------------------------------------------------------------------------
# Replace "local" by "no faster-than-light signaling" and solve the exact
# rational LP.  The maxima come out as clean fractions.

print("\nshape          variant        NS max")
ns_cases = [
    (HardySpec.qubits(2, Variant.MODIFIED), "2 qubits"),
    (HardySpec.qubits(2, Variant.CONVENTIONAL), "2 qubits"),
    (HardySpec.qubits(3, Variant.MODIFIED), "3 qubits"),
    (HardySpec.qubits(3, Variant.CONVENTIONAL), "3 qubits"),
    (HardySpec.qubits(4, Variant.MODIFIED), "4 qubits"),
    (HardySpec(2, (3, 3), Variant.MODIFIED), "2 qutrits"),
]
ns_value = {}
for spec, shape in ns_cases:
    value, table = max_q_nosignaling(spec)
    table.validate()  # the optimizer must return a genuine behavior
    ns_value[(spec.n, spec.dims, spec.variant)] = value
    print(f"{shape:12s}   {spec.variant.value:12s}   {value}")

# Under the MODIFIED conditions the qubit ceiling is 1/n; the CONVENTIONAL
# conditions are looser and stay at 1/2.

# ---------------------------------------------------------------------------
# 3. Quantum strictly in between
# ---------------------------------------------------------------------------
# The protocol states realize 0 < q < NS max.  For three qubits even the
# best possible observables stay a factor ~18 below the ceiling.

best_q, _ = maximize_q_3qubit()
print(f"\n3-qubit quantum maximum {best_q:.7f} vs NS ceiling "
      f"{ns_value[(3, (2, 2, 2), Variant.MODIFIED)]} — a strict gap")

print("\n n |  LHV   <   q(veto state)   <   NS max")
for n in (2, 3, 4):
    spec = HardySpec.qubits(n, Variant.MODIFIED)
    state = build_veto_state(n)
    q = marginal_probability(
        state, veto_observables(n), [Setting.U] * n, {i: 1 for i in range(n)}
    )
    ns = ns_value[(n, (2,) * n, Variant.MODIFIED)]
    lhv, _ = enumerate_lhv_max_q(spec)
    assert float(lhv) < q < float(ns)
    print(f" {n} |   {lhv}    <   {q:.8f}     <   {ns}")
