"""
Building states from forbidden events
=====================================

Start from a list of events that must never happen, and ask which state
obeys them while keeping one more event alive.  For three qubits the
forbidden list pins the state down to a single ray, and the surviving
event — everyone measuring U and everyone seeing outcome 1 — carries a
small but strictly positive probability q.  No classical model can do
that (demo 02 makes this exact), which is what the veto protocol runs on.
"""

from hardyveto import (
    HardySpec,
    ObservablePair,
    Setting,
    Variant,
    build_hardy_state,
    build_veto_state,
    marginal_probability,
    maximize_q_3qubit,
    q_value_3qubit,
    verify_genuine_entanglement,
    verify_hardy_conditions,
    veto_observables,
    zero_conditions,
)

# ---------------------------------------------------------------------------
# 1. A custom three-qubit construction
# ---------------------------------------------------------------------------
# Each party measures one of two bases, U or V.  The observables are fixed
# by one number per party: the overlap alpha between the U and V outcome-1
# directions.  Pick three unequal alphas to keep things generic.

alphas = (0.50, 0.55, 0.60)
spec = HardySpec.qubits(3, Variant.MODIFIED)
observables = [ObservablePair.qubit_from_alpha(a) for a in alphas]

print("forbidden events (cyclic pair conditions plus the all-V row):")
for cond in zero_conditions(spec):
    print(f"  {cond.label()}")

built = build_hardy_state(spec, observables)
print(f"\nzero-condition span has a {built.spec.n}-qubit complement of "
      f"dimension 1 -> the state is unique")
print(f"success probability q = {built.q:.10f}")

# The report re-measures every condition on the constructed state.
report = verify_hardy_conditions(built.state, observables, spec)
print("\ncondition check on the built state:")
for entry in report.entries:
    print(f"  {entry.label:22s} p = {entry.probability:.3e}   "
          f"{'ok' if entry.passed else 'VIOLATED'}")
print(f"overall: {'passed' if report.passed else 'failed'}, q = {report.q:.10f}")

# A closed form gives the same number without building anything.
print(f"closed form agreement: {abs(q_value_3qubit(alphas) - built.q):.2e}")

# ---------------------------------------------------------------------------
# 2. How large can q get?
# ---------------------------------------------------------------------------
# Sweeping the three alphas, the maximum lands at a symmetric point.

best_q, best_alphas = maximize_q_3qubit()
print(f"\nmaximal q over all three-qubit observable choices: {best_q:.7f}")
print(f"attained at alphas = ({best_alphas[0]:.6f}, {best_alphas[1]:.6f}, "
      f"{best_alphas[2]:.6f})")

# ---------------------------------------------------------------------------
# 3. The protocol family
# ---------------------------------------------------------------------------
# The veto protocol fixes the observables to U = sigma_z, V = -sigma_x and
# uses one symmetric n-qubit state per jury size.  Its q follows the exact
# law 1 / (2^n (2^n - 1)), and a handful of marginals drive everything in
# demos 03 and 04.

print("\n n |     q        1/(2^n(2^n-1)) |  P(u=+1)   P(v=+1)   "
      "P(all u=-1)  P(all v=+1)")
for n in range(2, 7):
    state = build_veto_state(n)
    obs = veto_observables(n)
    ctx_u = [Setting.U] * n
    ctx_v = [Setting.V] * n
    q = marginal_probability(state, obs, ctx_u, {i: 1 for i in range(n)})
    p_u = marginal_probability(state, obs, ctx_u, {0: 1})
    p_v = marginal_probability(state, obs, ctx_v, {0: 1})
    all_u_minus = marginal_probability(state, obs, ctx_u, {i: 2 for i in range(n)})
    all_v_plus = marginal_probability(state, obs, ctx_v, {i: 1 for i in range(n)})
    formula = 1.0 / (2**n * (2**n - 1))
    print(f" {n} | {q:.8f}   {formula:.8f}  | {p_u:.6f}  {p_v:.6f}   "
          f"{all_u_minus:.6f}     {all_v_plus:.6f}")

# Note the pattern: a lone in-favor member answers +1 rarely (1/(2(2^n-1))),
# a vetoing member often (2^(n-1)/(2^n-1)); with everyone in favor the
# all-(-1) row dominates, and with everyone vetoing the all-(+1) row occurs
# at rate 1/(2^n-1) while the all-(-1) row never occurs at all.

# ---------------------------------------------------------------------------
# 4. Entanglement certificate
# ---------------------------------------------------------------------------
# Every bipartition of the protocol state has Schmidt rank 2: it is
# genuinely multipartite entangled, not a product lurking behind a cut.

state4 = build_veto_state(4)
ent = verify_genuine_entanglement(state4)
print(f"\nn=4 protocol state, rank across each bipartition:")
for cut, rank in ent.cut_ranks:
    inside = ",".join(str(i) for i in cut)
    print(f"  parties {{{inside}}} vs rest : {rank}")
print(f"genuinely multipartite entangled: {ent.genuinely_entangled}")

# And the conditions hold verbatim on it, including every ordered pair
# (the state is permutation symmetric, so the cyclic conditions spread to
# all pairs for free).
rep4 = verify_hardy_conditions(state4, veto_observables(4), HardySpec.qubits(4))
worst = max(e.probability for e in rep4.entries)
print(f"largest forbidden-event probability at n=4: {worst:.2e} "
      f"({len(rep4.entries)} conditions checked)")
