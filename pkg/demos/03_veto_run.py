"""
A jury votes without raising hands
==================================

One referee, three jury members, a million shared states.  Everyone who
is in favor measures U, everyone who vetoes measures V, and nobody tells
anybody which.  The referee never learns the measurement choices — only
outcome lists at timings the members agree to reveal — yet ends up with a
three-way verdict: passed unanimously, vetoed by a proper subset, or
vetoed by everyone.  This demo runs the whole pipeline once per ballot
class and then pulls a transcript apart.
"""

from hardyveto import ProtocolParams, simulate

params = ProtocolParams(n=3, rounds=1_000_000, p_test=0.05, seed=42)

# ---------------------------------------------------------------------------
# 1. Three ballots, three verdicts
# ---------------------------------------------------------------------------
# The verdict rests on two row counts in the revealed matrix.  All-(+1)
# rows can only appear when the vote was unanimous (either way): any mix
# of a vetoing and a favoring member forbids them outright.  Among the
# unanimous cases, all-(-1) rows appear only when everyone favored — an
# all-veto context never produces one.

for votes in ("FFF", "FVF", "VVV"):
    t = simulate(params, votes)
    print(f"ballot {votes}: common rows {t.common_count:6d}, "
          f"all-(+1) {t.count_plus:5d}, all-(-1) {t.count_minus:6d} "
          f"-> {t.verdict.value}")

# The expected all-(+1) frequency under unanimous favor is q = 1/56 of the
# common rows; under unanimous veto it is 1/7 of the post-sift rows.  Both
# clear the zero-noise thresholds (3) by orders of magnitude.

# ---------------------------------------------------------------------------
# 2. Anatomy of a transcript
# ---------------------------------------------------------------------------

t = simulate(params, "FVF")
print("\ntranscript of the FVF run:")
print(f"  params echo          : n={t.params['n']}, rounds={t.params['rounds']}, "
      f"seed={t.params['seed']}")
print(f"  witness              : passed={t.witness.passed}, "
      f"q estimate {t.witness.q_estimate:.6f} vs expected "
      f"{t.witness.q_expected:.6f} (+- {t.witness.q_sigma:.6f})")
for e in t.witness.entries[:3]:
    print(f"      {e.label:24s} freq {e.frequency:.2e} expected {e.expected:.2e}")
print(f"      ... {len(t.witness.entries)} checks total")
print(f"  submitted lengths    : {t.privacy['submitted_lengths']} "
      "(equal by construction)")
print(f"  common timings       : {t.common_count}")
print(f"  matrix               : {t.matrix.shape[0]} rows x "
      f"{t.matrix.shape[1]} members, entries +-1, "
      f"queried in a random order")
print(f"  all-equal row counts : +1 rows {t.count_plus}, -1 rows {t.count_minus}")
print(f"  verdict              : {t.verdict.value}")

# The serialized transcript is a vote-blind summary — counts, lengths,
# pairwise statistics — never a vote and never a measurement setting.
blob = t.to_json()
print(f"  JSON size            : {len(blob)} bytes, "
      f"votes_hidden={t.to_dict()['votes_hidden']}")

# ---------------------------------------------------------------------------
# 3. Determinism
# ---------------------------------------------------------------------------
# All randomness flows from params.seed through purpose-split streams
# (designation, sampling, per-member sift and reduction, query order), so
# a rerun is byte-identical and a reseed is not.

again = simulate(params, "FVF").to_json()
other = simulate(ProtocolParams(n=3, rounds=1_000_000, p_test=0.05, seed=43),
                 "FVF").to_json()
print(f"\nsame seed  -> identical transcript JSON: {blob == again}")
print(f"fresh seed -> different transcript JSON: {blob != other}")

# ---------------------------------------------------------------------------
# 4. A noisy source
# ---------------------------------------------------------------------------
# With outcome-flip noise the forbidden rows leak at O(noise^n).  The
# thresholds are then derived per run: half the smallest all-equal signal
# a passing unanimity class would produce at the realized common count.
# The verdicts survive 1% noise comfortably.

noisy = ProtocolParams(n=3, rounds=1_000_000, p_test=0.05, noise=0.01, seed=7)
for votes in ("FFF", "FVF", "VVV"):
    t = simulate(noisy, votes)
    print(f"noise 1%, ballot {votes}: +1 rows {t.count_plus:5d} "
          f"(tau {t.params['tau_plus']:5d}), -1 rows {t.count_minus:6d} "
          f"(tau {t.params['tau_minus']:5d}) -> {t.verdict.value}")

# ---------------------------------------------------------------------------
# 5. A source that fails the witness
# ---------------------------------------------------------------------------
# Test rounds use publicly announced random settings, so the members can
# verify the source before trusting it with a ballot.  A heavily
# depolarized source is caught and the run aborts with no verdict.

bad = ProtocolParams(n=3, rounds=200_000, p_test=0.05, noise=0.30, seed=1)
t = simulate(bad, "FFF")
print(f"\nnoise 30%: aborted={t.aborted}, verdict={t.verdict}, "
      f"witness passed={t.witness.passed}")
worst = min(t.witness.entries, key=lambda e: e.expected - e.frequency)
print(f"most violated check: {worst.label} at frequency {worst.frequency:.4f} "
      f"(advertised {worst.expected:.4f})")
