"""The veto protocol: sifting arithmetic, round sampling, verdicts, privacy.

Exact sift constants are hand-derived from the state's marginals (keep
probability 3/52 for three members, 1/8 under the stated-ratio mode); the
sampler is checked against the zero conditions (forbidden joints must never
occur at zero noise), verdicts against all three vote patterns, and the
referee's transcript against byte-level determinism in the seed.
"""

import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardyveto.hardy import build_veto_state
from hardyveto.protocol import (
    EmptyMatrix,
    InsufficientRuns,
    InsufficientTestData,
    ListTooShort,
    PartyLedger,
    ProtocolParams,
    RatioMode,
    RatioUnreachable,
    Verdict,
    Vote,
    designate_rounds,
    parse_votes,
    privacy_audit,
    privacy_sift,
    referee_collect,
    referee_intersect,
    referee_verdict,
    row_counts,
    run_rounds,
    sift_keep_probability,
    simulate,
    target_ratio,
    uniform_reduce,
)
from hardyveto.protocol import test_round_check as witness_check
from hardyveto.quantum import tensor_product


def fast_params(**kw):
    """Small, witness-free run for unit tests; seeds vary per test."""
    base = dict(n=3, rounds=20000, p_test=0.0, seed=0)
    base.update(kw)
    return ProtocolParams(**base)


# --- Votes and parameters ------------------------------------------------


def test_parse_votes_from_string():
    assert parse_votes("FVF", 3) == (Vote.FAVOR, Vote.VETO, Vote.FAVOR)
    assert parse_votes("fvf", 3) == (Vote.FAVOR, Vote.VETO, Vote.FAVOR)


def test_parse_votes_from_sequence():
    assert parse_votes([Vote.VETO, "favor"], 2) == (Vote.VETO, Vote.FAVOR)


def test_parse_votes_rejects_garbage():
    with pytest.raises(ValueError):
        parse_votes("FXF", 3)
    with pytest.raises(ValueError):
        parse_votes("FF", 3)


@pytest.mark.parametrize(
    "kw",
    [
        dict(n=1, rounds=100),
        dict(n=3, rounds=0),
        dict(n=3, rounds=100, p_test=1.0),
        dict(n=3, rounds=100, p_test=-0.1),
        dict(n=3, rounds=100, noise=1.5),
        dict(n=3, rounds=100, list_length=0),
        dict(n=3, rounds=100, tau_plus=0),
        dict(n=3, rounds=100, witness_tol=0.0),
    ],
)
def test_params_validation(kw):
    with pytest.raises(ValueError):
        ProtocolParams(**kw)


# --- Sifting arithmetic --------------------------------------------------


def test_target_ratio_born_is_the_favor_marginal():
    plus, minus = target_ratio(3)
    assert plus == pytest.approx(1.0 / 14.0, abs=1e-12)
    assert minus == pytest.approx(13.0 / 14.0, abs=1e-12)


def test_target_ratio_paper_is_constant():
    assert target_ratio(3, RatioMode.PAPER_STATED) == (1.0, 6.0)
    assert target_ratio(3, RatioMode.PAPER_STATED, noise=0.3) == (1.0, 6.0)


def test_target_ratio_born_tracks_noise():
    plus0, _ = target_ratio(3, noise=0.0)
    plus1, _ = target_ratio(3, noise=0.2)
    assert plus1 == pytest.approx(0.8 * plus0 + 0.1, abs=1e-12)


def test_keep_probability_exact_values():
    assert sift_keep_probability(3, target_ratio(3)) == pytest.approx(
        3.0 / 52.0, abs=1e-12
    )
    assert sift_keep_probability(
        3, target_ratio(3, RatioMode.PAPER_STATED)
    ) == pytest.approx(1.0 / 8.0, abs=1e-12)


def test_keep_probability_unreachable_ratio():
    with pytest.raises(RatioUnreachable):
        sift_keep_probability(3, (0.9, 0.1))
    with pytest.raises(RatioUnreachable):
        sift_keep_probability(3, (1.0, 0.0))


# --- Round sampling ------------------------------------------------------


def test_designation_is_seeded_and_calibrated():
    a = designate_rounds(100000, 0.05, np.random.default_rng(2))
    b = designate_rounds(100000, 0.05, np.random.default_rng(2))
    assert np.array_equal(a, b)
    assert a.mean() == pytest.approx(0.05, abs=0.005)
    none = designate_rounds(1000, 0.0, np.random.default_rng(2))
    assert not none.any()


def test_run_rounds_shapes_and_settings():
    params = fast_params(rounds=5000)
    data = run_rounds(params, "FVF", np.random.default_rng(3))
    assert data.settings.shape == (5000, 3)
    assert data.outcomes.shape == (5000, 3)
    assert set(np.unique(data.outcomes)) <= {-1, 1}
    vote_rows = ~data.is_test
    assert np.array_equal(
        np.unique(data.settings[vote_rows], axis=0), [[0, 1, 0]]
    )


def test_forbidden_joints_never_occur():
    """At zero noise the sampler cannot emit a zero-condition event."""
    params = fast_params(rounds=200000)
    data = run_rounds(params, "FVF", np.random.default_rng(4))
    plus = data.outcomes == 1
    # the vetoer at +1 with any favoring member at +1 is forbidden
    assert not (plus[:, 1] & plus[:, 0]).any()
    assert not (plus[:, 1] & plus[:, 2]).any()


def test_all_veto_never_all_minus():
    params = fast_params(rounds=100000)
    data = run_rounds(params, "VVV", np.random.default_rng(5))
    assert not np.all(data.outcomes == -1, axis=1).any()


def test_all_favor_success_rate():
    params = fast_params(rounds=500000)
    data = run_rounds(params, "FFF", np.random.default_rng(6))
    rate = np.all(data.outcomes == 1, axis=1).mean()
    assert rate == pytest.approx(1.0 / 56.0, rel=0.15)


def test_round_records_roundtrip():
    params = fast_params(rounds=50)
    data = run_rounds(params, "FVF", np.random.default_rng(7))
    rec = data.record(10)
    assert rec.timing == 10
    assert [s.value for s in rec.settings] == ["U", "V", "U"]
    assert rec.outcomes == tuple(int(x) for x in data.outcomes[10])
    assert len(list(data.records())) == 50


# --- Source witness ------------------------------------------------------


def witness_data(noise=0.0, rounds=80000, state=None, seed=8):
    params = ProtocolParams(n=3, rounds=rounds, p_test=0.5, noise=noise, seed=seed)
    data = run_rounds(
        params, "FFF", np.random.default_rng(seed), state=state
    )
    return data.settings[data.is_test], data.outcomes[data.is_test]


def test_witness_accepts_the_honest_source():
    settings_, outcomes = witness_data()
    report = witness_check(settings_, outcomes, 3)
    assert report.passed
    assert report.q_expected == pytest.approx(1.0 / 56.0, abs=1e-12)
    assert abs(report.q_estimate - report.q_expected) <= 5.0 * report.q_sigma
    # n(n-1) ordered pairs plus the all-V row
    assert len(report.entries) == 7


def test_witness_rejects_a_noisy_source():
    settings_, outcomes = witness_data(noise=0.2)
    report = witness_check(settings_, outcomes, 3)
    assert not report.passed


def test_witness_rejects_a_wrong_state():
    zero = np.array([1.0, 0.0])
    settings_, outcomes = witness_data(state=tensor_product([zero] * 3))
    report = witness_check(settings_, outcomes, 3)
    assert not report.passed


def test_witness_needs_enough_rounds_per_context():
    settings_, outcomes = witness_data(rounds=2000)
    with pytest.raises(InsufficientTestData):
        witness_check(settings_, outcomes, 3, min_per_context=1000)


# --- Sift, reduce, referee -----------------------------------------------


def ledger_from(outcomes, member=0):
    outcomes = np.asarray(outcomes, dtype=np.int8)
    return PartyLedger(
        member=member,
        timings=np.arange(outcomes.size, dtype=np.int64),
        outcomes=outcomes,
    )


def test_favoring_member_keeps_everything():
    ledger = ledger_from([1, -1, 1, -1])
    sifted = privacy_sift(
        ledger, Vote.FAVOR, target_ratio(3), np.random.default_rng(9), 3
    )
    assert sifted is ledger


def test_vetoing_member_keeps_all_minus_rows():
    rng = np.random.default_rng(10)
    outcomes = np.where(rng.random(20000) < 4.0 / 7.0, 1, -1)
    ledger = ledger_from(outcomes)
    sifted = privacy_sift(
        ledger, Vote.VETO, target_ratio(3), np.random.default_rng(11), 3
    )
    minus_before = (ledger.outcomes == -1).sum()
    assert (sifted.outcomes == -1).sum() == minus_before
    kept_plus = (sifted.outcomes == 1).sum()
    assert kept_plus / (outcomes == 1).sum() == pytest.approx(
        3.0 / 52.0, rel=0.2
    )
    # the sifted proportion lands on the favoring member's marginal
    assert (sifted.outcomes == 1).mean() == pytest.approx(1.0 / 14.0, rel=0.15)


def test_uniform_reduce_picks_a_sorted_subset():
    ledger = ledger_from(np.where(np.arange(1000) % 3 == 0, 1, -1))
    reduced = uniform_reduce(ledger, 400, np.random.default_rng(12))
    assert len(reduced) == 400
    assert np.array_equal(reduced.submitted, reduced.timings)
    assert np.all(np.diff(reduced.timings) > 0)
    assert set(reduced.timings) <= set(ledger.timings)
    # outcomes travel with their timings
    assert np.array_equal(reduced.outcomes, ledger.outcomes[reduced.timings])


def test_uniform_reduce_rejects_overlong_request():
    with pytest.raises(ListTooShort):
        uniform_reduce(ledger_from([1, -1]), 3, np.random.default_rng(13))


def test_referee_intersect():
    a = np.array([1, 3, 5, 7, 9])
    b = np.array([3, 4, 5, 9])
    c = np.array([2, 3, 9])
    common, warn = referee_intersect([a, b, c], warn_below=5)
    assert common.tolist() == [3, 9]
    assert warn
    common, warn = referee_intersect([a, b], warn_below=2)
    assert common.tolist() == [3, 5, 9]
    assert not warn


def test_referee_collect_and_verdict():
    timings = np.arange(6, dtype=np.int64)
    ledgers = [
        PartyLedger(0, timings, np.array([1, 1, -1, -1, 1, -1], dtype=np.int8)),
        PartyLedger(1, timings, np.array([1, -1, -1, -1, 1, -1], dtype=np.int8)),
    ]
    common = np.array([0, 2, 4, 5])
    matrix, order = referee_collect(common, ledgers, np.random.default_rng(14))
    assert matrix.tolist() == [[1, 1], [-1, -1], [1, 1], [-1, -1]]
    assert sorted(order.tolist()) == list(range(8))
    assert row_counts(matrix) == (2, 2)
    assert referee_verdict(matrix, 1, 1) is Verdict.APPROVED_UNANIMOUS_FAVOR
    assert referee_verdict(matrix, 3, 1) is Verdict.VETOED_MIXED
    assert referee_verdict(matrix, 1, 3) is Verdict.VETOED_ALL_AGAINST


def test_referee_collect_demands_coverage():
    ledgers = [PartyLedger(0, np.array([0, 2]), np.array([1, 1], dtype=np.int8))]
    with pytest.raises(ValueError):
        referee_collect(np.array([0, 1]), ledgers, np.random.default_rng(15))


def test_empty_matrix_has_no_verdict():
    with pytest.raises(EmptyMatrix):
        referee_verdict(np.empty((0, 3), dtype=np.int8), 3, 3)
    assert row_counts(np.empty((0, 3), dtype=np.int8)) == (0, 0)


# --- End-to-end runs -----------------------------------------------------


@pytest.mark.parametrize(
    "votes,want",
    [
        ("FFF", Verdict.APPROVED_UNANIMOUS_FAVOR),
        ("FVF", Verdict.VETOED_MIXED),
        ("VFF", Verdict.VETOED_MIXED),
        ("VVF", Verdict.VETOED_MIXED),
    ],
)
def test_verdicts(votes, want):
    transcript = simulate(fast_params(rounds=100000, seed=16), votes)
    assert transcript.verdict is want
    assert not transcript.aborted


def test_unanimous_veto_verdict():
    """All-against leaves sparse all-(+1) rows; the count needs room to show."""
    transcript = simulate(fast_params(rounds=600000, seed=16), "VVV")
    assert transcript.verdict is Verdict.VETOED_ALL_AGAINST
    assert transcript.count_plus >= 3
    assert transcript.count_minus == 0  # the all-V zero condition, exactly


def test_verdicts_with_witness_enabled():
    params = ProtocolParams(n=3, rounds=200000, p_test=0.05, seed=17)
    transcript = simulate(params, "FFF")
    assert transcript.witness is not None and transcript.witness.passed
    assert transcript.verdict is Verdict.APPROVED_UNANIMOUS_FAVOR


@pytest.mark.parametrize(
    "votes,want",
    [
        ("FFF", Verdict.APPROVED_UNANIMOUS_FAVOR),
        ("FVF", Verdict.VETOED_MIXED),
        ("VVV", Verdict.VETOED_ALL_AGAINST),
    ],
)
def test_noisy_runs_still_classify(votes, want):
    """Depolarizing noise shifts the counts; auto thresholds absorb it."""
    params = ProtocolParams(n=3, rounds=600000, noise=0.01, seed=3)
    transcript = simulate(params, votes)
    assert transcript.verdict is want
    assert transcript.params["tau_plus"] > 3  # scaled with the leakage


def test_two_members_need_a_shorter_list():
    """A vetoing pair member retains exactly 2/5 of its rows on average, so
    the default submission length (the same fraction) is not reliably
    coverable; an explicit shorter list is."""
    params = ProtocolParams(
        n=2, rounds=20000, p_test=0.0, list_length=6000, seed=18
    )
    transcript = simulate(params, "FV")
    assert transcript.verdict is Verdict.VETOED_MIXED


def test_simulation_is_byte_deterministic():
    a = simulate(fast_params(seed=19), "FVF")
    b = simulate(fast_params(seed=19), "FVF")
    assert a.to_json() == b.to_json()
    c = simulate(fast_params(seed=20), "FVF")
    assert c.to_json() != a.to_json()


def test_vote_does_not_shift_public_randomness():
    """Designation and list length are vote-independent by stream separation."""
    a = simulate(fast_params(seed=21), "FFF")
    b = simulate(fast_params(seed=21), "VVF")
    assert a.params["list_length"] == b.params["list_length"]
    assert a.common_count > 0 and b.common_count > 0


def test_transcript_hides_votes():
    transcript = simulate(fast_params(seed=22), "FVF")
    doc = json.loads(transcript.to_json())
    assert doc["votes_hidden"] is True
    assert set(doc) == {
        "params",
        "votes_hidden",
        "common_count",
        "count_plus",
        "count_minus",
        "verdict",
        "privacy",
    }
    assert "vote" not in json.dumps(doc["params"])
    privacy = doc["privacy"]
    assert set(privacy) == {
        "submitted_lengths",
        "collected_counts",
        "pair_overlap",
        "pair_joint",
    }
    assert len(privacy["submitted_lengths"]) == 3
    assert set(privacy["pair_overlap"]) == {"0-1", "0-2", "1-2"}


def test_transcript_counts_match_matrix():
    transcript = simulate(fast_params(seed=23), "FFF")
    assert transcript.common_count == transcript.matrix.shape[0]
    assert row_counts(transcript.matrix) == (
        transcript.count_plus,
        transcript.count_minus,
    )


def test_witness_abort():
    params = ProtocolParams(n=3, rounds=200000, p_test=0.05, noise=0.3, seed=24)
    transcript = simulate(params, "FVF")
    assert transcript.aborted
    assert transcript.verdict is None
    assert transcript.common_count == 0
    assert not transcript.witness.passed


def test_small_common_is_flagged():
    params = ProtocolParams(
        n=3, rounds=2000, p_test=0.0, list_length=700, seed=1
    )
    transcript = simulate(params, "FFF")
    assert transcript.small_common
    assert transcript.common_count < 560  # below the 10/q waterline


def test_overlong_list_request_fails():
    params = ProtocolParams(
        n=3, rounds=1000, p_test=0.0, list_length=999, seed=25
    )
    with pytest.raises(ListTooShort):
        simulate(params, "FVF")


def test_explicit_thresholds_are_respected():
    params = fast_params(seed=26, tau_plus=10**9, tau_minus=1)
    transcript = simulate(params, "FFF")
    assert transcript.verdict is Verdict.VETOED_MIXED
    assert transcript.params["tau_plus"] == 10**9


@given(st.integers(0, 10**6))
@settings(max_examples=10, deadline=None)
def test_any_seed_classifies_a_mixed_vote(seed):
    """The mixed-vote verdict rests on an exact zero, so no seed can miss."""
    transcript = simulate(fast_params(rounds=30000, seed=seed), "FVF")
    assert transcript.verdict is Verdict.VETOED_MIXED
    assert transcript.count_plus == 0


# --- Privacy audit -------------------------------------------------------


def batch(votes, seed0, runs=30, mode=RatioMode.BORN_DERIVED, sift=True):
    return [
        simulate(
            fast_params(seed=seed0 + i, ratio_mode=mode, sift_enabled=sift),
            votes,
        )
        for i in range(runs)
    ]


def test_audit_needs_enough_runs():
    favor = batch("FFF", 27, runs=3)
    with pytest.raises(InsufficientRuns):
        privacy_audit(favor, favor)


def test_audit_rejects_aborted_runs():
    params = ProtocolParams(n=3, rounds=200000, p_test=0.05, noise=0.3, seed=24)
    aborted = simulate(params, "FVF")
    good = batch("FFF", 28, runs=30)
    with pytest.raises(ValueError):
        privacy_audit(good, [aborted] * 30)


def test_audit_rejects_bad_member():
    favor = batch("FFF", 29, runs=30)
    veto = batch("VFF", 129, runs=30)
    with pytest.raises(ValueError):
        privacy_audit(favor, veto, member=5)


def test_audit_passes_for_the_derived_ratio():
    favor = batch("FFF", 500)
    veto = batch("VFF", 600)
    report = privacy_audit(favor, veto, member=0)
    assert report.lengths_identical
    assert report.passed
    assert report.bonferroni_m == 4
    assert report.threshold == pytest.approx(0.01 / 4)
    gated = [t for t in report.tests if t.gates]
    assert len(gated) == 4  # length, proportion, two overlaps
    assert all(t.p_value >= report.threshold for t in gated)


def test_audit_flags_the_stated_ratio():
    """Sifting to the constant 1:(2^n - 2) misses the real marginal and the
    member's answer proportion gives the vote away."""
    favor = batch("FFF", 700, mode=RatioMode.PAPER_STATED)
    veto = batch("VFF", 800, mode=RatioMode.PAPER_STATED)
    report = privacy_audit(favor, veto, member=0)
    assert not report.passed
    failing = [
        t.name
        for t in report.tests
        if t.gates and t.p_value < report.threshold
    ]
    assert failing == ["member 0 +1:-1 proportion"]


def test_audit_flags_a_disabled_sift():
    favor = batch("FFF", 900, sift=False)
    veto = batch("VFF", 1000, sift=False)
    report = privacy_audit(favor, veto, member=0)
    assert not report.passed


def test_outcome_joints_are_reported_but_not_gated():
    """Cross-member all-(+1) cells separate the classes by design — they are
    the verdict — so they appear as diagnostics without gating the audit."""
    favor = batch("FFF", 1100)
    veto = batch("VFF", 1200)
    report = privacy_audit(favor, veto, member=0)
    joints = [t for t in report.tests if not t.gates]
    assert len(joints) == 2
    assert all("informational" in t.name for t in joints)
    assert all(t.p_value < 1e-6 for t in joints)
    assert report.passed  # despite those extreme p-values
