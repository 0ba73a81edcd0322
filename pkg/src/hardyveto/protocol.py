"""Anonymous veto by repeated Hardy-state measurements.

A referee distributes one qubit of the shared state to each jury member in
every round.  A member in favor measures U, a vetoing member measures V; the
zero conditions of the state then forbid certain joint outcomes, and the
referee's verdict hinges on which all-equal outcome rows appear among the
rounds all members agreed to reveal.

The pipeline: rounds are publicly designated as test or vote rounds; test
rounds (random announced settings) feed a state witness that checks the source
against its advertised statistics; vetoing members privately discard +1
outcomes until their reported +1:-1 proportion matches a favoring member's;
everyone truncates to a fixed-length uniformly random sublist and submits the
timings (never the outcomes); the referee intersects the lists, queries the
outcomes at common timings in random order, and counts all-(+1) and all-(-1)
rows to reach a verdict.

Privacy is evaluated against an honest-but-curious referee: `privacy_audit`
compares the referee's view across batches of runs that differ in one
member's vote.  The gated statistics are the ones the sifting is designed to
equalize — submitted-list lengths, the member's own +1:-1 answer proportion,
and pairwise timing overlaps between submitted lists.  Cross-member outcome
correlations are reported as informational diagnostics but not gated: the
all-(+1) row count is exactly what the verdict legitimately discloses, and in
a mixed run the zero conditions leave a fingerprint no sift can remove — a
(veto, favor) pair never shows (+1, +1) at a common timing while a (favor,
favor) pair does, so whoever holds the full outcome matrix can read off the
veto set.  The sift therefore protects exactly what the gate measures: the
member's own submitted footprint, not the joint outcome content.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

import numpy as np
from scipy.stats import chi2_contingency, ks_2samp

from .hardy import build_veto_state, veto_observables
from .quantum import (
    Setting,
    StateVector,
    ObservablePair,
    marginal_probability,
    outcome_distribution,
)

DEFAULT_LIST_FRACTION = 0.4
MIN_THRESHOLD = 3


class Vote(str, Enum):
    FAVOR = "favor"
    VETO = "veto"


class Verdict(str, Enum):
    APPROVED_UNANIMOUS_FAVOR = "approved_unanimous_favor"
    VETOED_MIXED = "vetoed_mixed"
    VETOED_ALL_AGAINST = "vetoed_all_against"


class RatioMode(str, Enum):
    BORN_DERIVED = "born"
    PAPER_STATED = "paper"


class InsufficientTestData(ValueError):
    """Too few test rounds in some context for the witness to conclude."""


class RatioUnreachable(ValueError):
    """Discarding +1 rows cannot reach the target proportion."""


class ListTooShort(ValueError):
    """A member's sifted list is shorter than the submission length."""


class EmptyMatrix(ValueError):
    """The referee has no common timings to judge."""


class InsufficientRuns(ValueError):
    """Too few simulated runs per class for the privacy audit."""


def parse_votes(votes: str | Sequence[Vote | str], n: int) -> tuple[Vote, ...]:
    """Coerce ``"FVF"``-style strings or vote sequences to a vote vector."""
    if isinstance(votes, str):
        letters = {"F": Vote.FAVOR, "V": Vote.VETO}
        try:
            parsed = tuple(letters[ch] for ch in votes.upper())
        except KeyError as err:
            raise ValueError(f"unknown vote letter {err.args[0]!r} in {votes!r}")
    else:
        parsed = tuple(Vote(v) for v in votes)
    if len(parsed) != n:
        raise ValueError(f"{len(parsed)} votes for {n} members")
    return parsed


@dataclass(frozen=True)
class ProtocolParams:
    """Knobs of one protocol run.

    ``list_length`` and the thresholds default to None and are resolved per
    run: the list length to ``DEFAULT_LIST_FRACTION`` of the vote rounds, and
    the thresholds to 3 when noise is zero (the counts they guard are exactly
    zero then) or to half the smallest expected unanimity signal otherwise.
    """

    n: int
    rounds: int
    p_test: float = 0.05
    list_length: int | None = None
    tau_plus: int | None = None
    tau_minus: int | None = None
    noise: float = 0.0
    seed: int = 0
    ratio_mode: RatioMode = RatioMode.BORN_DERIVED
    sift_enabled: bool = True
    witness_tol: float = 0.01
    min_test_rounds: int = 1000

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need at least 2 members, got {self.n}")
        if self.rounds < 1:
            raise ValueError(f"need at least 1 round, got {self.rounds}")
        if not 0.0 <= self.p_test < 1.0:
            raise ValueError(f"p_test {self.p_test} outside [0, 1)")
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError(f"noise {self.noise} outside [0, 1]")
        if self.list_length is not None and self.list_length < 1:
            raise ValueError(f"list_length {self.list_length} < 1")
        for name in ("tau_plus", "tau_minus"):
            tau = getattr(self, name)
            if tau is not None and tau < 1:
                raise ValueError(f"{name} {tau} < 1")
        if self.witness_tol <= 0.0:
            raise ValueError(f"witness_tol {self.witness_tol} <= 0")
        object.__setattr__(self, "ratio_mode", RatioMode(self.ratio_mode))


def _noisy(p: float, noise: float) -> float:
    """Marginal of a +-1 outcome that is replaced by a fair coin w.p. noise."""
    return (1.0 - noise) * p + noise / 2.0


@lru_cache(maxsize=None)
def _ideal_marginals(n: int) -> tuple[float, float]:
    """Noise-free +1 marginals (P_U(+1), P_V(+1)) of the protocol state.

    Computed from the state itself; by no-signaling the other members'
    settings are immaterial, so one mixed context serves for both.
    """
    state = build_veto_state(n)
    obs = veto_observables(n)
    p_u = marginal_probability(state, obs, [Setting.U] * n, {0: 1})
    settings = [Setting.V] + [Setting.U] * (n - 1)
    p_v = marginal_probability(state, obs, settings, {0: 1})
    return float(p_u), float(p_v)


def target_ratio(
    n: int, mode: RatioMode = RatioMode.BORN_DERIVED, noise: float = 0.0
) -> tuple[float, float]:
    """Target (+1 weight, -1 weight) proportion for a sifted list.

    BORN_DERIVED returns the in-favor marginal proportion of the protocol
    state (noise-adjusted): a member sifting to it reports the same +1:-1
    proportion whichever way they voted, so their own footprint is
    vote-invariant and the privacy audit passes.  PAPER_STATED returns the
    constant 1:(2^n - 2) irrespective of noise.  It differs from the raw
    marginal for every n >= 2, and a sift aimed at it shifts the vetoer's
    reported proportion between runs — the audit flags it.  It is not a
    typo, though: conditioned on surviving a single vetoer's sift, *every*
    member's +1 rate lands on 1/(2^n - 1), i.e. the stated ratio equalizes
    the members within one mixed run instead of anchoring each member across
    runs.  The two targets hide different channels; only the first is the
    one the audit gates.
    """
    if n < 2:
        raise ValueError(f"need at least 2 members, got {n}")
    mode = RatioMode(mode)
    if mode is RatioMode.PAPER_STATED:
        return (1.0, float(2**n - 2))
    p_u, _ = _ideal_marginals(n)
    p = _noisy(p_u, noise)
    return (p, 1.0 - p)


def sift_keep_probability(
    n: int, ratio: tuple[float, float], noise: float = 0.0
) -> float:
    """Probability of keeping a +1 row that moves a vetoer's list to ``ratio``.

    A vetoing member's raw marginals are (p, 1-p) with p the noise-adjusted
    +1 marginal under V; keeping +1 rows with probability k yields proportion
    k p : (1-p), so k = (r_+/r_-) (1-p)/p hits the target exactly.
    """
    r_plus, r_minus = ratio
    if r_minus <= 0.0:
        raise RatioUnreachable(f"target ratio {r_plus}:{r_minus} keeps no -1 rows")
    _, p_v = _ideal_marginals(n)
    p = _noisy(p_v, noise)
    k = (r_plus / r_minus) * (1.0 - p) / p
    if k > 1.0:
        raise RatioUnreachable(
            f"target proportion {r_plus / r_minus} exceeds the raw {p / (1.0 - p)}; "
            "discarding +1 rows can only lower it"
        )
    return k


def designate_rounds(
    rounds: int, p_test: float, rng: np.random.Generator
) -> np.ndarray:
    """Public test/vote designation: True marks a test round."""
    if rounds < 1:
        raise ValueError(f"need at least 1 round, got {rounds}")
    if not 0.0 <= p_test < 1.0:
        raise ValueError(f"p_test {p_test} outside [0, 1)")
    return rng.random(rounds) < p_test


@dataclass(frozen=True)
class RoundRecord:
    """One round as the world saw it; outcomes are party-local."""

    timing: int
    is_test: bool
    settings: tuple[Setting, ...]
    outcomes: tuple[int, ...]


@dataclass(frozen=True, eq=False)
class RoundData:
    """All rounds of one run, column-oriented.

    ``settings`` holds 0 for U and 1 for V; ``outcomes`` holds +-1.  Timings
    are the row indices, unique and increasing by construction.
    """

    is_test: np.ndarray
    settings: np.ndarray
    outcomes: np.ndarray

    @property
    def n_rounds(self) -> int:
        return self.is_test.shape[0]

    def record(self, timing: int) -> RoundRecord:
        return RoundRecord(
            timing=timing,
            is_test=bool(self.is_test[timing]),
            settings=tuple(
                Setting.V if b else Setting.U for b in self.settings[timing]
            ),
            outcomes=tuple(int(x) for x in self.outcomes[timing]),
        )

    def records(self) -> Iterator[RoundRecord]:
        return (self.record(t) for t in range(self.n_rounds))


def run_rounds(
    params: ProtocolParams,
    votes: Sequence[Vote | str] | str,
    rng: np.random.Generator,
    is_test: np.ndarray | None = None,
    state: StateVector | None = None,
    observables: Sequence[ObservablePair] | None = None,
) -> RoundData:
    """Sample every round's outcomes from the source state.

    Vote rounds use the members' vote settings, test rounds uniformly random
    announced settings.  Depolarizing noise replaces each member's outcome by
    a fair coin with probability ``params.noise``.  An alternative ``state``
    (and matching ``observables``) models a dishonest or broken source.
    """
    n, m = params.n, params.rounds
    votes = parse_votes(votes, n)
    if state is None:
        state = build_veto_state(n)
    if observables is None:
        observables = veto_observables(n)
    if is_test is None:
        is_test = designate_rounds(m, params.p_test, rng)

    settings = np.empty((m, n), dtype=np.int8)
    settings[~is_test] = np.array(
        [1 if v is Vote.VETO else 0 for v in votes], dtype=np.int8
    )
    n_test = int(is_test.sum())
    if n_test:
        settings[is_test] = rng.integers(0, 2, size=(n_test, n), dtype=np.int8)

    outcomes = np.empty((m, n), dtype=np.int8)
    weights = 1 << np.arange(n - 1, -1, -1)
    keys = settings @ weights
    shifts = np.arange(n - 1, -1, -1)
    for key in np.unique(keys):
        idx = np.nonzero(keys == key)[0]
        context = [Setting.V if (key >> s) & 1 else Setting.U for s in shifts]
        dist = outcome_distribution(state, observables, context)
        cdf = np.cumsum(dist)
        flat = np.searchsorted(cdf, rng.random(idx.size), side="right")
        flat = np.minimum(flat, dist.size - 1)
        digits = (flat[:, None] >> shifts) & 1
        outcomes[idx] = (1 - 2 * digits).astype(np.int8)

    if params.noise > 0.0:
        flip = rng.random((m, n)) < params.noise
        coins = (1 - 2 * rng.integers(0, 2, size=(m, n))).astype(np.int8)
        outcomes = np.where(flip, coins, outcomes)
    return RoundData(is_test=is_test, settings=settings, outcomes=outcomes)


@dataclass(frozen=True)
class WitnessEntry:
    label: str
    count: int
    frequency: float
    expected: float
    passed: bool


@dataclass(frozen=True)
class WitnessReport:
    """Empirical check of the source against its advertised statistics."""

    entries: tuple[WitnessEntry, ...]
    q_estimate: float
    q_expected: float
    q_sigma: float
    passed: bool


def test_round_check(
    settings: np.ndarray,
    outcomes: np.ndarray,
    n: int,
    tol: float = 0.01,
    min_per_context: int = 1000,
) -> WitnessReport:
    """Verify announced test rounds against the protocol state's predictions.

    Every zero condition must have empirical frequency <= tol: each ordered
    pair's "V-chooser at +1 with a U-chooser at +1" (the state is permutation
    symmetric, so all pairs, not only cyclic ones) and the all-V all-(-1)
    event.  The all-U all-(+1) frequency must sit within 5 sigma of the
    state's success probability.  Raises InsufficientTestData when any
    context has fewer than ``min_per_context`` rounds.
    """
    weights = 1 << np.arange(n - 1, -1, -1)
    keys = settings @ weights
    counts = np.bincount(keys, minlength=2**n)
    if counts.min() < min_per_context:
        worst = int(counts.argmin())
        label = "".join(
            "V" if (worst >> s) & 1 else "U" for s in range(n - 1, -1, -1)
        )
        raise InsufficientTestData(
            f"context {label} has {counts[worst]} test rounds, "
            f"need {min_per_context}"
        )

    entries: list[WitnessEntry] = []
    for r in range(n):
        for s in range(n):
            if s == r:
                continue
            rows = (settings[:, r] == 1) & (settings[:, s] == 0)
            total = int(rows.sum())
            hits = int(
                ((outcomes[rows, r] == 1) & (outcomes[rows, s] == 1)).sum()
            )
            freq = hits / total
            entries.append(
                WitnessEntry(
                    label=f"v{r + 1}=+1 & u{s + 1}=+1",
                    count=total,
                    frequency=freq,
                    expected=0.0,
                    passed=freq <= tol,
                )
            )
    all_v = keys == 2**n - 1
    total = int(all_v.sum())
    hits = int(np.all(outcomes[all_v] == -1, axis=1).sum())
    freq = hits / total
    entries.append(
        WitnessEntry(
            label="all v=-1",
            count=total,
            frequency=freq,
            expected=0.0,
            passed=freq <= tol,
        )
    )

    all_u = keys == 0
    total = int(all_u.sum())
    hits = int(np.all(outcomes[all_u] == 1, axis=1).sum())
    q_est = hits / total
    q = 1.0 / (2**n * (2**n - 1))
    sigma = math.sqrt(q * (1.0 - q) / total)
    q_ok = abs(q_est - q) <= 5.0 * sigma
    return WitnessReport(
        entries=tuple(entries),
        q_estimate=q_est,
        q_expected=q,
        q_sigma=sigma,
        passed=all(e.passed for e in entries) and q_ok,
    )


@dataclass(frozen=True, eq=False)
class PartyLedger:
    """One member's retained rounds; ``submitted`` is what the referee sees."""

    member: int
    timings: np.ndarray
    outcomes: np.ndarray
    submitted: np.ndarray | None = None

    def __len__(self) -> int:
        return self.timings.shape[0]


def privacy_sift(
    ledger: PartyLedger,
    vote: Vote,
    ratio: tuple[float, float],
    rng: np.random.Generator,
    n: int,
    noise: float = 0.0,
) -> PartyLedger:
    """Drop a vetoer's +1 rows so the kept proportion matches ``ratio``.

    Favoring members keep everything.  Vetoing members independently keep
    each +1 row with :func:`sift_keep_probability`; the -1 rows all stay.
    """
    if Vote(vote) is Vote.FAVOR:
        return ledger
    keep_p = sift_keep_probability(n, ratio, noise)
    plus = ledger.outcomes == 1
    keep = ~plus | (rng.random(len(ledger)) < keep_p)
    return PartyLedger(
        member=ledger.member,
        timings=ledger.timings[keep],
        outcomes=ledger.outcomes[keep],
    )


def uniform_reduce(
    ledger: PartyLedger, list_length: int, rng: np.random.Generator
) -> PartyLedger:
    """Keep a uniformly random fixed-size subset and expose its timings."""
    if len(ledger) < list_length:
        raise ListTooShort(
            f"member {ledger.member} has {len(ledger)} rounds after sifting, "
            f"needs {list_length}; lower list_length or raise rounds"
        )
    pick = np.sort(rng.permutation(len(ledger))[:list_length])
    timings = ledger.timings[pick]
    return PartyLedger(
        member=ledger.member,
        timings=timings,
        outcomes=ledger.outcomes[pick],
        submitted=timings,
    )


def _intersect_sorted(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if b.size == 0 or a.size == 0:
        return a[:0]
    idx = np.minimum(np.searchsorted(b, a), b.size - 1)
    return a[b[idx] == a]


def referee_intersect(
    submitted: Sequence[np.ndarray], warn_below: int | None = None
) -> tuple[np.ndarray, bool]:
    """Common timings of all submitted lists, and whether they look too few.

    The second value is True when the intersection is smaller than
    ``warn_below`` (callers pass a multiple of 1/q, the scale on which the
    verdict statistics live).
    """
    if not submitted:
        raise ValueError("no submitted lists")
    common = submitted[0]
    for timings in submitted[1:]:
        common = _intersect_sorted(common, timings)
    warn = warn_below is not None and common.size < warn_below
    return common, warn


def referee_collect(
    common: np.ndarray,
    ledgers: Sequence[PartyLedger],
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Query every member's outcome at every common timing, in random order.

    Returns the outcome matrix (one row per common timing, one column per
    member) and the query order, a permutation of the flattened (timing,
    member) slots; the order is part of the referee's observable behavior but
    carries no outcome information.
    """
    matrix = np.empty((common.size, len(ledgers)), dtype=np.int8)
    for j, ledger in enumerate(ledgers):
        pos = np.searchsorted(ledger.timings, common)
        if common.size and (
            pos.max(initial=0) >= len(ledger)
            or not np.array_equal(ledger.timings[pos], common)
        ):
            raise ValueError(f"member {j} lacks some common timings")
        matrix[:, j] = ledger.outcomes[pos]
    order = rng.permutation(common.size * len(ledgers))
    return matrix, order


def row_counts(matrix: np.ndarray) -> tuple[int, int]:
    """Counts of all-(+1) rows and all-(-1) rows."""
    if matrix.shape[0] == 0:
        return 0, 0
    plus = int(np.all(matrix == 1, axis=1).sum())
    minus = int(np.all(matrix == -1, axis=1).sum())
    return plus, minus


def referee_verdict(
    matrix: np.ndarray, tau_plus: int, tau_minus: int
) -> Verdict:
    """Decide from the all-equal row counts.

    All-(+1) rows appear only under unanimity (of either kind), so too few of
    them means a mixed vote; among unanimous votes, all-(-1) rows appear only
    when everyone favored.
    """
    if matrix.shape[0] == 0:
        raise EmptyMatrix("no common timings to judge")
    count_plus, count_minus = row_counts(matrix)
    if count_plus < tau_plus:
        return Verdict.VETOED_MIXED
    if count_minus < tau_minus:
        return Verdict.VETOED_ALL_AGAINST
    return Verdict.APPROVED_UNANIMOUS_FAVOR


def _depolarize_distribution(dist: np.ndarray, n: int, noise: float) -> np.ndarray:
    """Push a 2^n outcome distribution through per-party outcome coin flips."""
    if noise == 0.0:
        return dist
    channel = np.array(
        [[1.0 - noise / 2.0, noise / 2.0], [noise / 2.0, 1.0 - noise / 2.0]]
    )
    t = dist.reshape((2,) * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(channel, t, axes=(1, axis)), 0, axis)
    return t.reshape(-1)


def _resolve_thresholds(
    params: ProtocolParams,
    n_common: int,
    keep_p: float,
    state: StateVector,
    observables: Sequence[ObservablePair],
) -> tuple[int, int]:
    """Default occurrence thresholds.

    At zero noise the guarded counts are exactly zero on forbidden sides, so a
    small constant suffices.  With noise, each threshold is placed at half the
    smallest expected count the passing side would produce, which separates
    the unanimity signal from the O(noise^n) leakage for small noise.
    """
    tau_plus, tau_minus = params.tau_plus, params.tau_minus
    if tau_plus is not None and tau_minus is not None:
        return tau_plus, tau_minus
    if params.noise == 0.0:
        return tau_plus or MIN_THRESHOLD, tau_minus or MIN_THRESHOLD

    n = params.n
    dist_u = _depolarize_distribution(
        outcome_distribution(state, observables, [Setting.U] * n), n, params.noise
    )
    dist_v = _depolarize_distribution(
        outcome_distribution(state, observables, [Setting.V] * n), n, params.noise
    )
    # all-V rows reach the referee weighted by the vetoers' keep probability
    # per +1 outcome: index bit 0 is outcome +1.
    flats = np.arange(2**n)
    n_plus = n - np.array([bin(f).count("1") for f in flats])
    sift_weights = keep_p**n_plus
    z = float(dist_v @ sift_weights)
    rate_plus_all_v = float(dist_v[0]) * keep_p**n / z
    rate_plus_all_f = float(dist_u[0])
    rate_minus_all_f = float(dist_u[-1])
    if tau_plus is None:
        tau_plus = max(
            MIN_THRESHOLD,
            math.ceil(0.5 * min(rate_plus_all_f, rate_plus_all_v) * n_common),
        )
    if tau_minus is None:
        tau_minus = max(
            MIN_THRESHOLD, math.ceil(0.5 * rate_minus_all_f * n_common)
        )
    return tau_plus, tau_minus


@dataclass(frozen=True, eq=False)
class RefereeTranscript:
    """Everything the referee ends up holding after one run.

    ``privacy`` collects the referee-visible statistics the audit consumes.
    The JSON form contains only vote-blind data and is byte-stable for fixed
    params and seed.
    """

    params: dict
    common_timings: np.ndarray
    matrix: np.ndarray
    query_order: np.ndarray
    count_plus: int
    count_minus: int
    verdict: Verdict | None
    privacy: dict
    witness: WitnessReport | None
    aborted: bool
    small_common: bool

    @property
    def common_count(self) -> int:
        return int(self.common_timings.size)

    def to_dict(self) -> dict:
        return {
            "params": self.params,
            "votes_hidden": True,
            "common_count": self.common_count,
            "count_plus": self.count_plus,
            "count_minus": self.count_minus,
            "verdict": self.verdict.value if self.verdict is not None else None,
            "privacy": self.privacy,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def _privacy_block(
    ledgers: Sequence[PartyLedger], matrix: np.ndarray
) -> dict:
    """Referee-visible statistics: lengths, answer counts, pairwise stats."""
    n = len(ledgers)
    lengths = [int(ledger.submitted.size) for ledger in ledgers]
    collected = [
        [int((matrix[:, j] == 1).sum()), int((matrix[:, j] == -1).sum())]
        for j in range(n)
    ]
    overlap = {}
    joint = {}
    for i in range(n):
        for j in range(i + 1, n):
            key = f"{i}-{j}"
            overlap[key] = int(
                _intersect_sorted(ledgers[i].submitted, ledgers[j].submitted).size
            )
            a, b = matrix[:, i] == 1, matrix[:, j] == 1
            joint[key] = [
                int((a & b).sum()),
                int((a & ~b).sum()),
                int((~a & b).sum()),
                int((~a & ~b).sum()),
            ]
    return {
        "submitted_lengths": lengths,
        "collected_counts": collected,
        "pair_overlap": overlap,
        "pair_joint": joint,
    }


def _resolved_params(
    params: ProtocolParams,
    list_length: int | None,
    tau_plus: int | None,
    tau_minus: int | None,
) -> dict:
    return {
        "n": params.n,
        "rounds": params.rounds,
        "p_test": params.p_test,
        "list_length": list_length,
        "tau_plus": tau_plus,
        "tau_minus": tau_minus,
        "noise": params.noise,
        "seed": params.seed,
        "ratio_mode": params.ratio_mode.value,
        "sift_enabled": params.sift_enabled,
        "witness_tol": params.witness_tol,
        "min_test_rounds": params.min_test_rounds,
    }


def simulate(
    params: ProtocolParams,
    votes: Sequence[Vote | str] | str,
    state: StateVector | None = None,
    observables: Sequence[ObservablePair] | None = None,
) -> RefereeTranscript:
    """One full protocol run, deterministic in ``params.seed``.

    When the test-round witness rejects the source the run aborts: the
    transcript carries the witness report, a null verdict, and no collected
    data.  All randomness flows from one seed through purpose-specific
    streams (designation, sampling, per-member sift, per-member reduction,
    query order), so a member's vote never shifts another stream.
    """
    n = params.n
    votes = parse_votes(votes, n)
    if state is None:
        state = build_veto_state(n)
    if observables is None:
        observables = veto_observables(n)

    seeds = np.random.SeedSequence(params.seed).spawn(3 + 2 * n)
    rng_designate = np.random.default_rng(seeds[0])
    rng_rounds = np.random.default_rng(seeds[1])
    rng_collect = np.random.default_rng(seeds[2])
    rng_sift = [np.random.default_rng(s) for s in seeds[3 : 3 + n]]
    rng_reduce = [np.random.default_rng(s) for s in seeds[3 + n : 3 + 2 * n]]

    is_test = designate_rounds(params.rounds, params.p_test, rng_designate)
    data = run_rounds(
        params, votes, rng_rounds, is_test=is_test, state=state,
        observables=observables,
    )

    witness = None
    if params.p_test > 0.0:
        witness = test_round_check(
            data.settings[is_test],
            data.outcomes[is_test],
            n,
            tol=params.witness_tol,
            min_per_context=params.min_test_rounds,
        )
        if not witness.passed:
            empty = np.empty(0, dtype=np.int64)
            return RefereeTranscript(
                params=_resolved_params(params, None, None, None),
                common_timings=empty,
                matrix=np.empty((0, n), dtype=np.int8),
                query_order=empty,
                count_plus=0,
                count_minus=0,
                verdict=None,
                privacy={},
                witness=witness,
                aborted=True,
                small_common=False,
            )

    vote_timings = np.nonzero(~is_test)[0].astype(np.int64)
    n_vote = vote_timings.size
    list_length = params.list_length
    if list_length is None:
        list_length = int(DEFAULT_LIST_FRACTION * n_vote)
    if list_length < 1:
        raise ListTooShort("no vote rounds to submit; raise rounds")

    ratio = target_ratio(n, params.ratio_mode, params.noise)
    keep_p = sift_keep_probability(n, ratio, params.noise)
    ledgers = []
    for j in range(n):
        ledger = PartyLedger(
            member=j,
            timings=vote_timings,
            outcomes=data.outcomes[~is_test, j],
        )
        if params.sift_enabled:
            ledger = privacy_sift(
                ledger, votes[j], ratio, rng_sift[j], n, params.noise
            )
        ledgers.append(uniform_reduce(ledger, list_length, rng_reduce[j]))

    q_ideal = 1.0 / (2**n * (2**n - 1))
    common, small = referee_intersect(
        [ledger.submitted for ledger in ledgers],
        warn_below=math.ceil(10.0 / q_ideal),
    )
    matrix, order = referee_collect(common, ledgers, rng_collect)
    tau_plus, tau_minus = _resolve_thresholds(
        params, common.size, keep_p, state, observables
    )
    verdict = referee_verdict(matrix, tau_plus, tau_minus)
    count_plus, count_minus = row_counts(matrix)
    return RefereeTranscript(
        params=_resolved_params(params, list_length, tau_plus, tau_minus),
        common_timings=common,
        matrix=matrix,
        query_order=order,
        count_plus=count_plus,
        count_minus=count_minus,
        verdict=verdict,
        privacy=_privacy_block(ledgers, matrix),
        witness=witness,
        aborted=False,
        small_common=small,
    )


@dataclass(frozen=True)
class AuditTest:
    """One divergence statistic; only gated tests count toward the verdict."""

    name: str
    p_value: float
    gates: bool


@dataclass(frozen=True)
class PrivacyAuditReport:
    member: int
    runs_favor: int
    runs_veto: int
    alpha: float
    bonferroni_m: int
    lengths_identical: bool
    tests: tuple[AuditTest, ...]

    @property
    def threshold(self) -> float:
        return self.alpha / self.bonferroni_m

    @property
    def passed(self) -> bool:
        return self.lengths_identical and all(
            t.p_value >= self.threshold for t in self.tests if t.gates
        )


def _chi2_p(table: np.ndarray) -> float:
    """Chi-square p-value of a contingency table, 1.0 when degenerate."""
    table = np.asarray(table, dtype=np.int64)
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2 or (table.sum(axis=1) == 0).any():
        return 1.0
    return float(chi2_contingency(table, correction=False).pvalue)


def privacy_audit(
    favor_transcripts: Sequence[RefereeTranscript],
    veto_transcripts: Sequence[RefereeTranscript],
    member: int = 0,
    alpha: float = 0.01,
    min_runs: int = 30,
) -> PrivacyAuditReport:
    """Can the referee's view tell the member's FAVOR runs from VETO runs?

    The two batches must be identical in params except for ``member``'s vote
    (and seeds).  Within every run all members must submit equally long lists
    (the anonymity precondition; its violation fails the audit outright).
    Gated statistics, Bonferroni-corrected at ``alpha``: the per-run list
    length across classes (lengths follow the public designation randomness,
    so their distributions must coincide), the member's pooled +1:-1
    collected-answer proportion, and the member's pairwise submitted-list
    timing overlap with each other member.

    Cross-member outcome joint tables are reported ungated: all-(+1) rows are
    the verdict's own evidence, so those tables separate a vetoed batch from
    an approved one by design, and within a mixed run their (+1, +1) cells
    vanish exactly for (veto, favor) pairs — a fingerprint the sift cannot
    touch.  Gating them would fail every honest strategy alike; what the
    audit certifies is the narrower, achievable property that the member's
    own submitted footprint does not move when their vote does.
    """
    if len(favor_transcripts) < min_runs or len(veto_transcripts) < min_runs:
        raise InsufficientRuns(
            f"{len(favor_transcripts)} favor / {len(veto_transcripts)} veto "
            f"runs, need {min_runs} each"
        )
    for t in (*favor_transcripts, *veto_transcripts):
        if t.aborted:
            raise ValueError("audit requires completed runs, found an aborted one")
    n = favor_transcripts[0].params["n"]
    if not 0 <= member < n:
        raise ValueError(f"member {member} outside 0..{n - 1}")

    lengths_identical = all(
        len(set(t.privacy["submitted_lengths"])) == 1
        for t in (*favor_transcripts, *veto_transcripts)
    )

    def run_lengths(batch):
        return [t.privacy["submitted_lengths"][member] for t in batch]

    def pooled_counts(batch):
        plus = sum(t.privacy["collected_counts"][member][0] for t in batch)
        minus = sum(t.privacy["collected_counts"][member][1] for t in batch)
        return plus, minus

    tests = [
        AuditTest(
            name="list length",
            p_value=float(
                ks_2samp(
                    run_lengths(favor_transcripts), run_lengths(veto_transcripts)
                ).pvalue
            ),
            gates=True,
        ),
        AuditTest(
            name=f"member {member} +1:-1 proportion",
            p_value=_chi2_p(
                [pooled_counts(favor_transcripts), pooled_counts(veto_transcripts)]
            ),
            gates=True,
        ),
    ]

    def pair_key(i: int) -> str:
        return f"{min(member, i)}-{max(member, i)}"

    for i in range(n):
        if i == member:
            continue
        row = []
        for batch in (favor_transcripts, veto_transcripts):
            total_overlap = sum(t.privacy["pair_overlap"][pair_key(i)] for t in batch)
            total_length = sum(
                t.privacy["submitted_lengths"][member] for t in batch
            )
            row.append([total_overlap, total_length - total_overlap])
        tests.append(
            AuditTest(
                name=f"list overlap {member}&{i}",
                p_value=_chi2_p(row),
                gates=True,
            )
        )
    for i in range(n):
        if i == member:
            continue
        row = []
        for batch in (favor_transcripts, veto_transcripts):
            cells = np.zeros(4, dtype=np.int64)
            for t in batch:
                cells += np.asarray(t.privacy["pair_joint"][pair_key(i)])
            row.append(cells.tolist())
        tests.append(
            AuditTest(
                name=f"outcome joint {member}&{i} (informational)",
                p_value=_chi2_p(row),
                gates=False,
            )
        )

    return PrivacyAuditReport(
        member=member,
        runs_favor=len(favor_transcripts),
        runs_veto=len(veto_transcripts),
        alpha=alpha,
        bonferroni_m=n + 1,
        lengths_identical=lengths_identical,
        tests=tuple(tests),
    )
