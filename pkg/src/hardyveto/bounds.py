"""Classical and no-signaling ceilings for Hardy-type arguments.

Two bounds bracket the quantum construction from below and above:

- an exhaustive sweep over deterministic local strategies shows that no local
  hidden-variable model can satisfy every zero condition while keeping the
  success probability positive;
- an exact rational linear program maximizes the success probability over all
  non-signaling behaviors, the theory-independent ceiling.

Behaviors are tables of joint outcome probabilities, one distribution per
measurement context.  The LP works directly on the behavior entries, so its
optima are certified by exact arithmetic: "1/3" means one third, not a float
that rounds to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import prod
from typing import Iterator, Mapping, Sequence

from .hardy import HardySpec, Variant, zero_conditions
from .quantum import ObservablePair, Setting, StateVector, outcome_distribution
from .rational_lp import Infeasible, LinearProgram, simplex_solve

MAX_STRATEGIES = 10**7


def all_contexts(n: int) -> Iterator[tuple[Setting, ...]]:
    """Every measurement context; party 0 varies slowest, U before V."""
    return product((Setting.U, Setting.V), repeat=n)


def all_outcomes(dims: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Every joint outcome (1-based); party 0 varies slowest."""
    return product(*[range(1, d + 1) for d in dims])


def context_index(settings: Sequence[Setting]) -> int:
    """Binary rank of a context: party 0 is the most significant bit, U=0, V=1."""
    index = 0
    for s in settings:
        index = 2 * index + (1 if Setting(s) is Setting.V else 0)
    return index


def outcome_index(outcomes: Sequence[int], dims: Sequence[int]) -> int:
    """Mixed-radix rank of a joint outcome; party 0 is the most significant digit."""
    if len(outcomes) != len(dims):
        raise ValueError(f"{len(outcomes)} outcomes for {len(dims)} parties")
    index = 0
    for o, d in zip(outcomes, dims):
        if not 1 <= o <= d:
            raise ValueError(f"outcome {o} outside 1..{d}")
        index = index * d + (o - 1)
    return index


def variable_index(
    settings: Sequence[Setting], outcomes: Sequence[int], dims: Sequence[int]
) -> int:
    """Flat index of one behavior entry in the LP variable vector."""
    return context_index(settings) * prod(dims) + outcome_index(outcomes, dims)


@dataclass(frozen=True)
class DeterministicStrategy:
    """A local response table: for each party, the outcome under U and under V."""

    responses: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "responses",
            tuple((int(u), int(v)) for u, v in self.responses),
        )

    def outcome(self, party: int, setting: Setting) -> int:
        u, v = self.responses[party]
        return u if Setting(setting) is Setting.U else v


@dataclass(frozen=True, eq=False)
class BehaviorTable:
    """Joint outcome probabilities for every measurement context.

    ``entries`` maps (settings, outcomes) pairs to probabilities.  Values are
    exact Fractions for polytope vertices and LP optima, floats for quantum
    behaviors.
    """

    n: int
    dims: tuple[int, ...]
    entries: Mapping[
        tuple[tuple[Setting, ...], tuple[int, ...]], Fraction | float
    ]

    def entry(
        self, settings: Sequence[Setting], outcomes: Sequence[int]
    ) -> Fraction | float:
        key = (tuple(Setting(s) for s in settings), tuple(int(o) for o in outcomes))
        return self.entries[key]

    def marginal(
        self, settings: Sequence[Setting], fixed: Mapping[int, int]
    ) -> Fraction | float:
        """Probability of the fixed parties' outcomes, summing out the rest."""
        settings = tuple(Setting(s) for s in settings)
        free = [p for p in range(self.n) if p not in fixed]
        total = 0
        for assignment in product(*[range(1, self.dims[p] + 1) for p in free]):
            outcome = [0] * self.n
            for p, o in fixed.items():
                outcome[p] = int(o)
            for p, o in zip(free, assignment):
                outcome[p] = o
            total += self.entries[(settings, tuple(outcome))]
        return total

    def validate(self, tol: float | Fraction = 0) -> None:
        """Check non-negativity, per-context normalization, and no-signaling.

        With ``tol=0`` (the default, for exact tables) every check is an exact
        identity; quantum tables should pass with ``tol=1e-12``.
        """
        for settings in all_contexts(self.n):
            total = 0
            for outcomes in all_outcomes(self.dims):
                value = self.entries[(settings, outcomes)]
                if value < -tol:
                    raise ValueError(
                        f"negative entry {value} at {settings}, {outcomes}"
                    )
                total += value
            if abs(total - 1) > tol:
                raise ValueError(f"context {settings} sums to {total}, not 1")
        for r in range(self.n):
            others = [p for p in range(self.n) if p != r]
            for remote_settings in product((Setting.U, Setting.V), repeat=self.n - 1):
                for remote_outcomes in product(
                    *[range(1, self.dims[p] + 1) for p in others]
                ):
                    fixed = dict(zip(others, remote_outcomes))
                    marginals = []
                    for s_r in (Setting.U, Setting.V):
                        settings = list(remote_settings)
                        settings.insert(r, s_r)
                        marginals.append(self.marginal(settings, fixed))
                    if abs(marginals[0] - marginals[1]) > tol:
                        raise ValueError(
                            f"party {r} signals at remote settings "
                            f"{remote_settings}, outcomes {remote_outcomes}: "
                            f"{marginals[0]} != {marginals[1]}"
                        )


def deterministic_behavior(
    strategy: DeterministicStrategy, dims: Sequence[int]
) -> BehaviorTable:
    """The 0/1 behavior of a deterministic strategy, with exact entries."""
    dims = tuple(int(d) for d in dims)
    n = len(dims)
    if len(strategy.responses) != n:
        raise ValueError(f"{len(strategy.responses)} responses for {n} parties")
    entries = {}
    for settings in all_contexts(n):
        chosen = tuple(strategy.outcome(p, settings[p]) for p in range(n))
        for outcomes in all_outcomes(dims):
            entries[(settings, outcomes)] = Fraction(outcomes == chosen)
    return BehaviorTable(n=n, dims=dims, entries=entries)


def quantum_behavior(
    state: StateVector, observables: Sequence[ObservablePair]
) -> BehaviorTable:
    """Tabulate the Born probabilities of a state over all contexts."""
    entries = {}
    for settings in all_contexts(state.n_parties):
        dist = outcome_distribution(state, observables, settings)
        for outcomes in all_outcomes(state.dims):
            entries[(settings, outcomes)] = float(
                dist[outcome_index(outcomes, state.dims)]
            )
    return BehaviorTable(n=state.n_parties, dims=state.dims, entries=entries)


def enumerate_lhv_max_q(
    spec: HardySpec,
) -> tuple[Fraction, DeterministicStrategy]:
    """Maximum success probability over local hidden-variable models.

    Returns the maximum together with a deterministic strategy attaining it.
    Deterministic strategies suffice: an LHV behavior is a convex mixture of
    deterministic ones, each zero condition is a sum of mixture weights and so
    vanishes only if every mixed-in strategy satisfies it, and the success
    probability is linear in the mixture — the maximum sits at a vertex.
    """
    n_strategies = prod(d * d for d in spec.dims)
    if n_strategies > MAX_STRATEGIES:
        raise ValueError(
            f"{n_strategies} deterministic strategies exceed the enumeration "
            f"limit {MAX_STRATEGIES}"
        )
    conditions = zero_conditions(spec)
    best: int | None = None
    witness: DeterministicStrategy | None = None
    for responses in product(
        *[product(range(1, d + 1), repeat=2) for d in spec.dims]
    ):
        strategy = DeterministicStrategy(responses)
        violates = any(
            all(strategy.outcome(p, s) == o for p, s, o in cond.fixed)
            for cond in conditions
        )
        if violates:
            continue
        q = int(
            all(strategy.outcome(p, Setting.U) == 1 for p in range(spec.n))
        )
        if best is None or q > best:
            best, witness = q, strategy
            if best == 1:
                break
    if best is None:
        raise Infeasible("no deterministic strategy satisfies the zero conditions")
    return Fraction(best), witness


@dataclass(frozen=True, eq=False)
class LinearEquation:
    """One equality ``sum coeffs[var] * x[var] = rhs`` over behavior entries."""

    coeffs: Mapping[int, int]
    rhs: int


def normalization_constraints(spec: HardySpec) -> list[LinearEquation]:
    """Per-context normalization: each context's entries sum to 1."""
    equations = []
    for settings in all_contexts(spec.n):
        coeffs = {
            variable_index(settings, outcomes, spec.dims): 1
            for outcomes in all_outcomes(spec.dims)
        }
        equations.append(LinearEquation(coeffs=coeffs, rhs=1))
    return equations


def nosignaling_constraints(spec: HardySpec) -> list[LinearEquation]:
    """Marginals of the other parties do not depend on any one party's setting.

    One equation per (party, remote context, remote outcome): the marginal
    over that party's outcomes with its setting U equals the marginal with its
    setting V.
    """
    equations = []
    for r in range(spec.n):
        others = [p for p in range(spec.n) if p != r]
        for remote_settings in product((Setting.U, Setting.V), repeat=spec.n - 1):
            for remote_outcomes in product(
                *[range(1, spec.dims[p] + 1) for p in others]
            ):
                coeffs: dict[int, int] = {}
                for s_r, sign in ((Setting.U, 1), (Setting.V, -1)):
                    settings = list(remote_settings)
                    settings.insert(r, s_r)
                    for o_r in range(1, spec.dims[r] + 1):
                        outcomes = list(remote_outcomes)
                        outcomes.insert(r, o_r)
                        coeffs[variable_index(settings, outcomes, spec.dims)] = sign
                equations.append(LinearEquation(coeffs=coeffs, rhs=0))
    return equations


def hardy_zero_constraints(spec: HardySpec) -> list[LinearEquation]:
    """Each forbidden event's marginal, in its designated context, equals 0.

    The designated context is the lexicographically smallest one containing
    the event's settings; no-signaling transports the zero to every other
    containing context (a property the tests assert on LP optima).
    """
    equations = []
    for cond in zero_conditions(spec):
        settings = cond.context(spec.n)
        fixed = {p: o for p, _, o in cond.fixed}
        free = [p for p in range(spec.n) if p not in fixed]
        coeffs = {}
        for assignment in product(*[range(1, spec.dims[p] + 1) for p in free]):
            outcome = [0] * spec.n
            for p, o in fixed.items():
                outcome[p] = o
            for p, o in zip(free, assignment):
                outcome[p] = o
            coeffs[variable_index(settings, outcome, spec.dims)] = 1
        equations.append(LinearEquation(coeffs=coeffs, rhs=0))
    return equations


def _forced_zero_variables(equations: Sequence[LinearEquation]) -> set[int]:
    """Variables pinned to 0 by one-sided homogeneous equations.

    Over x >= 0, an equation with rhs 0 whose live coefficients all share one
    sign forces every live variable to 0; fixing those can make further
    equations one-sided, so iterate to the fixed point.
    """
    forced: set[int] = set()
    changed = True
    while changed:
        changed = False
        for eq in equations:
            if eq.rhs != 0:
                continue
            live = [(v, c) for v, c in eq.coeffs.items() if v not in forced]
            if not live:
                continue
            if all(c > 0 for _, c in live) or all(c < 0 for _, c in live):
                forced.update(v for v, _ in live)
                changed = True
    return forced


def max_q_nosignaling(
    spec: HardySpec, variant: Variant | None = None
) -> tuple[Fraction, BehaviorTable]:
    """Exact maximum success probability over non-signaling behaviors.

    Maximizes the all-U all-outcome-1 entry subject to normalization,
    no-signaling, the zero conditions, and non-negativity.  Returns the
    optimum and an optimal behavior, both exact.
    """
    if variant is not None and Variant(variant) is not spec.variant:
        spec = HardySpec(spec.n, spec.dims, Variant(variant))
    equations = (
        normalization_constraints(spec)
        + nosignaling_constraints(spec)
        + hardy_zero_constraints(spec)
    )
    n_vars = 2**spec.n * prod(spec.dims)
    objective_var = variable_index(
        (Setting.U,) * spec.n, (1,) * spec.n, spec.dims
    )
    forced = _forced_zero_variables(equations)
    live = [v for v in range(n_vars) if v not in forced]
    column = {v: j for j, v in enumerate(live)}

    rows: list[tuple[int, ...]] = []
    rhs: list[int] = []
    seen: set[tuple] = set()
    for eq in equations:
        items = tuple(
            sorted((v, c) for v, c in eq.coeffs.items() if v not in forced)
        )
        if not items:
            if eq.rhs != 0:
                raise Infeasible(f"constraint forces an empty sum to {eq.rhs}")
            continue
        key = (items, eq.rhs)
        if key in seen:
            continue
        seen.add(key)
        row = [0] * len(live)
        for v, c in items:
            row[column[v]] = c
        rows.append(tuple(row))
        rhs.append(eq.rhs)

    c = [0] * len(live)
    if objective_var in column:
        c[column[objective_var]] = 1
    solution = simplex_solve(
        LinearProgram(a=tuple(rows), b=tuple(rhs), c=tuple(c))
    )

    entries = {}
    for settings in all_contexts(spec.n):
        for outcomes in all_outcomes(spec.dims):
            v = variable_index(settings, outcomes, spec.dims)
            entries[(settings, outcomes)] = (
                solution.x[column[v]] if v in column else Fraction(0)
            )
    table = BehaviorTable(n=spec.n, dims=spec.dims, entries=entries)
    value = solution.value if objective_var in column else Fraction(0)
    return value, table
