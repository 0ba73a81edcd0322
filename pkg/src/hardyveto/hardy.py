"""Construction of multipartite states exhibiting Hardy-type nonlocality.

A Hardy argument for n parties, each choosing between two local measurements
U and V, is a finite list of joint events that the target state must give
probability zero, together with one strictly positive "success" event: all
parties measure U and all obtain outcome 1.

Two condition families are supported:

- CONVENTIONAL: for every party r, the event "everyone except r gets U-outcome
  1 while r gets a V-outcome other than d_r" is forbidden.
- MODIFIED: for every party r, the two-party event "r gets a V-outcome other
  than d_r while party r+1 (cyclically) gets U-outcome 1" is forbidden.

Both families additionally forbid the event "every party gets V-outcome d".

Every product state compatible with one of the forbidden events must be
orthogonal to the target state.  Collecting those products, the target lives
in the orthogonal complement of their span; for qubits under the MODIFIED
family the span has dimension 2^n - 1, so the complement is one-dimensional
and the state is unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations, permutations, product
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .quantum import (
    ATOL_RANK,
    ObservablePair,
    Setting,
    StateVector,
    born_probability,
    fix_global_phase,
    gram_schmidt,
    marginal_probability,
    orthogonal_complement,
    schmidt_rank,
    tensor_product,
)


class Variant(str, Enum):
    CONVENTIONAL = "conventional"
    MODIFIED = "modified"


class DegenerateObservables(ValueError):
    """Raised when a party's two settings share an eigenvector."""


@dataclass(frozen=True)
class HardySpec:
    """Shape of a Hardy argument: party count, local dimensions, condition family."""

    n: int
    dims: tuple[int, ...]
    variant: Variant

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"need at least 2 parties, got {self.n}")
        dims = tuple(int(d) for d in self.dims)
        if len(dims) != self.n:
            raise ValueError(f"{len(dims)} dimensions for {self.n} parties")
        if any(d < 2 for d in dims):
            raise ValueError(f"local dimensions must be >= 2, got {dims}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "variant", Variant(self.variant))

    @classmethod
    def qubits(cls, n: int, variant: Variant = Variant.MODIFIED) -> "HardySpec":
        return cls(n, (2,) * n, variant)


@dataclass(frozen=True)
class ZeroCondition:
    """One forbidden joint event.

    ``fixed`` lists (party, setting, outcome) triples; parties not listed are
    unconstrained.  The all-V condition fixes every party at its top V outcome.
    """

    fixed: tuple[tuple[int, Setting, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(
            self,
            "fixed",
            tuple(sorted((int(p), Setting(s), int(o)) for p, s, o in self.fixed)),
        )

    def parties(self) -> tuple[int, ...]:
        return tuple(p for p, _, _ in self.fixed)

    def label(self) -> str:
        return " & ".join(
            f"{s.value.lower()}{p + 1}={o}" for p, s, o in self.fixed
        )

    def context(self, n: int) -> list[Setting]:
        """Lexicographically smallest measurement context containing the event."""
        settings = [Setting.U] * n
        for p, s, _ in self.fixed:
            settings[p] = s
        return settings

    def is_all_v(self, spec: HardySpec) -> bool:
        return self.fixed == tuple(
            (p, Setting.V, spec.dims[p]) for p in range(spec.n)
        )


def zero_conditions(spec: HardySpec) -> list[ZeroCondition]:
    """The forbidden events of the given Hardy argument, all-V condition last."""
    conditions: list[ZeroCondition] = []
    for r in range(spec.n):
        for v in range(1, spec.dims[r]):
            if spec.variant is Variant.MODIFIED:
                s = (r + 1) % spec.n
                conditions.append(
                    ZeroCondition(((r, Setting.V, v), (s, Setting.U, 1)))
                )
            else:
                fixed = [(i, Setting.U, 1) for i in range(spec.n) if i != r]
                fixed.append((r, Setting.V, v))
                conditions.append(ZeroCondition(tuple(fixed)))
    conditions.append(
        ZeroCondition(tuple((p, Setting.V, spec.dims[p]) for p in range(spec.n)))
    )
    return conditions


def zero_condition_products(
    spec: HardySpec, observables: Sequence[ObservablePair]
) -> list[StateVector]:
    """Product states consistent with the forbidden events.

    Parties left free by a condition are expanded over their full U eigenbasis,
    so each condition contributes one product per assignment of its free
    parties and the target state must be orthogonal to all of them.
    """
    _check_observables(spec, observables)
    products: list[StateVector] = []
    for cond in zero_conditions(spec):
        fixed = dict((p, (s, o)) for p, s, o in cond.fixed)
        free = [p for p in range(spec.n) if p not in fixed]
        for assignment in product(*[range(1, spec.dims[p] + 1) for p in free]):
            locals_: list[np.ndarray] = []
            free_iter = iter(assignment)
            for p in range(spec.n):
                if p in fixed:
                    s, o = fixed[p]
                    locals_.append(observables[p].eigenvector(s, o))
                else:
                    locals_.append(
                        observables[p].eigenvector(Setting.U, next(free_iter))
                    )
            products.append(tensor_product(locals_))
    return products


@dataclass(frozen=True, eq=False)
class HardySubspace:
    """Span of the zero-condition products and its orthogonal complement."""

    spec: HardySpec
    span_rank: int
    complement: np.ndarray

    @property
    def dim_complement(self) -> int:
        return self.complement.shape[0]


@dataclass(frozen=True, eq=False)
class HardyState:
    """A state satisfying all zero conditions, with its success probability q."""

    spec: HardySpec
    state: StateVector
    q: float


def _check_observables(
    spec: HardySpec, observables: Sequence[ObservablePair]
) -> None:
    if len(observables) != spec.n:
        raise ValueError(f"{len(observables)} observable pairs for {spec.n} parties")
    for p, (obs, d) in enumerate(zip(observables, spec.dims)):
        if obs.d != d:
            raise ValueError(f"party {p}: observable dimension {obs.d} != {d}")
    for p, obs in enumerate(observables):
        if obs.is_degenerate():
            raise DegenerateObservables(
                f"party {p}: the U and V settings share an eigenvector"
            )


def build_hardy_subspace(
    spec: HardySpec,
    observables: Sequence[ObservablePair],
    tol: float = ATOL_RANK,
) -> HardySubspace:
    products = zero_condition_products(spec, observables)
    mat = np.array([p.amps for p in products])
    _, rank = gram_schmidt(mat, tol)
    complement = orthogonal_complement(mat, tol)
    return HardySubspace(spec=spec, span_rank=rank, complement=complement)


def build_hardy_state(
    spec: HardySpec,
    observables: Sequence[ObservablePair],
    tol: float = ATOL_RANK,
) -> HardyState | np.ndarray:
    """The Hardy state for the given observables, when it is unique.

    Returns a :class:`HardyState` when the zero-condition span has a
    one-dimensional complement (always the case for qubits under the MODIFIED
    family with non-degenerate observables).  Otherwise returns the complement
    basis; any unit vector in it satisfies the zero conditions, but no
    uniqueness or positivity claim is made.
    """
    subspace = build_hardy_subspace(spec, observables, tol)
    all_qubits = all(d == 2 for d in spec.dims)
    if subspace.dim_complement != 1:
        if all_qubits and spec.variant is Variant.MODIFIED:
            raise DegenerateObservables(
                f"complement dimension {subspace.dim_complement} != 1; "
                "the observables are numerically degenerate"
            )
        return subspace.complement
    amps = fix_global_phase(subspace.complement[0], tol)
    state = StateVector(spec.dims, amps)
    q = born_probability(
        state, observables, [Setting.U] * spec.n, [1] * spec.n
    )
    return HardyState(spec=spec, state=state, q=q)


def q_value_3qubit(alphas: Sequence[complex], betas: Sequence[complex] | None = None) -> float:
    """Success probability of the three-qubit MODIFIED Hardy state.

    ``alphas`` are the overlaps <v=1|u=1> per party; ``betas`` default to the
    positive square roots fixed by normalization.
    """
    if len(alphas) != 3:
        raise ValueError("exactly three alphas required")
    a2 = float(np.prod([abs(a) ** 2 for a in alphas]))
    if betas is None:
        b2 = float(np.prod([1.0 - abs(a) ** 2 for a in alphas]))
    else:
        if len(betas) != 3:
            raise ValueError("exactly three betas required")
        b2 = float(np.prod([abs(b) ** 2 for b in betas]))
    if not 0.0 < a2 < 1.0:
        raise DegenerateObservables(f"|alpha_1 alpha_2 alpha_3|^2 = {a2} not in (0, 1)")
    return a2 * b2 / (1.0 - a2)


def maximize_q_3qubit() -> tuple[float, tuple[float, float, float]]:
    """Maximum of :func:`q_value_3qubit` and the alphas attaining it.

    The objective is invariant under permuting the parties and its maximum is
    attained at equal |alpha_j|^2 (checked against a dense grid in the test
    suite), so the search reduces to one variable a = |alpha|^2:
    f(a) = a^3 (1-a)^3 / (1 - a^3).
    """

    def negated(a: float) -> float:
        return -(a**3) * (1.0 - a) ** 3 / (1.0 - a**3)

    res = minimize_scalar(negated, bounds=(1e-9, 1.0 - 1e-9), method="bounded",
                          options={"xatol": 1e-12})
    a = float(res.x)
    alpha = float(np.sqrt(a))
    return -float(res.fun), (alpha, alpha, alpha)


def veto_observables(n: int) -> list[ObservablePair]:
    """Protocol settings for n qubits: U is sigma_z, V is minus sigma_x.

    Outcome 1 maps to eigenvalue +1 and outcome 2 to eigenvalue -1, so the V
    eigenvector for outcome 1 is |->, and for outcome 2 it is |+>.
    """
    u = np.eye(2, dtype=np.complex128)
    s = 1.0 / np.sqrt(2.0)
    v = np.array([[s, -s], [s, s]], dtype=np.complex128)
    return [ObservablePair(u_basis=u, v_basis=v) for _ in range(n)]


def build_veto_state(n: int) -> StateVector:
    """The permutation-symmetric n-qubit state driving the veto protocol.

    Proportional to 2^(n/2) |1...1> minus the product of |+> states, with
    normalization 1/sqrt(2^n - 1).
    """
    if n < 2:
        raise ValueError(f"need at least 2 parties, got {n}")
    if n > 12:
        raise ValueError(f"{n} qubits exceed the supported size (12)")
    dim = 2**n
    amps = np.full(dim, -(2.0 ** (-n / 2.0)), dtype=np.complex128)
    amps[dim - 1] += 2.0 ** (n / 2.0)
    amps /= np.sqrt(dim - 1.0)
    return StateVector((2,) * n, amps)


@dataclass(frozen=True)
class ConditionValue:
    label: str
    probability: float
    passed: bool


@dataclass(frozen=True)
class ConditionReport:
    entries: tuple[ConditionValue, ...]
    q: float
    passed: bool


def _is_permutation_symmetric(state: StateVector, atol: float = ATOL_RANK) -> bool:
    if len(set(state.dims)) != 1:
        return False
    t = state.tensor()
    n = state.n_parties
    for i in range(n - 1):
        axes = list(range(n))
        axes[i], axes[i + 1] = axes[i + 1], axes[i]
        if not np.allclose(t, t.transpose(axes), atol=atol, rtol=0.0):
            return False
    return True


def verify_hardy_conditions(
    state: StateVector,
    observables: Sequence[ObservablePair],
    spec: HardySpec,
    tol: float = ATOL_RANK,
) -> ConditionReport:
    """Evaluate every forbidden event and the success event on a state.

    For permutation-symmetric states under the MODIFIED family the pair
    conditions are additionally checked for every ordered pair of parties,
    not only cyclic neighbours.
    """
    entries: list[ConditionValue] = []
    for cond in zero_conditions(spec):
        value = marginal_probability(
            state,
            observables,
            cond.context(spec.n),
            {p: o for p, _, o in cond.fixed},
        )
        entries.append(ConditionValue(cond.label(), value, value <= tol))
    if spec.variant is Variant.MODIFIED and _is_permutation_symmetric(state):
        for r, s in permutations(range(spec.n), 2):
            if s == (r + 1) % spec.n:
                continue
            for v in range(1, spec.dims[r]):
                settings = [Setting.U] * spec.n
                settings[r] = Setting.V
                value = marginal_probability(
                    state, observables, settings, {r: v, s: 1}
                )
                entries.append(
                    ConditionValue(f"v{r + 1}={v} & u{s + 1}=1", value, value <= tol)
                )
    q = born_probability(state, observables, [Setting.U] * spec.n, [1] * spec.n)
    passed = all(e.passed for e in entries) and q > tol
    return ConditionReport(entries=tuple(entries), q=q, passed=passed)


@dataclass(frozen=True)
class EntanglementReport:
    cut_ranks: tuple[tuple[tuple[int, ...], int], ...]
    genuinely_entangled: bool


def verify_genuine_entanglement(
    state: StateVector, tol: float = ATOL_RANK
) -> EntanglementReport:
    """Schmidt rank across every bipartition; genuine iff all ranks exceed 1."""
    n = state.n_parties
    # one representative per unordered bipartition: the side containing party 0
    cuts = [
        (0,) + others
        for size in range(0, n - 1)
        for others in combinations(range(1, n), size)
    ]
    cut_ranks = [(cut, schmidt_rank(state, cut, tol)) for cut in cuts]
    return EntanglementReport(
        cut_ranks=tuple(cut_ranks),
        genuinely_entangled=all(r >= 2 for _, r in cut_ranks),
    )
