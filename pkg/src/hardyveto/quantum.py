"""Finite-dimensional pure states, two-setting local measurements, and subspace tools.

Conventions used throughout the package:

- A joint system of n parties with local dimensions ``dims = (d_1, ..., d_n)``
  is stored as a flat complex amplitude vector indexed in mixed radix with
  party 0 as the most significant digit.
- Measurement outcomes are labelled 1..d.  The two measurement settings per
  party are called U and V.
- Tolerances: 1e-9 for rank and orthogonality decisions, 1e-12 for
  normalization checks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import Iterable, Mapping, Sequence

import numpy as np

ATOL_RANK = 1e-9
ATOL_NORM = 1e-12

# Born weights below this are exact zeros of the model up to floating-point
# noise; sampling clamps them so that zero-probability events can never be
# drawn, not merely almost never.
PROB_CLAMP = 1e-12


class Setting(str, Enum):
    U = "U"
    V = "V"


def _as_unit_vector(vec: np.ndarray, what: str, atol: float = ATOL_NORM) -> np.ndarray:
    arr = np.asarray(vec, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"{what} must be one-dimensional, got shape {arr.shape}")
    norm = np.linalg.norm(arr)
    if abs(norm - 1.0) > atol:
        raise ValueError(f"{what} is not normalized: ||.|| = {norm!r}")
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state of an n-party system with heterogeneous local dimensions."""

    dims: tuple[int, ...]
    amps: np.ndarray

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 2 for d in dims):
            raise ValueError(f"local dimensions must all be >= 2, got {dims}")
        amps = _as_unit_vector(self.amps, "state amplitude vector")
        if amps.shape != (int(np.prod(dims)),):
            raise ValueError(
                f"amplitude vector has length {amps.shape[0]}, expected {int(np.prod(dims))}"
            )
        amps = amps.copy()
        amps.flags.writeable = False
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per party (party 0 first)."""
        return self.amps.reshape(self.dims)

    def close_to(self, other: "StateVector", atol: float = ATOL_RANK) -> bool:
        return self.dims == other.dims and bool(
            np.allclose(self.amps, other.amps, atol=atol, rtol=0.0)
        )

    def equal_up_to_phase(self, other: "StateVector", atol: float = ATOL_RANK) -> bool:
        if self.dims != other.dims:
            return False
        overlap = np.vdot(self.amps, other.amps)
        return abs(abs(overlap) - 1.0) <= atol

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: Mapping) -> "StateVector":
        amps = np.array([complex(re, im) for re, im in data["amps"]], dtype=np.complex128)
        return cls(tuple(data["dims"]), amps)

    @classmethod
    def from_json(cls, text: str) -> "StateVector":
        return cls.from_dict(json.loads(text))


def fix_global_phase(amps: np.ndarray, atol: float = ATOL_RANK) -> np.ndarray:
    """Rotate a global phase so the first non-negligible amplitude is real positive."""
    idx = np.flatnonzero(np.abs(amps) > atol)
    if idx.size == 0:
        raise ValueError("cannot fix the phase of a zero vector")
    lead = amps[idx[0]]
    return amps * (abs(lead) / lead)


@dataclass(frozen=True, eq=False)
class ObservablePair:
    """The two measurement settings of one party, as eigenbases.

    Row k of each basis is the eigenvector associated with outcome k+1.
    """

    u_basis: np.ndarray
    v_basis: np.ndarray

    def __post_init__(self) -> None:
        u = np.asarray(self.u_basis, dtype=np.complex128)
        v = np.asarray(self.v_basis, dtype=np.complex128)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"u_basis must be square, got shape {u.shape}")
        if v.shape != u.shape:
            raise ValueError(f"v_basis shape {v.shape} differs from u_basis shape {u.shape}")
        for name, basis in (("u_basis", u), ("v_basis", v)):
            gram = basis @ basis.conj().T
            if not np.allclose(gram, np.eye(basis.shape[0]), atol=ATOL_RANK, rtol=0.0):
                raise ValueError(f"{name} rows are not orthonormal")
        u = u.copy()
        v = v.copy()
        u.flags.writeable = False
        v.flags.writeable = False
        object.__setattr__(self, "u_basis", u)
        object.__setattr__(self, "v_basis", v)

    @property
    def d(self) -> int:
        return self.u_basis.shape[0]

    def basis(self, setting: Setting) -> np.ndarray:
        return self.u_basis if Setting(setting) is Setting.U else self.v_basis

    def eigenvector(self, setting: Setting, outcome: int) -> np.ndarray:
        if not 1 <= outcome <= self.d:
            raise ValueError(f"outcome {outcome} out of range 1..{self.d}")
        return self.basis(setting)[outcome - 1]

    def is_degenerate(self, atol: float = ATOL_RANK) -> bool:
        """True when the settings share an eigenvector (they commute on it)."""
        overlaps = np.abs(self.u_basis @ self.v_basis.conj().T)
        return bool(np.max(overlaps) >= 1.0 - atol)

    @classmethod
    def qubit_from_alpha(cls, alpha: complex, beta: complex | None = None) -> "ObservablePair":
        """Qubit pair with the V eigenbasis computational and |u=1> = alpha|v=1> + beta|v=2>.

        When beta is omitted it is taken real positive from normalization.
        """
        alpha = complex(alpha)
        if beta is None:
            rem = 1.0 - abs(alpha) ** 2
            if rem < -ATOL_NORM:
                raise ValueError(f"|alpha| = {abs(alpha)} exceeds 1")
            beta = complex(math.sqrt(max(rem, 0.0)))
        beta = complex(beta)
        if abs(abs(alpha) ** 2 + abs(beta) ** 2 - 1.0) > 1e-9:
            raise ValueError(
                f"|alpha|^2 + |beta|^2 = {abs(alpha)**2 + abs(beta)**2} is not 1"
            )
        u = np.array(
            [[alpha, beta], [np.conj(beta), -np.conj(alpha)]], dtype=np.complex128
        )
        return cls(u_basis=u, v_basis=np.eye(2, dtype=np.complex128))


def tensor_product(local_vectors: Sequence[np.ndarray]) -> StateVector:
    """Product state of per-party local vectors."""
    if not local_vectors:
        raise ValueError("need at least one local vector")
    dims = []
    amps = np.ones(1, dtype=np.complex128)
    for vec in local_vectors:
        arr = _as_unit_vector(vec, "local vector")
        dims.append(arr.shape[0])
        amps = np.kron(amps, arr)
    return StateVector(tuple(dims), amps)


def _check_context(
    state: StateVector,
    observables: Sequence[ObservablePair],
    settings: Sequence[Setting],
) -> list[Setting]:
    if len(observables) != state.n_parties:
        raise ValueError(
            f"{len(observables)} observable pairs for {state.n_parties} parties"
        )
    if len(settings) != state.n_parties:
        raise ValueError(f"{len(settings)} settings for {state.n_parties} parties")
    for party, (obs, d) in enumerate(zip(observables, state.dims)):
        if obs.d != d:
            raise ValueError(f"party {party}: observable dimension {obs.d} != {d}")
    return [Setting(s) for s in settings]


def born_probability(
    state: StateVector,
    observables: Sequence[ObservablePair],
    settings: Sequence[Setting],
    outcomes: Sequence[int],
) -> float:
    """Probability of a full outcome tuple in the given measurement context."""
    sts = _check_context(state, observables, settings)
    if len(outcomes) != state.n_parties:
        raise ValueError(f"{len(outcomes)} outcomes for {state.n_parties} parties")
    t = state.tensor()
    for obs, setting, outcome in zip(observables, sts, outcomes):
        e = obs.eigenvector(setting, outcome)
        t = np.tensordot(e.conj(), t, axes=(0, 0))
    return float(abs(complex(t)) ** 2)


def marginal_probability(
    state: StateVector,
    observables: Sequence[ObservablePair],
    settings: Sequence[Setting],
    fixed_outcomes: Mapping[int, int],
) -> float:
    """Probability that the parties in ``fixed_outcomes`` see the given outcomes.

    Defined as the sum of :func:`born_probability` over all completions of the
    outcome tuple; the value does not depend on the settings of the parties
    being marginalized over (no-signaling of the quantum model).
    """
    sts = _check_context(state, observables, settings)
    for party in fixed_outcomes:
        if not 0 <= party < state.n_parties:
            raise ValueError(f"party index {party} out of range")
    free = [p for p in range(state.n_parties) if p not in fixed_outcomes]
    total = 0.0
    for completion in product(*[range(1, state.dims[p] + 1) for p in free]):
        outcomes = [0] * state.n_parties
        for p, o in fixed_outcomes.items():
            outcomes[p] = o
        for p, o in zip(free, completion):
            outcomes[p] = o
        total += born_probability(state, observables, sts, outcomes)
    return total


def outcome_distribution(
    state: StateVector,
    observables: Sequence[ObservablePair],
    settings: Sequence[Setting],
    clamp: float = PROB_CLAMP,
) -> np.ndarray:
    """Full outcome distribution in one context, flat in mixed-radix outcome order.

    Entries below ``clamp`` are set to exactly zero and the vector is
    renormalized, so that model-forbidden events cannot be sampled.
    """
    sts = _check_context(state, observables, settings)
    t = state.tensor()
    for axis, (obs, setting) in enumerate(zip(observables, sts)):
        rot = obs.basis(setting).conj()
        t = np.moveaxis(np.tensordot(rot, t, axes=(1, axis)), 0, axis)
    p = np.abs(t.reshape(-1)) ** 2
    p[p < clamp] = 0.0
    return p / p.sum()


def sample_outcome(
    state: StateVector,
    observables: Sequence[ObservablePair],
    settings: Sequence[Setting],
    rng: np.random.Generator,
) -> tuple[int, ...]:
    """Draw one outcome tuple from the Born distribution of the given context."""
    p = outcome_distribution(state, observables, settings)
    flat = int(rng.choice(p.shape[0], p=p))
    outcomes = []
    for d in reversed(state.dims):
        outcomes.append(flat % d + 1)
        flat //= d
    return tuple(reversed(outcomes))


def gram_schmidt(
    vectors: Sequence[np.ndarray] | np.ndarray, tol: float = ATOL_RANK
) -> tuple[np.ndarray, int]:
    """Orthonormal basis of the span of ``vectors`` and its rank.

    Modified Gram-Schmidt with a second orthogonalization pass; vectors whose
    residual norm falls below ``tol`` are dropped as dependent.
    """
    mat = np.asarray(vectors, dtype=np.complex128)
    if mat.ndim != 2:
        raise ValueError(f"expected a sequence of vectors, got shape {mat.shape}")
    basis: list[np.ndarray] = []
    for row in mat:
        w = row.astype(np.complex128)
        for _ in range(2):
            for b in basis:
                w = w - np.vdot(b, w) * b
        norm = np.linalg.norm(w)
        if norm > tol:
            basis.append(w / norm)
    if not basis:
        return np.zeros((0, mat.shape[1]), dtype=np.complex128), 0
    return np.array(basis), len(basis)


def orthogonal_complement(
    vectors: Sequence[np.ndarray] | np.ndarray, tol: float = ATOL_RANK
) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(vectors)."""
    mat = np.asarray(vectors, dtype=np.complex128)
    if mat.ndim != 2:
        raise ValueError(f"expected a sequence of vectors, got shape {mat.shape}")
    _, svals, vh = np.linalg.svd(mat, full_matrices=True)
    rank = int(np.sum(svals > tol))
    return vh[rank:]


def schmidt_rank(
    state: StateVector, cut: Iterable[int], tol: float = ATOL_RANK
) -> int:
    """Schmidt rank of the state across the bipartition (cut | rest)."""
    cut_set = sorted(set(int(p) for p in cut))
    n = state.n_parties
    if any(p < 0 or p >= n for p in cut_set):
        raise ValueError(f"cut {cut_set} contains invalid party indices")
    if not cut_set or len(cut_set) == n:
        raise ValueError("cut must be a proper nonempty subset of the parties")
    rest = [p for p in range(n) if p not in cut_set]
    t = state.tensor().transpose(cut_set + rest)
    d_cut = int(np.prod([state.dims[p] for p in cut_set]))
    svals = np.linalg.svd(t.reshape(d_cut, -1), compute_uv=False)
    return int(np.sum(svals > tol))
