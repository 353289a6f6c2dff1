"""Dense statevector ground truth for graph-level predictions.

Builds the amplitude vector of a graph state, applies projective Pauli
measurements, and checks stabilizer expectations, so every combinatorial
rewrite in :mod:`clusterbus.graph` can be validated against actual linear
algebra on small instances.

X and Y measurements are realized through their local-complementation
decomposition: the exact local Clifford ``sqrt(-iX_a) * prod_b sqrt(iZ_b)``
for each complementation, followed by a bare Z-basis projection of the
measured qubit.  With that protocol the post-measurement state stays equal
to the predicted graph state up to outcome-dependent local Paulis, which is
why ``|<K_a>| = 1`` is the exact acceptance test for every stabilizer of
the predicted graph.  Outcome labels for X/Y report the final projection in
that frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .graph import GraphState, NotANeighborError, PauliString
from .plan import MeasurementPlan, MeasurementStep

ORACLE_CAP = 22           # 2**22 complex doubles = 64 MiB
NORM_TOL = 1e-12
STABILIZER_TOL = 1e-9

_SQRT_MINUS_IX = np.array([[1, -1j], [-1j, 1]], dtype=complex) / np.sqrt(2.0)
_SQRT_IZ = np.array([[np.exp(1j * np.pi / 4), 0], [0, np.exp(-1j * np.pi / 4)]])
_HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


class OracleError(Exception):
    """Base class for oracle failures."""


class TooManyQubitsError(OracleError):
    """The active qubit count exceeds the dense-vector cap."""


class ZeroProbabilityError(OracleError):
    """A forced outcome has (numerically) zero probability."""


class UnsupportedQubitError(OracleError):
    """A Pauli string acts on a qubit absent from the state."""


@dataclass(frozen=True)
class Forced:
    """Deterministic outcome policy; the default forces +1."""

    outcome: int = 1

    def __post_init__(self) -> None:
        if self.outcome not in (1, -1):
            raise ValueError("forced outcome must be +1 or -1")


class Sampled:
    """Sample outcomes with their true probabilities from a seeded RNG."""

    def __init__(self, seed: int | np.random.Generator = 0) -> None:
        self.rng = np.random.default_rng(seed)


OutcomePolicy = Forced | Sampled


@dataclass(frozen=True)
class MeasurementOutcome:
    vertex: int
    basis: str
    outcome: int
    probability: float


@dataclass
class OracleState:
    """Amplitudes over the currently active qubits.

    ``qubit_order[j]`` is the vertex id carried by bit ``j`` (little
    endian).  ``graph`` is the graph-rule shadow of the protocol so far; it
    supplies the neighborhoods that parameterize the local-complementation
    unitaries of subsequent measurements.
    """

    qubit_order: tuple[int, ...]
    amplitudes: np.ndarray
    graph: GraphState

    @property
    def qubit_count(self) -> int:
        return len(self.qubit_order)

    def qubit_index(self, vertex: int) -> int:
        try:
            return self.qubit_order.index(vertex)
        except ValueError:
            raise UnsupportedQubitError(f"vertex {vertex} is not part of the state")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def copy(self) -> OracleState:
        return OracleState(self.qubit_order, self.amplitudes.copy(), self.graph.copy())


# -- elementary vector operations -------------------------------------------


def _apply_single(amps: np.ndarray, k: int, j: int, mat: np.ndarray) -> np.ndarray:
    """Apply a 2x2 unitary to bit ``j`` of a length-2**k amplitude vector."""
    work = amps.reshape(2 ** (k - j - 1), 2, 2**j)
    return np.einsum("ab,ibj->iaj", mat, work).reshape(-1)

def _apply_phase_pair(amps: np.ndarray, k: int, j: int, p0: complex, p1: complex) -> None:
    work = amps.reshape(2 ** (k - j - 1), 2, 2**j)
    work[:, 0, :] *= p0
    work[:, 1, :] *= p1


def _apply_cz_sign(amps: np.ndarray, k: int, ja: int, jb: int) -> None:
    idx = np.arange(amps.size, dtype=np.int64)
    both = ((idx >> ja) & (idx >> jb) & 1).astype(bool)
    amps[both] *= -1


def _lc_unitary(amps: np.ndarray, k: int, j_target: int, j_neighbors: Iterable[int]) -> np.ndarray:
    amps = _apply_single(amps, k, j_target, _SQRT_MINUS_IX)
    for jb in j_neighbors:
        _apply_phase_pair(amps, k, jb, _SQRT_IZ[0, 0], _SQRT_IZ[1, 1])
    return amps


# -- public operations -------------------------------------------------------


def statevector_from_graph(g: GraphState, cap: int = ORACLE_CAP) -> OracleState:
    """The graph state of the active subgraph of ``g`` as a dense vector.

    All amplitudes share magnitude 2**(-k/2); each edge contributes a sign
    flip on basis states where both endpoints read 1 (one CZ per edge
    applied to the uniform plus state).
    """
    order = tuple(g.active_vertices())
    k = len(order)
    if k > cap:
        raise TooManyQubitsError(f"{k} active qubits exceed the cap of {cap}")
    pos = {v: j for j, v in enumerate(order)}
    amps = np.full(2**k, 2.0 ** (-k / 2), dtype=complex)
    for a, b in g.edges():
        _apply_cz_sign(amps, k, pos[a], pos[b])
    return OracleState(order, amps, g.copy())


def apply_local_complement(s: OracleState, vertex: int) -> OracleState:
    """Apply the exact local Clifford that realizes a local complementation."""
    j = s.qubit_index(vertex)
    nbrs = s.graph.neighbors(vertex)
    k = s.qubit_count
    amps = _lc_unitary(s.amplitudes.copy(), k, j, (s.qubit_index(b) for b in nbrs))
    graph = s.graph.copy()
    graph.local_complement(vertex)
    return OracleState(s.qubit_order, amps, graph)


def _project_z(
    amps: np.ndarray, k: int, j: int, policy: OutcomePolicy
) -> tuple[np.ndarray, int, float]:
    """Project bit ``j``, renormalize, and drop the qubit from the vector."""
    work = amps.reshape(2 ** (k - j - 1), 2, 2**j)
    p0 = float(np.sum(np.abs(work[:, 0, :]) ** 2))
    p0 = min(max(p0, 0.0), 1.0)
    if isinstance(policy, Forced):
        bit = 0 if policy.outcome == 1 else 1
        prob = p0 if bit == 0 else 1.0 - p0
        if prob < NORM_TOL:
            raise ZeroProbabilityError(
                f"forced outcome {policy.outcome:+d} has probability {prob:.3e}"
            )
    else:
        # clamp numerically-dead branches so sampling never divides by ~0
        if p0 < NORM_TOL:
            bit = 1
        elif 1.0 - p0 < NORM_TOL:
            bit = 0
        else:
            bit = 0 if policy.rng.random() < p0 else 1
        prob = p0 if bit == 0 else 1.0 - p0
    kept = work[:, bit, :].reshape(-1) / np.sqrt(prob)
    return kept, (1 if bit == 0 else -1), prob


def apply_measurement(
    s: OracleState,
    vertex: int,
    basis: str,
    outcome_policy: OutcomePolicy | None = None,
    special: int | None = None,
) -> tuple[OracleState, MeasurementOutcome]:
    """Projectively measure ``vertex`` in a Pauli basis.

    The measured qubit is dropped from the state after projection.  For X
    measurements ``special`` selects the neighbor used for the enclosing
    local complementations (lowest id when omitted; ignored for isolated
    vertices).

    Returns the post-measurement state and the recorded outcome.
    """
    policy = outcome_policy or Forced()
    j = s.qubit_index(vertex)
    k = s.qubit_count
    amps = s.amplitudes.copy()
    stage = s.graph.copy()
    jdx = lambda v: s.qubit_index(v)  # noqa: E731 - local shorthand

    if basis == "Z":
        pass
    elif basis == "Y":
        amps = _lc_unitary(amps, k, j, (jdx(b) for b in stage.neighbors(vertex)))
        stage.local_complement(vertex)
    elif basis == "X":
        nbrs = stage.neighbors(vertex)
        if nbrs:
            b0 = special if special is not None else min(nbrs)
            if b0 not in nbrs:
                raise NotANeighborError(
                    f"special vertex {b0} is not a neighbor of {vertex}"
                )
            amps = _lc_unitary(amps, k, jdx(b0), (jdx(c) for c in stage.neighbors(b0)))
            stage.local_complement(b0)
            amps = _lc_unitary(amps, k, j, (jdx(c) for c in stage.neighbors(vertex)))
            stage.local_complement(vertex)
        else:
            amps = _apply_single(amps, k, j, _HADAMARD)
            b0 = None
    else:
        raise ValueError(f"unknown basis {basis!r}")

    amps, outcome, prob = _project_z(amps, k, j, policy)
    order = s.qubit_order[:j] + s.qubit_order[j + 1 :]

    if basis == "X" and b0 is not None:
        # trailing complementation of the X rule, on the post-projection graph
        stage.measure_z(vertex)
        k2 = len(order)
        amps = _lc_unitary(
            amps,
            k2,
            order.index(b0),
            (order.index(c) for c in stage.neighbors(b0)),
        )

    graph = s.graph.copy()
    if basis == "Z":
        graph.measure_z(vertex)
    elif basis == "Y":
        graph.measure_y(vertex)
    else:
        graph.measure_x(vertex, None if graph.degree(vertex) == 0 else b0)

    new_state = OracleState(order, amps, graph)
    if abs(new_state.norm() - 1.0) > NORM_TOL * 1e3:
        raise OracleError(f"norm drifted to {new_state.norm()!r} after projection")
    return new_state, MeasurementOutcome(vertex, basis, outcome, prob)


def stabilizer_expectation(s: OracleState, p: PauliString) -> complex:
    """Exact expectation value <psi|P|psi> of a Pauli string."""
    k = s.qubit_count
    transformed = s.amplitudes.copy()
    for vertex, letter in p.letters.items():
        j = s.qubit_index(vertex)
        work = transformed.reshape(2 ** (k - j - 1), 2, 2**j)
        if letter == "Z":
            work[:, 1, :] *= -1
        elif letter == "X":
            transformed = np.flip(work, axis=1).reshape(-1)
        else:  # Y
            flipped = np.empty_like(work)
            flipped[:, 0, :] = -1j * work[:, 1, :]
            flipped[:, 1, :] = 1j * work[:, 0, :]
            transformed = flipped.reshape(-1)
    return complex(p.sign * np.vdot(s.amplitudes, transformed))


def stabilizer_deviation(s: OracleState, g: GraphState) -> float:
    """Worst |1 - |<K_a>|| over all stabilizers of the active graph ``g``."""
    worst = 0.0
    for a in g.active_vertices():
        ex = stabilizer_expectation(s, g.stabilizer(a))
        worst = max(worst, abs(1.0 - abs(ex)))
    return worst


# -- full-plan verification ---------------------------------------------------


@dataclass(frozen=True)
class TrialRecord:
    outcomes: tuple[int, ...]
    worst_deviation: float
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "outcomes": list(self.outcomes),
            "worst_deviation": self.worst_deviation,
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    passed: bool
    worst_deviation: float
    trials: list[TrialRecord] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "passed": self.passed,
            "worst_deviation": self.worst_deviation,
            "trials": [t.to_json_dict() for t in self.trials],
        }


def run_plan(
    s: OracleState,
    plan: MeasurementPlan | Sequence[MeasurementStep],
    outcome_policy: OutcomePolicy | None = None,
) -> tuple[OracleState, list[MeasurementOutcome]]:
    """Execute a measurement plan on the statevector, step by step."""
    outcomes = []
    for step in plan:
        s, out = apply_measurement(s, step.vertex, step.basis, outcome_policy, step.special)
        outcomes.append(out)
    return s, outcomes


def verify_plan(
    g0: GraphState,
    plan: MeasurementPlan,
    predicted: GraphState,
    trials: int = 20,
    seed: int = 0,
    cap: int = ORACLE_CAP,
) -> VerificationReport:
    """Check a plan's predicted output graph against sampled-outcome physics.

    Every trial executes ``plan`` on the statevector of ``g0`` with freshly
    sampled outcomes and then demands ``|<K_a>| = 1`` (within 1e-9) for every
    stabilizer of ``predicted``.  The modulus absorbs the outcome-dependent
    local Pauli byproducts, so pass/fail must not depend on the outcome
    string.
    """
    want = set(predicted.active_vertices())
    have = set(g0.active_vertices()) - {step.vertex for step in plan}
    if want != have:
        raise ValueError(
            "predicted graph's active set does not match the plan's survivors"
        )
    base = statevector_from_graph(g0, cap=cap)
    rng = np.random.default_rng(seed)
    records: list[TrialRecord] = []
    worst = 0.0
    for _ in range(max(1, trials)):
        state, outs = run_plan(base.copy(), plan, Sampled(rng))
        dev = stabilizer_deviation(state, predicted)
        worst = max(worst, dev)
        records.append(
            TrialRecord(tuple(o.outcome for o in outs), dev, dev <= STABILIZER_TOL)
        )
    return VerificationReport(all(t.passed for t in records), worst, records)
