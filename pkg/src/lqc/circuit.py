"""Circuit representation, execution, and measurement.

Measurement semantics follow the hybit model: only basis components with
every hybit in |0) are observable, so outcome probabilities are always
renormalized over the observable subspace.  Measuring a hybit therefore
yields 0 with certainty and simply discards that hybit's |1) components;
measuring qubits distributes the observable weight over the qubit
outcomes.  Directives are applied after all gates (no mid-circuit
measurement), sequentially, each collapsing the state before the next.

Sampling is deterministic: a 64-bit seed keys a Philox counter-based
generator and each shot draws from its own jumped substream, so identical
(circuit, shots, seed) triples reproduce identical histograms.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from . import gates as gates_mod
from .errors import UnobservableStateError
from .state import RESCALE_THRESHOLD, LorentzState, WireKind, WireLayout

#: Cap on the joint outcome space of a directive chain (exact enumeration).
MAX_OUTCOME_SPACE = 1 << 16


class MeasurementBasis(str, enum.Enum):
    COMPUTATIONAL = "computational"
    X_BASIS = "x"


@dataclass(frozen=True)
class MeasurementDirective:
    wires: tuple[int, ...]
    basis: MeasurementBasis = MeasurementBasis.COMPUTATIONAL

    def __post_init__(self):
        if len(set(self.wires)) != len(self.wires):
            raise ValueError("directive wires must be distinct")
        if not self.wires:
            raise ValueError("directive needs at least one wire")


@dataclass(frozen=True)
class Circuit:
    layout: WireLayout
    gates: tuple[gates_mod.Gate, ...] = ()
    directives: tuple[MeasurementDirective, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "directives", tuple(self.directives))
        for g in self.gates:
            gates_mod.validate_gate(g, self.layout)
        for d in self.directives:
            for w in d.wires:
                if not 0 <= w < self.layout.n_wires:
                    raise ValueError(f"directive wire {w} outside layout")
                if (
                    d.basis is MeasurementBasis.X_BASIS
                    and self.layout.kind_of(w) is not WireKind.QUBIT
                ):
                    raise ValueError("x-basis measurement is only legal on qubits")


@dataclass
class RunRecord:
    """One measurement event: outcomes, collapsed state, branch probability."""

    outcome: dict[int, int]
    post_state: LorentzState
    probability: float


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator for substream ``stream`` of ``seed``."""
    bitgen = np.random.Philox(key=np.uint64(seed))
    if stream:
        bitgen = bitgen.jumped(stream)
    return np.random.Generator(bitgen)


def execute(circuit: Circuit, initial: LorentzState | None = None) -> LorentzState:
    """Run the gate list (not the directives) with automatic rescaling."""
    if initial is None:
        state = LorentzState.zeros_state(circuit.layout)
    else:
        if initial.layout != circuit.layout:
            raise ValueError("initial state layout differs from circuit layout")
        state = initial.copy()
    for g in circuit.gates:
        gates_mod.apply(state, g)
        if state.max_magnitude() > RESCALE_THRESHOLD:
            state.rescale()
    return state


# ---------------------------------------------------------------------------
# projection machinery

_X_PROJ = {
    +1: np.array([[0.5, 0.5], [0.5, 0.5]], dtype=np.complex128),
    -1: np.array([[0.5, -0.5], [-0.5, 0.5]], dtype=np.complex128),
}


def _zero_where_bit(amps: np.ndarray, layout: WireLayout, wire: int, bit: int) -> None:
    """Zero all amplitudes whose ``wire`` bit equals ``bit``."""
    pos = layout.bit_position(wire)
    idx = np.arange(layout.dim, dtype=np.int64)
    amps[((idx >> pos) & 1) == bit] = 0.0


def _project_wire_outcome(
    state: LorentzState, directive: MeasurementDirective, wire: int, value: int
) -> None:
    layout = state.layout
    if layout.kind_of(wire) is WireKind.HYBIT:
        # Forced outcome 0: drop this hybit's |1) components.
        _zero_where_bit(state.amps, layout, wire, 1)
    elif directive.basis is MeasurementBasis.COMPUTATIONAL:
        _zero_where_bit(state.amps, layout, wire, 1 - value)
    else:
        from ._kernels import apply_two_level

        tbit = 1 << layout.bit_position(wire)
        apply_two_level(state.amps, _X_PROJ[value], tbit)


def _wire_outcomes(layout: WireLayout, directive: MeasurementDirective, wire: int):
    if layout.kind_of(wire) is WireKind.HYBIT:
        return (0,)
    if directive.basis is MeasurementBasis.X_BASIS:
        return (+1, -1)
    return (0, 1)


def exact_outcome_probabilities(
    state: LorentzState, directive: MeasurementDirective
) -> dict[tuple[int, ...], float]:
    """Closed-form probabilities of every joint outcome of one directive.

    Keys are tuples of per-wire values in directive order (0/1 for
    computational wires and hybits, +1/-1 for x-basis wires).
    """
    total = state.observable_weight()
    if total <= 0.0:
        raise UnobservableStateError("state fully unobservable")
    layout = state.layout
    options = [_wire_outcomes(layout, directive, w) for w in directive.wires]
    probs: dict[tuple[int, ...], float] = {}
    for combo in itertools.product(*options):
        projected = state.copy()
        for wire, value in zip(directive.wires, combo):
            _project_wire_outcome(projected, directive, wire, value)
        probs[combo] = projected.observable_weight() / total
    return probs


def measure_partial(
    state: LorentzState, directive: MeasurementDirective, rng: np.random.Generator
) -> RunRecord:
    """Sample one joint outcome, collapse, and renormalize the state."""
    probs = exact_outcome_probabilities(state, directive)
    combos = list(probs.keys())
    cdf = np.cumsum([probs[c] for c in combos])
    pick = combos[int(np.searchsorted(cdf, rng.random() * cdf[-1], side="right"))]
    post = state.copy()
    for wire, value in zip(directive.wires, pick):
        _project_wire_outcome(post, directive, wire, value)
    post.rescale()
    return RunRecord(dict(zip(directive.wires, pick)), post, probs[pick])


def _format_outcome(directive: MeasurementDirective, combo: tuple[int, ...]) -> str:
    if directive.basis is MeasurementBasis.X_BASIS:
        return "".join("+" if v > 0 else "-" for v in combo)
    return "".join(str(v) for v in combo)


def outcome_chain_probabilities(
    circuit: Circuit, initial: LorentzState | None = None
) -> dict[str, float]:
    """Exact joint distribution over the full directive chain.

    Keys concatenate per-directive outcome strings with ';'.  Branches of
    zero probability are pruned.
    """
    state = execute(circuit, initial)
    results: dict[str, float] = {}

    def walk(st: LorentzState, d_index: int, prefix: list[str], weight: float):
        if weight <= 0.0:
            return
        if d_index == len(circuit.directives):
            key = ";".join(prefix)
            results[key] = results.get(key, 0.0) + weight
            return
        directive = circuit.directives[d_index]
        probs = exact_outcome_probabilities(st, directive)
        if len(results) * max(len(probs), 1) > MAX_OUTCOME_SPACE:
            raise ValueError("outcome space too large for exact enumeration")
        for combo, p in probs.items():
            if p <= 0.0:
                continue
            branch = st.copy()
            for wire, value in zip(directive.wires, combo):
                _project_wire_outcome(branch, directive, wire, value)
            branch.rescale()
            walk(branch, d_index + 1, prefix + [_format_outcome(directive, combo)], weight * p)

    walk(state, 0, [], 1.0)
    return results


def run_once(
    circuit: Circuit,
    rng: np.random.Generator,
    initial: LorentzState | None = None,
) -> list[RunRecord]:
    """Execute gates then apply every directive in order, sampling outcomes."""
    state = execute(circuit, initial)
    records = []
    for directive in circuit.directives:
        record = measure_partial(state, directive, rng)
        state = record.post_state
        records.append(record)
    return records


def sample(
    circuit: Circuit,
    shots: int,
    seed: int,
    initial: LorentzState | None = None,
) -> dict[str, int]:
    """Histogram of directive-chain outcomes over ``shots`` repetitions.

    The joint outcome distribution is computed exactly once; each shot
    draws from its own Philox substream, so the histogram is reproducible
    and independent of evaluation order.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    dist = outcome_chain_probabilities(circuit, initial)
    keys = sorted(dist.keys())
    cdf = np.cumsum([dist[k] for k in keys])
    histogram = {k: 0 for k in keys}
    for shot in range(shots):
        u = make_rng(seed, stream=shot + 1).random() * cdf[-1]
        histogram[keys[int(np.searchsorted(cdf, u, side="right"))]] += 1
    return {k: v for k, v in histogram.items() if v}
