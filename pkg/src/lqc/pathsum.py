"""Path-sum amplitude oracle: an independent cross-check of the simulator.

Output amplitudes are computed by summing over explicit computational-
basis paths through the gate list -- the product of single-gate matrix
elements along every nonzero transition chain -- instead of evolving a
dense vector.  Each gate touches at most three wires, so a basis state
has few successors and the enumeration stays tractable under the size
caps (at most 8 gates on at most 5 wires).

The same enumeration yields summed weights over sets of outputs: the
acceptance weight of a designated yes-qubit, the total observable weight,
and dyadic-interval weights that drive an interval-halving search for the
dominant output.  All sums are reduced with pairwise tree summation so
results do not depend on enumeration chunking.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .errors import NoDominantSolutionError
from .gates import Gate, GateKind, local_matrix
from .state import WireKind, WireLayout

MAX_GATES = 8
MAX_WIRES = 5


class PathGate:
    """Sparse column action of one circuit layer on basis indices."""

    def columns(self, z: int) -> list[tuple[int, complex]]:
        """Nonzero entries of L|z>: pairs (z', amplitude)."""
        raise NotImplementedError


class EmbeddedGate(PathGate):
    """A primitive gate lifted to full-register basis indices."""

    def __init__(self, gate: Gate, layout: WireLayout):
        self.gate = gate
        self.layout = layout
        self._positions = [layout.bit_position(w) for w in gate.wires]
        if gate.kind is GateKind.ORACLE_FLIP:
            self._matrix = None
            self._table = gate.predicate.truth_table()
        else:
            self._matrix = local_matrix(gate)

    def _local_value(self, z: int) -> int:
        v = 0
        for pos in self._positions:
            v = (v << 1) | ((z >> pos) & 1)
        return v

    def _replace_local(self, z: int, value: int) -> int:
        for i, pos in enumerate(reversed(self._positions)):
            bit = (value >> i) & 1
            z = (z & ~(1 << pos)) | (bit << pos)
        return z

    def columns(self, z: int) -> list[tuple[int, complex]]:
        if self._matrix is None:
            work_positions = self._positions[:-1]
            v = 0
            for pos in work_positions:
                v = (v << 1) | ((z >> pos) & 1)
            if self._table[v]:
                return [(z ^ (1 << self._positions[-1]), 1.0 + 0.0j)]
            return [(z, 1.0 + 0.0j)]
        col = self._local_value(z)
        out = []
        for row in range(self._matrix.shape[0]):
            amp = self._matrix[row, col]
            if amp != 0:
                out.append((self._replace_local(z, row), complex(amp)))
        return out


class CountingAmplifierGate(PathGate):
    """One whole amplification layer fused into a single sparse layer.

    Acts as the hyperbolic rotation V(m * chi) on the hybit, where m is
    the number of set work bits (gated on the oracle bit when present).
    Rows stay 2-sparse, which keeps deep amplification circuits inside
    the path-enumeration budget.
    """

    def __init__(
        self,
        layout: WireLayout,
        work_wires: tuple[int, ...],
        hybit_wire: int,
        chi: float,
        oracle_wire: int | None = None,
        reps: int = 1,
    ):
        self.layout = layout
        self._work_pos = [layout.bit_position(w) for w in work_wires]
        self._hybit_bit = 1 << layout.bit_position(hybit_wire)
        self._oracle_pos = (
            None if oracle_wire is None else layout.bit_position(oracle_wire)
        )
        self.chi = chi
        self.reps = reps

    def columns(self, z: int) -> list[tuple[int, complex]]:
        m = sum((z >> pos) & 1 for pos in self._work_pos)
        if self._oracle_pos is not None and not (z >> self._oracle_pos) & 1:
            m = 0
        a = m * self.reps * self.chi
        if a == 0.0:
            return [(z, 1.0 + 0.0j)]
        c, s = math.cosh(a), math.sinh(a)
        if z & self._hybit_bit:  # hybit |1>: column (-i sinh, cosh)
            return [(z ^ self._hybit_bit, -1j * s), (z, c + 0.0j)]
        return [(z, c + 0.0j), (z ^ self._hybit_bit, 1j * s)]


@dataclass
class PathSumCircuit:
    layout: WireLayout
    gates: tuple[PathGate, ...]

    def __post_init__(self):
        if len(self.gates) > MAX_GATES:
            raise ValueError(f"{len(self.gates)} gates exceed cap {MAX_GATES}")
        if self.layout.n_wires > MAX_WIRES:
            raise ValueError(
                f"{self.layout.n_wires} wires exceed cap {MAX_WIRES}"
            )


def pathsum_view(circuit: Circuit) -> PathSumCircuit:
    """Adapt a gate-only circuit for path enumeration (caps enforced)."""
    gates = tuple(EmbeddedGate(g, circuit.layout) for g in circuit.gates)
    return PathSumCircuit(circuit.layout, gates)


def _tree_sum(values: list[complex]) -> complex:
    if not values:
        return 0.0 + 0.0j
    while len(values) > 1:
        values = [
            values[i] + values[i + 1] if i + 1 < len(values) else values[i]
            for i in range(0, len(values), 2)
        ]
    return values[0]


def amplitude(psc: PathSumCircuit, x: int, y: int) -> complex:
    """<y| L_t ... L_1 |x> as an explicit sum over transition paths."""
    contributions: list[complex] = []

    def walk(depth: int, z: int, product: complex):
        if depth == len(psc.gates):
            if z == y:
                contributions.append(product)
            return
        for z_next, amp in psc.gates[depth].columns(z):
            walk(depth + 1, z_next, product * amp)

    walk(0, x, 1.0 + 0.0j)
    return _tree_sum(contributions)


def _output_index(layout: WireLayout, y_qubits: int) -> int:
    """Full basis index of qubit value ``y_qubits`` with all hybits |0)."""
    qubits = layout.qubit_wires()
    z = 0
    for i, w in enumerate(qubits):
        bit = (y_qubits >> (len(qubits) - 1 - i)) & 1
        z |= bit << layout.bit_position(w)
    return z


def path_amplitude(psc: PathSumCircuit, x: int, y_qubits: int) -> float:
    """|A(y)|^2 for the observable output with qubit value ``y_qubits``."""
    a = amplitude(psc, x, _output_index(psc.layout, y_qubits))
    return abs(a) ** 2


def interval_weight(psc: PathSumCircuit, x: int, lo: int, hi: int) -> float:
    """Summed |A(y)|^2 over qubit outputs lo <= y < hi (hybits all |0))."""
    return float(
        np.sum([path_amplitude(psc, x, y) for y in range(lo, hi)])
        if hi > lo
        else 0.0
    )


def accept_amplitude(
    psc: PathSumCircuit, x: int, yes_wire: int
) -> tuple[float, float]:
    """(yes-branch weight, total observable weight) for a designated qubit.

    The yes weight inserts the projector onto the yes-qubit |1> outcome
    with every hybit |0); the total replaces it with the identity on the
    yes qubit (still hybits |0)).
    """
    layout = psc.layout
    if layout.kind_of(yes_wire) is not WireKind.QUBIT:
        raise ValueError("yes wire must be a qubit")
    qubits = layout.qubit_wires()
    yes_index = qubits.index(yes_wire)
    n_q = len(qubits)
    c_yes = 0.0
    total = 0.0
    for y in range(1 << n_q):
        w = path_amplitude(psc, x, y)
        total += w
        if (y >> (n_q - 1 - yes_index)) & 1:
            c_yes += w
    if total <= 0.0:
        raise ValueError("zero total observable amplitude")
    return c_yes, total


def branching_search(psc: PathSumCircuit, x: int) -> str:
    """Locate the dominant observable output by interval halving.

    At each of n_q steps the current dyadic interval is split and the
    half holding essentially the whole observable weight is kept; a half
    qualifies when its weight is at least (1 - 2^-(n_q + 2)) of the total.
    Raises :class:`NoDominantSolutionError` when neither half qualifies.
    """
    n_q = len(psc.layout.qubit_wires())
    w0 = interval_weight(psc, x, 0, 1 << n_q)
    if w0 <= 0.0:
        raise NoDominantSolutionError("zero observable weight")
    threshold = 1.0 - 2.0 ** -(n_q + 2)
    lo, hi = 0, 1 << n_q
    while hi - lo > 1:
        mid = (lo + hi) // 2
        w_low = interval_weight(psc, x, lo, mid)
        if w_low / w0 >= threshold:
            hi = mid
        elif (interval_weight(psc, x, mid, hi)) / w0 >= threshold:
            lo = mid
        else:
            raise NoDominantSolutionError(
                "no dominant solution: neither half carries the weight"
            )
    return format(lo, f"0{n_q}b")
