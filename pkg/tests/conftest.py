"""Shared helpers: random layouts/states/gates and a dense-matrix oracle."""

import numpy as np
import pytest

from lqc.gates import Gate, GateKind, local_matrix
from lqc.state import LorentzState, Wire, WireKind, WireLayout


def make_layout(spec: str) -> WireLayout:
    """Layout from a kind string like 'qqh' (q = qubit, h = hybit)."""
    wires = [
        Wire(f"w{i}", WireKind.QUBIT if ch == "q" else WireKind.HYBIT)
        for i, ch in enumerate(spec)
    ]
    return WireLayout(wires)


def random_state(layout: WireLayout, rng: np.random.Generator) -> LorentzState:
    amps = rng.normal(size=layout.dim) + 1j * rng.normal(size=layout.dim)
    return LorentzState(layout, amps)


def random_compatible_gate(
    layout: WireLayout, kind: GateKind, rng: np.random.Generator
) -> Gate | None:
    """A random wire assignment of ``kind`` legal on ``layout``, or None."""
    qubits = list(layout.qubit_wires())
    hybits = list(layout.hybit_wires())
    anyk = qubits + hybits

    def pick(pool, exclude=()):
        pool = [w for w in pool if w not in exclude]
        return None if not pool else int(rng.choice(pool))

    chi = float(rng.uniform(0.1, 2.0))
    if kind in (GateKind.HADAMARD_Q, GateKind.SIGMA_X):
        t = pick(qubits)
        return None if t is None else Gate(kind, (t,))
    if kind in (GateKind.T_GATE, GateKind.SIGMA_Z):
        t = pick(anyk)
        return None if t is None else Gate(kind, (t,))
    if kind is GateKind.TAU:
        t = pick(hybits)
        return None if t is None else Gate(kind, (t,))
    if kind is GateKind.V:
        t = pick(hybits)
        return None if t is None else Gate(kind, (t,), chi=chi)
    if kind is GateKind.CONTROLLED_SIGMA_Z:
        c = pick(anyk)
        t = pick(anyk, exclude=(c,))
        return None if c is None or t is None else Gate(kind, (c, t))
    if kind is GateKind.CONTROLLED_H:
        c = pick(qubits)
        t = pick(qubits, exclude=(c,))
        return None if c is None or t is None else Gate(kind, (c, t))
    if kind is GateKind.CV:
        c = pick(qubits)
        t = pick(hybits)
        return None if c is None or t is None else Gate(kind, (c, t), chi=chi)
    if kind is GateKind.CCV:
        if len(qubits) < 2 or not hybits:
            return None
        c1, c2 = rng.choice(qubits, size=2, replace=False)
        return Gate(kind, (int(c1), int(c2), pick(hybits)), chi=chi)
    raise ValueError(kind)


def embed_matrix(layout: WireLayout, gate: Gate) -> np.ndarray:
    """Full-dimension matrix of a gate, built by index arithmetic.

    Independent of the stride kernels: used as the oracle for gate
    application on small registers.
    """
    positions = [layout.bit_position(w) for w in gate.wires]
    local = local_matrix(gate)
    k = len(gate.wires)
    full = np.zeros((layout.dim, layout.dim), dtype=np.complex128)
    for j in range(layout.dim):
        v = 0
        for pos in positions:
            v = (v << 1) | ((j >> pos) & 1)
        for row in range(1 << k):
            amp = local[row, v]
            if amp == 0:
                continue
            j2 = j
            for i, pos in enumerate(positions):
                bit = (row >> (k - 1 - i)) & 1
                j2 = (j2 & ~(1 << pos)) | (bit << pos)
            full[j2, j] += amp
    return full


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
