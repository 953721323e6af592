"""Primitive gates of the Lorentz quantum computer.

Unitary gates act on qubits; hybits evolve under complex Lorentz
transformations that preserve the indefinite inner product instead.  The
universal single-bit sets are {H, T} on qubits and {tau, T} on hybits,
joined by the four kind variants of the controlled-sigma_z gate.  On top
of those the hyperbolic rotation V(chi) and its singly/doubly controlled
forms CV and CCV provide the amplitude amplification every algorithm in
this package is built on.

``cv_decomposition`` and ``ccv_decomposition`` return the fixed-angle
realizations of CV and CCV out of controlled-sigma_z and tau gates; the
controlled rotation they implement is pinned to chi = 2*ln(1+sqrt(2))
(CV) and 4*ln(1+sqrt(2)) (CCV) by that construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from . import _kernels
from .state import LorentzState, WireKind, WireLayout

if TYPE_CHECKING:
    from .oracles import Predicate

#: Rotation angle realized by the controlled-sigma_z / tau CV circuit.
CHI_CV = 2.0 * math.log(math.sqrt(2.0) + 1.0)

#: Rotation angle realized by the 8-gate CCV circuit.
CHI_CCV = 4.0 * math.log(math.sqrt(2.0) + 1.0)

_SQRT2 = math.sqrt(2.0)


class GateKind(enum.Enum):
    HADAMARD_Q = "hadamard"
    T_GATE = "t"
    TAU = "tau"
    SIGMA_X = "sigma_x"
    SIGMA_Z = "sigma_z"
    CONTROLLED_SIGMA_Z = "controlled_sigma_z"
    CONTROLLED_H = "controlled_h"
    V = "v"
    CV = "cv"
    CCV = "ccv"
    ORACLE_FLIP = "oracle_flip"


#: (number of control wires, allowed control kinds, allowed target kinds)
_WIRE_RULES: dict[GateKind, tuple[int, tuple[WireKind, ...], tuple[WireKind, ...]]] = {
    GateKind.HADAMARD_Q: (0, (), (WireKind.QUBIT,)),
    GateKind.T_GATE: (0, (), (WireKind.QUBIT, WireKind.HYBIT)),
    GateKind.TAU: (0, (), (WireKind.HYBIT,)),
    GateKind.SIGMA_X: (0, (), (WireKind.QUBIT,)),
    GateKind.SIGMA_Z: (0, (), (WireKind.QUBIT, WireKind.HYBIT)),
    GateKind.CONTROLLED_SIGMA_Z: (
        1,
        (WireKind.QUBIT, WireKind.HYBIT),
        (WireKind.QUBIT, WireKind.HYBIT),
    ),
    GateKind.CONTROLLED_H: (1, (WireKind.QUBIT,), (WireKind.QUBIT,)),
    GateKind.V: (0, (), (WireKind.HYBIT,)),
    GateKind.CV: (1, (WireKind.QUBIT,), (WireKind.HYBIT,)),
    GateKind.CCV: (2, (WireKind.QUBIT,), (WireKind.HYBIT,)),
}

_PARAMETRIC = (GateKind.V, GateKind.CV, GateKind.CCV)


@dataclass(frozen=True)
class Gate:
    """A primitive operation: kind + wires (controls first, target last)."""

    kind: GateKind
    wires: tuple[int, ...]
    chi: float | None = None
    predicate: "Predicate | None" = field(default=None, compare=False)

    def __post_init__(self):
        if len(set(self.wires)) != len(self.wires):
            raise ValueError(f"{self.kind.value}: wires must be distinct")
        if self.kind in _PARAMETRIC:
            if self.chi is None or self.chi <= 0:
                raise ValueError(f"{self.kind.value}: chi must be positive")
        elif self.chi is not None:
            raise ValueError(f"{self.kind.value} takes no chi parameter")
        if self.kind is GateKind.ORACLE_FLIP:
            if self.predicate is None:
                raise ValueError("oracle_flip requires a predicate")
            if len(self.wires) != self.predicate.n + 1:
                raise ValueError(
                    "oracle_flip wires must be the predicate inputs plus "
                    "the oracle target"
                )
        elif self.predicate is not None:
            raise ValueError(f"{self.kind.value} takes no predicate")
        if self.kind in _WIRE_RULES:
            n_ctrl = _WIRE_RULES[self.kind][0]
            if len(self.wires) != n_ctrl + 1:
                raise ValueError(
                    f"{self.kind.value} takes {n_ctrl + 1} wires, "
                    f"got {len(self.wires)}"
                )

    @property
    def target(self) -> int:
        return self.wires[-1]

    @property
    def controls(self) -> tuple[int, ...]:
        return self.wires[:-1]


def validate_gate(gate: Gate, layout: WireLayout) -> None:
    """Check wire bounds and kind compatibility against a layout."""
    for w in gate.wires:
        if not 0 <= w < layout.n_wires:
            raise ValueError(f"wire {w} outside layout of {layout.n_wires} wires")
    if gate.kind is GateKind.ORACLE_FLIP:
        for w in gate.wires:
            if layout.kind_of(w) is not WireKind.QUBIT:
                raise ValueError("oracle_flip acts on qubit wires only")
        return
    _, ctrl_kinds, tgt_kinds = _WIRE_RULES[gate.kind]
    if layout.kind_of(gate.target) not in tgt_kinds:
        raise ValueError(
            f"{gate.kind.value}: target wire {gate.target} has kind "
            f"{layout.kind_of(gate.target).value}"
        )
    for c in gate.controls:
        if layout.kind_of(c) not in ctrl_kinds:
            raise ValueError(
                f"{gate.kind.value}: control wire {c} has kind "
                f"{layout.kind_of(c).value}"
            )


# ---------------------------------------------------------------------------
# matrices


def _v_matrix(chi: float) -> np.ndarray:
    c, s = math.cosh(chi), math.sinh(chi)
    return np.array([[c, -1j * s], [1j * s, c]], dtype=np.complex128)


def _base_2x2(kind: GateKind, chi: float | None) -> np.ndarray:
    if kind is GateKind.HADAMARD_Q or kind is GateKind.CONTROLLED_H:
        return np.array([[1, 1], [1, -1]], dtype=np.complex128) / _SQRT2
    if kind is GateKind.T_GATE:
        ph = np.exp(-1j * math.pi / 8)
        return ph * np.array(
            [[np.exp(1j * math.pi / 8), 0], [0, np.exp(-1j * math.pi / 8)]],
            dtype=np.complex128,
        )
    if kind is GateKind.TAU:
        return np.array([[_SQRT2, 1j], [1j, -_SQRT2]], dtype=np.complex128)
    if kind is GateKind.SIGMA_X:
        return np.array([[0, 1], [1, 0]], dtype=np.complex128)
    if kind in (GateKind.SIGMA_Z, GateKind.CONTROLLED_SIGMA_Z):
        return np.array([[1, 0], [0, -1]], dtype=np.complex128)
    if kind in (GateKind.V, GateKind.CV, GateKind.CCV):
        return _v_matrix(chi)
    raise ValueError(f"no base matrix for {kind.value}")


def matrix_of(kind: GateKind, chi: float | None = None) -> np.ndarray:
    """Full matrix of a gate kind: 2x2, or 4x4/8x8 for controlled kinds."""
    if kind is GateKind.ORACLE_FLIP:
        raise ValueError("matrix unavailable; apply directly")
    n_ctrl = _WIRE_RULES[kind][0]
    base = _base_2x2(kind, chi)
    if n_ctrl == 0:
        return base
    dim = 1 << (n_ctrl + 1)
    full = np.eye(dim, dtype=np.complex128)
    full[dim - 2 :, dim - 2 :] = base
    return full


def local_matrix(gate: Gate) -> np.ndarray:
    """Matrix of ``gate`` on its own wires, controls-first ordering."""
    return matrix_of(gate.kind, gate.chi)


# ---------------------------------------------------------------------------
# application


def _control_mask(layout: WireLayout, controls: tuple[int, ...]) -> int:
    mask = 0
    for c in controls:
        mask |= 1 << layout.bit_position(c)
    return mask


def _oracle_pairs(
    gate: Gate, layout: WireLayout
) -> tuple[np.ndarray, np.ndarray]:
    """Index pairs (oracle bit 0 / 1) of basis states the predicate marks."""
    work = gate.wires[:-1]
    table = gate.predicate.truth_table()
    idx = np.arange(layout.dim, dtype=np.int64)
    value = np.zeros(layout.dim, dtype=np.int64)
    for i, w in enumerate(work):
        value |= ((idx >> layout.bit_position(w)) & 1) << (len(work) - 1 - i)
    obit = 1 << layout.bit_position(gate.target)
    marked = table[value] & ((idx & obit) == 0)
    i0 = idx[marked]
    return i0, i0 + obit


def apply(state: LorentzState, gate: Gate) -> LorentzState:
    """Apply ``gate`` to ``state`` in place and return the state."""
    layout = state.layout
    validate_gate(gate, layout)
    if gate.kind is GateKind.ORACLE_FLIP:
        i0, i1 = _oracle_pairs(gate, layout)
        _kernels.swap_pairs(state.amps, i0, i1)
        return state
    tbit = 1 << layout.bit_position(gate.target)
    cmask = _control_mask(layout, gate.controls)
    _kernels.apply_two_level(state.amps, _base_2x2(gate.kind, gate.chi), tbit, cmask)
    return state


def apply_all(state: LorentzState, gates) -> LorentzState:
    for g in gates:
        apply(state, g)
    return state


# ---------------------------------------------------------------------------
# structural checks


def induced_metric(gate: Gate, layout: WireLayout) -> np.ndarray:
    """Metric on the gate's wire subspace: kron of I (qubit) / sigma_z (hybit)."""
    sigma = np.eye(1)
    for w in gate.wires:
        factor = (
            np.diag([1.0, -1.0])
            if layout.kind_of(w) is WireKind.HYBIT
            else np.eye(2)
        )
        sigma = np.kron(sigma, factor)
    return sigma


def is_lorentzian(gate: Gate, layout: WireLayout, tol: float = 1e-12) -> bool:
    """True iff the gate preserves the indefinite inner product on its wires."""
    if gate.kind is GateKind.ORACLE_FLIP:
        return True  # basis permutation of qubit wires: unitary, metric is I
    return matrix_is_lorentzian(local_matrix(gate), induced_metric(gate, layout), tol)


def matrix_is_lorentzian(mat: np.ndarray, sigma: np.ndarray, tol: float = 1e-12) -> bool:
    """Metric-congruence check for a raw matrix against a given metric.

    The tolerance is relative to the squared matrix magnitude; hyperbolic
    rotations at large angle cannot satisfy an absolute 1e-12 in doubles.
    """
    scale = max(1.0, float(np.max(np.abs(mat))) ** 2)
    residue = np.max(np.abs(mat.conj().T @ sigma @ mat - sigma))
    return bool(residue <= tol * scale)


# ---------------------------------------------------------------------------
# fixed-angle decompositions


def cv_decomposition(control: int, target: int) -> list[Gate]:
    """CV at chi = 2*ln(1+sqrt(2)) from two controlled-sigma_z and two tau gates.

    Gates are in application order; the composite acts as V on the target
    hybit when the control qubit is |1> and as the identity when it is |0>.
    """
    csz = Gate(GateKind.CONTROLLED_SIGMA_Z, (control, target))
    tau = Gate(GateKind.TAU, (target,))
    return [csz, tau, csz, tau]


def ccv_decomposition(controls: tuple[int, int], target: int) -> list[Gate]:
    """CCV at chi = 4*ln(1+sqrt(2)): alternating controlled-sigma_z / tau.

    The eight-gate sequence applies V to the target hybit only when both
    control qubits are |1>; any other control value collapses to the
    identity through tau^2 = I.
    """
    c1, c2 = controls
    tau = Gate(GateKind.TAU, (target,))
    return [
        Gate(GateKind.CONTROLLED_SIGMA_Z, (c1, target)),
        tau,
        Gate(GateKind.CONTROLLED_SIGMA_Z, (c2, target)),
        tau,
        Gate(GateKind.CONTROLLED_SIGMA_Z, (c1, target)),
        tau,
        Gate(GateKind.CONTROLLED_SIGMA_Z, (c2, target)),
        tau,
    ]
