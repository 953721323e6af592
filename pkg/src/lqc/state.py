"""Lorentz statevectors over typed wire layouts.

A register mixes conventional qubits with hybits.  Qubit components carry
the ordinary positive metric while each hybit contributes a diag(1, -1)
signature factor, so the conserved quantity under gate action is the
indefinite inner product rather than the Euclidean norm.  Basis states in
which any hybit is in |1) are unobservable: every reported probability is
renormalized over the all-hybits-zero subspace.

Amplitudes are stored as a dense complex vector together with a global
``log_scale``: the true amplitudes are ``amps * exp(log_scale)``.  The
scale factor absorbs the unbounded hyperbolic growth of Lorentzian
amplification, which would otherwise overflow doubles; all physical
outputs are scale-free ratios.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import UnobservableStateError

#: Hard cap on total wire count (dense representation).
MAX_WIRES = 30

#: ``execute`` rescales automatically once the largest magnitude passes this.
RESCALE_THRESHOLD = 1e100


class WireKind(str, enum.Enum):
    QUBIT = "qubit"
    HYBIT = "hybit"


class WireRole(str, enum.Enum):
    WORK = "work"
    ORACLE = "oracle"
    AUXILIARY = "auxiliary"
    PLAIN = "plain"


@dataclass(frozen=True)
class Wire:
    label: str
    kind: WireKind
    role: WireRole = WireRole.PLAIN


class WireLayout:
    """Ordered wire declaration; wire 0 is the most significant index bit."""

    def __init__(self, wires: tuple[Wire, ...] | list[Wire]):
        wires = tuple(wires)
        if not wires:
            raise ValueError("layout needs at least one wire")
        if len(wires) > MAX_WIRES:
            raise ValueError(f"layout has {len(wires)} wires, cap is {MAX_WIRES}")
        labels = [w.label for w in wires]
        if len(set(labels)) != len(labels):
            raise ValueError("wire labels must be unique")
        self.wires = wires
        self.n_wires = len(wires)
        self.n_q = sum(1 for w in wires if w.kind is WireKind.QUBIT)
        self.n_h = self.n_wires - self.n_q
        self.dim = 1 << self.n_wires
        # Bitmask (in basis-index space) with a 1 at every hybit position.
        mask = 0
        for i, w in enumerate(wires):
            if w.kind is WireKind.HYBIT:
                mask |= 1 << self.bit_position(i)
        self.hybit_mask = mask
        self._observable_index: np.ndarray | None = None
        self._signature: np.ndarray | None = None

    def bit_position(self, wire: int) -> int:
        """Bit position of ``wire`` inside a basis index (wire 0 is MSB)."""
        return self.n_wires - 1 - wire

    def bit_of(self, index: int, wire: int) -> int:
        return (index >> self.bit_position(wire)) & 1

    def index_of_bits(self, bits: str) -> int:
        if len(bits) != self.n_wires:
            raise ValueError(
                f"bitstring length {len(bits)} != wire count {self.n_wires}"
            )
        return int(bits, 2)

    def kind_of(self, wire: int) -> WireKind:
        return self.wires[wire].kind

    def wires_of_role(self, role: WireRole) -> tuple[int, ...]:
        return tuple(i for i, w in enumerate(self.wires) if w.role is role)

    def qubit_wires(self) -> tuple[int, ...]:
        return tuple(
            i for i, w in enumerate(self.wires) if w.kind is WireKind.QUBIT
        )

    def hybit_wires(self) -> tuple[int, ...]:
        return tuple(
            i for i, w in enumerate(self.wires) if w.kind is WireKind.HYBIT
        )

    def observable_index(self) -> np.ndarray:
        """Indices of basis states with every hybit in |0), ascending."""
        if self._observable_index is None:
            if self.n_h == 0:
                self._observable_index = np.arange(self.dim, dtype=np.int64)
            else:
                idx = np.arange(self.dim, dtype=np.int64)
                self._observable_index = idx[(idx & self.hybit_mask) == 0]
        return self._observable_index

    def signature(self) -> np.ndarray:
        """Metric signs per basis state: (-1)**(number of hybits in |1))."""
        if self._signature is None:
            idx = np.arange(self.dim, dtype=np.int64)
            parity = np.bitwise_count(idx & self.hybit_mask) & 1
            self._signature = np.where(parity == 1, -1.0, 1.0)
        return self._signature

    def qubit_string(self, index: int) -> str:
        """Bit values of the qubit wires of basis state ``index``, in wire order."""
        return "".join(str(self.bit_of(index, w)) for w in self.qubit_wires())

    def __eq__(self, other) -> bool:
        return isinstance(other, WireLayout) and self.wires == other.wires

    def __repr__(self) -> str:
        spec = ",".join(f"{w.label}:{w.kind.value[0]}" for w in self.wires)
        return f"WireLayout({spec})"


def layout_of(spec: str) -> WireLayout:
    """Build a layout from a compact spec like ``'q q h'`` (kinds only)."""
    wires = []
    for i, tok in enumerate(spec.split()):
        kind = WireKind.QUBIT if tok == "q" else WireKind.HYBIT
        wires.append(Wire(f"w{i}", kind))
    return WireLayout(wires)


@dataclass
class ObservableDistribution:
    """Probabilities over qubit outcomes, restricted to the observable subspace.

    ``entries`` maps qubit bitstrings (qubit wires in layout order) to
    probabilities; zero-probability outcomes are omitted.  ``observable_weight``
    is the unnormalized squared-amplitude mass of the all-hybits-zero
    subspace in stored units (multiply by ``exp(2 * log_scale)`` for the
    absolute value).
    """

    entries: dict[str, float]
    observable_weight: float
    log_scale: float

    def probability(self, bits: str) -> float:
        return self.entries.get(bits, 0.0)


class LorentzState:
    """Dense amplitude vector over a typed layout with a global log scale."""

    def __init__(self, layout: WireLayout, amps: np.ndarray, log_scale: float = 0.0):
        amps = np.asarray(amps, dtype=np.complex128)
        if amps.shape != (layout.dim,):
            raise ValueError(f"amplitude vector length {amps.shape} != {layout.dim}")
        self.layout = layout
        self.amps = amps
        self.log_scale = float(log_scale)

    @classmethod
    def basis_state(cls, layout: WireLayout, bits: str) -> "LorentzState":
        amps = np.zeros(layout.dim, dtype=np.complex128)
        amps[layout.index_of_bits(bits)] = 1.0
        return cls(layout, amps)

    @classmethod
    def zeros_state(cls, layout: WireLayout) -> "LorentzState":
        return cls.basis_state(layout, "0" * layout.n_wires)

    def copy(self) -> "LorentzState":
        return LorentzState(self.layout, self.amps.copy(), self.log_scale)

    def max_magnitude(self) -> float:
        return float(np.max(np.abs(self.amps))) if self.amps.size else 0.0

    def indefinite_norm(self) -> float:
        """Signed squared norm: sum of sign(j) * |a_j|^2, scale applied."""
        signed = self.layout.signature() * (np.abs(self.amps) ** 2)
        return float(np.sum(signed) * math.exp(2.0 * self.log_scale))

    def observable_weight(self) -> float:
        """Squared-amplitude mass of the all-hybits-zero subspace (stored units)."""
        obs = self.layout.observable_index()
        return float(np.sum(np.abs(self.amps[obs]) ** 2))

    def observable_distribution(self) -> ObservableDistribution:
        """Probabilities of qubit outcomes, hybit-|1) components discarded."""
        obs = self.layout.observable_index()
        weights = np.abs(self.amps[obs]) ** 2
        total = float(np.sum(weights))
        if total <= 0.0:
            raise UnobservableStateError("state fully unobservable")
        entries: dict[str, float] = {}
        for idx, w in zip(obs, weights):
            if w == 0.0:
                continue
            key = self.layout.qubit_string(int(idx))
            entries[key] = entries.get(key, 0.0) + float(w) / total
        return ObservableDistribution(entries, total, self.log_scale)

    def rescale(self) -> "LorentzState":
        """Divide out the max magnitude, folding it into ``log_scale``."""
        m = self.max_magnitude()
        if m == 0.0:
            return self
        self.amps /= m
        self.log_scale += math.log(m)
        return self

    def __repr__(self) -> str:
        return (
            f"LorentzState(dim={self.layout.dim}, log_scale={self.log_scale:.6g})"
        )
