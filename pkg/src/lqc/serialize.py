"""Circuit JSON schema and oracle spec strings.

Document shape (field names are normative for the CLI):

    {"wires": [{"label": "x1", "kind": "qubit", "role": "work"}, ...],
     "gates": [{"kind": "cv", "wires": [0, 2], "chi": 1.76},
               {"kind": "oracle_flip", "wires": [0, 1, 2],
                "oracle": "less-than:3"}],
     "measurements": [{"wires": [0, 1], "basis": "computational"}]}

Oracle spec strings name a predicate together with its instance data:

    graph-is:<dimacs path>     independent-set test of a graph
    k-is:<dimacs path>:<k>     independent sets of exactly k vertices
    cnf:<dimacs path>          CNF satisfaction
    less-than:<z>              work value, read as binary, is below z
    const:<0|1>                constant predicate
"""

from __future__ import annotations

import json
from pathlib import Path

from .circuit import Circuit, MeasurementBasis, MeasurementDirective
from .errors import FormatError
from .gates import Gate, GateKind
from .oracles import (
    Predicate,
    cnf_predicate,
    constant_predicate,
    independent_set_predicate,
    k_is_predicate,
    less_than_predicate,
    parse_dimacs_cnf,
    parse_dimacs_graph,
)
from .state import LorentzState, Wire, WireKind, WireLayout, WireRole

_KIND_BY_NAME = {k.value: k for k in GateKind}


def parse_oracle_spec(spec: str, width: int, base_dir: Path | None = None) -> Predicate:
    """Resolve an oracle spec string to a width-checked predicate."""
    base = base_dir or Path(".")
    head, _, rest = spec.partition(":")
    try:
        if head == "graph-is":
            pred = independent_set_predicate(parse_dimacs_graph((base / rest).read_text()))
        elif head == "k-is":
            path, _, k = rest.rpartition(":")
            pred = k_is_predicate(
                parse_dimacs_graph((base / path).read_text()), int(k)
            )
        elif head == "cnf":
            pred = cnf_predicate(parse_dimacs_cnf((base / rest).read_text()))
        elif head == "less-than":
            pred = less_than_predicate(int(rest), width)
        elif head == "const":
            pred = constant_predicate(width, bool(int(rest)))
        else:
            raise FormatError(f"unknown oracle spec {spec!r}")
    except (OSError, TypeError) as exc:
        raise FormatError(f"cannot resolve oracle spec {spec!r}: {exc}")
    if pred.n != width:
        raise FormatError(
            f"oracle {spec!r} has width {pred.n}, gate provides {width} work wires"
        )
    return pred


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise FormatError(f"missing required field {key!r}", where)
    return doc[key]


def circuit_from_json(
    doc: dict | str, base_dir: Path | None = None
) -> Circuit:
    """Build a circuit from a schema document (dict or JSON text)."""
    if isinstance(doc, str):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise FormatError(f"invalid JSON: {exc.msg}", f"line {exc.lineno}")
    if not isinstance(doc, dict):
        raise FormatError("top-level document must be an object")

    wires = []
    for i, w in enumerate(_require(doc, "wires", "$")):
        where = f"wires[{i}]"
        if not isinstance(w, dict):
            raise FormatError("wire entry must be an object", where)
        try:
            kind = WireKind(_require(w, "kind", where))
        except ValueError:
            raise FormatError(f"unknown wire kind {w.get('kind')!r}", where)
        try:
            role = WireRole(w.get("role", "plain"))
        except ValueError:
            raise FormatError(f"unknown wire role {w.get('role')!r}", where)
        wires.append(Wire(str(_require(w, "label", where)), kind, role))
    try:
        layout = WireLayout(wires)
    except ValueError as exc:
        raise FormatError(str(exc), "wires")

    gates = []
    for i, g in enumerate(doc.get("gates", [])):
        where = f"gates[{i}]"
        if not isinstance(g, dict):
            raise FormatError("gate entry must be an object", where)
        kind_name = _require(g, "kind", where)
        if kind_name not in _KIND_BY_NAME:
            raise FormatError(f"unknown gate kind {kind_name!r}", where)
        kind = _KIND_BY_NAME[kind_name]
        gate_wires = tuple(int(x) for x in _require(g, "wires", where))
        chi = g.get("chi")
        predicate = None
        if kind is GateKind.ORACLE_FLIP:
            spec = _require(g, "oracle", where)
            predicate = parse_oracle_spec(str(spec), len(gate_wires) - 1, base_dir)
        try:
            gate = Gate(
                kind,
                gate_wires,
                chi=float(chi) if chi is not None else None,
                predicate=predicate,
            )
            from .gates import validate_gate

            validate_gate(gate, layout)
        except ValueError as exc:
            raise FormatError(str(exc), where)
        gates.append(gate)

    directives = []
    for i, m in enumerate(doc.get("measurements", [])):
        where = f"measurements[{i}]"
        if not isinstance(m, dict):
            raise FormatError("measurement entry must be an object", where)
        try:
            basis = MeasurementBasis(m.get("basis", "computational"))
        except ValueError:
            raise FormatError(f"unknown basis {m.get('basis')!r}", where)
        try:
            directives.append(
                MeasurementDirective(
                    tuple(int(x) for x in _require(m, "wires", where)), basis
                )
            )
        except (TypeError, ValueError) as exc:
            raise FormatError(str(exc), where)

    try:
        return Circuit(layout, tuple(gates), tuple(directives))
    except ValueError as exc:
        raise FormatError(str(exc))


def circuit_to_json(circuit: Circuit, oracle_specs: dict[int, str] | None = None) -> dict:
    """Schema document for a circuit; oracle gates need their spec strings."""
    oracle_specs = oracle_specs or {}
    gates = []
    for i, g in enumerate(circuit.gates):
        entry: dict = {"kind": g.kind.value, "wires": list(g.wires)}
        if g.chi is not None:
            entry["chi"] = g.chi
        if g.kind is GateKind.ORACLE_FLIP:
            if i not in oracle_specs:
                raise ValueError(f"no oracle spec recorded for gate {i}")
            entry["oracle"] = oracle_specs[i]
        gates.append(entry)
    return {
        "wires": [
            {"label": w.label, "kind": w.kind.value, "role": w.role.value}
            for w in circuit.layout.wires
        ],
        "gates": gates,
        "measurements": [
            {"wires": list(d.wires), "basis": d.basis.value}
            for d in circuit.directives
        ],
    }


def state_to_json(state: LorentzState) -> dict:
    """Debug dump: amplitudes as [re, im] pairs plus the log scale."""
    return {
        "wires": [
            {"label": w.label, "kind": w.kind.value, "role": w.role.value}
            for w in state.layout.wires
        ],
        "log_scale": state.log_scale,
        "amplitudes": [[a.real, a.imag] for a in state.amps],
    }
