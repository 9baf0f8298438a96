"""Gate-sequence recording and circuit-level metrics.

A Circuit is an immutable snapshot: appending a record, marking a qubit
measured, or terminating all return new values. Measurements flag qubits
but are not records, so they never contribute to depth or the composed
unitary. Gates touching a measured qubit are discarded on append.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import (
    MAX_QUBITS,
    Gate,
    embed_unitary,
    gate_matrix,
)
from .errors import ConfigError, InvalidActionError, InvalidStateError, ParseError


@dataclass(frozen=True)
class GateRecord:
    """One applied gate: what, where, and at which time step."""

    gate: Gate
    target: int
    control: int | None
    step: int

    def __post_init__(self):
        if self.gate.arity == 1 and self.control is not None:
            raise InvalidActionError(f"{self.gate.name} takes no control")
        if self.gate.arity == 2 and self.control is None:
            raise InvalidActionError(f"{self.gate.name} requires a control")
        if self.control == self.target and self.control is not None:
            raise InvalidActionError("control and target must differ")
        if self.step < 0:
            raise InvalidActionError(f"negative step {self.step}")

    @property
    def kind(self) -> str:
        return self.gate.name

    @property
    def wires(self) -> tuple[int, ...]:
        if self.control is None:
            return (self.target,)
        return (self.control, self.target)


@dataclass(frozen=True)
class Circuit:
    """An ordered gate sequence on a fixed register with a step budget."""

    num_qubits: int
    max_depth: int
    records: tuple[GateRecord, ...] = ()
    measured: tuple[bool, ...] = ()
    terminated: bool = False

    def __post_init__(self):
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ConfigError(f"num_qubits {self.num_qubits} out of range")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth {self.max_depth} must be positive")
        if not self.measured:
            object.__setattr__(self, "measured", (False,) * self.num_qubits)
        elif len(self.measured) != self.num_qubits:
            raise ConfigError("measured flags must cover every qubit")

    def append(self, record: GateRecord) -> "Circuit":
        """Record a gate, or return self unchanged if a wire is measured."""
        if self.terminated:
            raise InvalidStateError("cannot append to a terminated circuit")
        if record.step > self.max_depth:
            raise InvalidActionError(
                f"step {record.step} exceeds budget {self.max_depth}"
            )
        if self.records and record.step <= self.records[-1].step:
            raise InvalidActionError(
                f"step {record.step} not after {self.records[-1].step}"
            )
        for wire in record.wires:
            if not 0 <= wire < self.num_qubits:
                raise InvalidActionError(
                    f"wire {wire} out of range for {self.num_qubits} qubits"
                )
        if any(self.measured[w] for w in record.wires):
            return self
        return replace(self, records=self.records + (record,))

    def mark_measured(self, qubit: int) -> "Circuit":
        if self.terminated:
            raise InvalidStateError("cannot measure on a terminated circuit")
        if not 0 <= qubit < self.num_qubits:
            raise InvalidActionError(f"qubit {qubit} out of range")
        flags = list(self.measured)
        flags[qubit] = True
        return replace(self, measured=tuple(flags))

    def mark_terminated(self) -> "Circuit":
        return replace(self, terminated=True)

    @property
    def all_measured(self) -> bool:
        return all(self.measured)

    def _layers(self) -> list[list[GateRecord]]:
        # greedy moment scheduling: earliest layer where all wires are free
        layers: list[list[GateRecord]] = []
        frontier = [0] * self.num_qubits  # first free layer per wire
        for record in self.records:
            layer = max(frontier[w] for w in record.wires)
            if layer == len(layers):
                layers.append([])
            layers[layer].append(record)
            for w in record.wires:
                frontier[w] = layer + 1
        return layers

    def depth(self) -> int:
        """Moment-scheduled depth: gates on disjoint wires share a layer."""
        return len(self._layers())

    def qubits_used(self) -> int:
        """Distinct qubits appearing as target or control in any record."""
        return len({w for record in self.records for w in record.wires})

    def composed_unitary(self) -> np.ndarray:
        """Product of embedded gate unitaries, later gates from the left."""
        dim = 1 << self.num_qubits
        full = np.eye(dim, dtype=np.complex128)
        for record in self.records:
            embedded = embed_unitary(
                gate_matrix(record.gate), record.target, record.control,
                self.num_qubits,
            )
            full = embedded @ full
        return full

    def render_text(self) -> str:
        """Text diagram: one row per wire, layers left-to-right."""
        layers = self._layers()
        cells = [["" for _ in layers] for _ in range(self.num_qubits)]
        for col, layer in enumerate(layers):
            for record in layer:
                cells[record.target][col] = _gate_label(record.gate)
                if record.control is not None:
                    cells[record.control][col] = "*"
        widths = [
            max((len(cells[q][col]) for q in range(self.num_qubits)), default=0)
            for col in range(len(layers))
        ]
        rows = []
        for q in range(self.num_qubits):
            wire = f"q{q}: -"
            for col, width in enumerate(widths):
                label = cells[q][col] or "-" * width
                wire += f"-{label.center(width, '-')}-"
            if self.measured[q]:
                wire += "-[M]"
            rows.append(wire)
        return "\n".join(rows)


def _gate_label(gate: Gate) -> str:
    if gate.name == "CX":
        return "X"
    if gate.name == "CP":
        return f"P({gate.angle:.3g})"
    if gate.angle is not None:
        return f"{gate.name}({gate.angle:.3g})"
    return gate.name


# ---------------------------------------------------------------------------
# Line-oriented export ("step kind target control angle", "-" for absent
# fields). Used for inspection and replay.


def format_records(circuit: Circuit) -> str:
    lines = []
    for r in circuit.records:
        control = "-" if r.control is None else str(r.control)
        angle = "-" if r.gate.angle is None else f"{r.gate.angle:.17g}"
        lines.append(f"{r.step} {r.kind} {r.target} {control} {angle}")
    return "\n".join(lines) + ("\n" if lines else "")


def dump_circuit(circuit: Circuit, path: str) -> None:
    with open(path, "w") as f:
        f.write(format_records(circuit))


def parse_records(text: str) -> list[GateRecord]:
    """Inverse of format_records; raises ParseError on malformed lines."""
    records = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) != 5:
            raise ParseError(f"line {lineno}: expected 5 fields, got {len(fields)}")
        step_s, kind, target_s, control_s, angle_s = fields
        try:
            step = int(step_s)
            target = int(target_s)
            control = None if control_s == "-" else int(control_s)
            angle = None if angle_s == "-" else float(angle_s)
            records.append(GateRecord(Gate(kind, angle), target, control, step))
        except (ValueError, InvalidActionError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    return records


def load_circuit(path: str, num_qubits: int, max_depth: int) -> Circuit:
    with open(path) as f:
        records = parse_records(f.read())
    circuit = Circuit(num_qubits, max_depth)
    for record in records:
        circuit = circuit.append(record)
    return circuit
