"""Record a circuit step by step, inspect its metrics, round-trip to disk.

Run with: python3 demos/record_circuits.py
"""

import tempfile
from pathlib import Path

import numpy as np

from qcd import Circuit, GateRecord, fidelity, init_state
from qcd.circuit import dump_circuit, load_circuit
from qcd.core import cx, phase, rx

# A circuit is an immutable record of placements; append returns a new one.
circuit = Circuit(num_qubits=3, max_depth=15)
circuit = circuit.append(GateRecord(phase(np.pi / 2.0), 0, None, step=1))
circuit = circuit.append(GateRecord(rx(np.pi / 2.0), 0, None, step=2))
circuit = circuit.append(GateRecord(phase(np.pi / 2.0), 0, None, step=3))
circuit = circuit.append(GateRecord(cx(), 1, control=0, step=4))
circuit = circuit.append(GateRecord(cx(), 2, control=1, step=5))

print(circuit.render_text())
print()

# Depth counts moments, not placements: gates on disjoint wires share a
# layer, so the GHZ construction above is depth 5 only because of the
# CX chain. A parallel RX would not add a layer.
print("records:", len(circuit.records))
print("depth:  ", circuit.depth())
print("qubits: ", circuit.qubits_used())

# The composed unitary times |000> is the GHZ state.
ghz = np.zeros(8, dtype=complex)
ghz[0] = ghz[7] = 1.0 / np.sqrt(2.0)
state = circuit.composed_unitary() @ init_state(3)
print("GHZ fidelity:", fidelity(state, ghz))

# The text format is line-per-record and parses back to an equal circuit.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "ghz.records"
    dump_circuit(circuit, path)
    print("\non disk:")
    print(path.read_text().rstrip())
    reloaded = load_circuit(path, num_qubits=3, max_depth=15)
    print("\nround trip equal:", reloaded == circuit)
