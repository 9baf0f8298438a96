"""Walk through the statevector simulator: gates, composition, sampling.

Run with: python3 demos/simulate_states.py
"""

import numpy as np

from qcd import (
    Gate,
    apply_gate,
    fidelity,
    frobenius_distance,
    gate_matrix,
    haar_random_state,
    init_state,
    measure_qubit,
)
from qcd.core import compose, cx, phase, rx

# Every register starts in |0...0>: amplitude 1 at index 0.
state = init_state(2)
print("initial 2-qubit state:", state)

# Qubit 0 is the most significant bit of the amplitude index, so H on
# qubit 0 spreads mass over |00> and |10> (indices 0 and 2).
state = apply_gate(state, Gate("H"), 0)
print("after H on qubit 0:  ", np.round(state, 6))

# CX with control qubit 0 completes the Bell pair (|00> + |11>) / sqrt(2).
state = apply_gate(state, cx(), 1, control=0)
print("after CX(0 -> 1):    ", np.round(state, 6))

bell = np.zeros(4, dtype=complex)
bell[0] = bell[3] = 1.0 / np.sqrt(2.0)
print("fidelity with Bell:  ", fidelity(state, bell))

# The continuous gate set can rebuild H exactly: P(pi/2) RX(pi/2) P(pi/2).
half = np.pi / 2.0
rebuilt = compose(gate_matrix(phase(half)),
                  compose(gate_matrix(rx(half)), gate_matrix(phase(half))))
print("\nP RX P vs H, squared Frobenius distance:",
      frobenius_distance(rebuilt, gate_matrix(Gate("H"))))

# Measuring one half of the Bell pair gives a fair coin, and the collapse
# is exact: the post-measurement state is a computational basis state.
rng = np.random.default_rng(7)
counts = [0, 0]
for _ in range(2000):
    outcome, _ = measure_qubit(state, 0, rng)
    counts[outcome] += 1
print("\nBorn statistics for qubit 0 of the Bell pair:", counts)

# Haar-random states are the targets for the SP-random challenge; the
# sampler is fully deterministic in its seed.
psi = haar_random_state(3, seed=42)
again = haar_random_state(3, seed=42)
print("\nHaar state norm:", np.linalg.norm(psi))
print("same seed, same state:", np.array_equal(psi, again))
