"""Step through one episode by hand and watch rewards arrive.

Run with: python3 demos/play_episode.py
"""

import math

from qcd import CircuitDesignerEnv, EnvConfig, encode_action, parse_challenge_spec
from qcd.env import step_cost

# SP-bell: prepare (|00> + |11>) / sqrt(2) on 2 qubits within 12 steps.
spec = parse_challenge_spec("SP-bell")
env = CircuitDesignerEnv(EnvConfig(spec, seed=0))
obs = env.reset()
print("challenge:", spec.name)
print("observation length:", len(obs), "(interleaved re/im of the state)")

# Actions are 4 floats in [-1, 1]: operation, qubit, control, angle (the
# raw angle slot is the physical angle over pi). The Z family is P(phi)
# when qubit == control and CP(phi) otherwise; likewise X is RX(phi) or CX.
half = math.pi / 2.0
moves = [
    ("Z", 0, 0, half),  # P(pi/2) on qubit 0
    ("X", 0, 0, half),  # RX(pi/2) on qubit 0
    ("Z", 0, 0, half),  # P(pi/2) on qubit 0: the three make H exactly
    ("X", 1, 0, 0.0),   # qubit != control, so this is CX(0 -> 1)
    ("T", 0, 0, 0.0),   # declare the episode done
]
total = 0.0
for op, qubit, control, angle in moves:
    action = encode_action(op, qubit, control=control, angle=angle,
                           num_qubits=env.num_qubits)
    result = env.step(action)
    total += result.reward
    print(f"step {result.info['step']}: {op} -> reward {result.reward:+.6f}"
          f" terminated={result.terminated}")

# The first third of the budget is free; later steps cost linearly up to 1.
print("\nstep costs at budget 12:",
      [round(step_cost(t, 12), 3) for t in range(1, 13)])

# Final return = fidelity with the Bell state minus the two paid step costs.
print(f"episode return: {total:.6f}")
print(env.circuit.render_text())
