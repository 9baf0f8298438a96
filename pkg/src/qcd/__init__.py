"""Quantum circuit designer.

An exact statevector simulator, a gate-placement environment with episodic
rewards for state preparation and unitary composition, and baseline agents.
"""

from .agents import (
    RandomPolicy,
    ReinforcePolicy,
    ScriptedPolicy,
    evaluate,
    run_episode,
    train,
)
from .challenges import ChallengeSpec, parse_challenge_spec, sp_reward, uc_reward
from .circuit import Circuit, GateRecord
from .core import (
    Gate,
    apply_gate,
    compose,
    fidelity,
    frobenius_distance,
    gate_matrix,
    haar_random_state,
    haar_random_unitary,
    init_state,
    measure_qubit,
)
from .env import CircuitDesignerEnv, EnvConfig, decode_action, encode_action

__version__ = "0.1.0"

__all__ = [
    "ChallengeSpec",
    "Circuit",
    "CircuitDesignerEnv",
    "EnvConfig",
    "Gate",
    "GateRecord",
    "RandomPolicy",
    "ReinforcePolicy",
    "ScriptedPolicy",
    "apply_gate",
    "compose",
    "decode_action",
    "encode_action",
    "evaluate",
    "fidelity",
    "frobenius_distance",
    "gate_matrix",
    "haar_random_state",
    "haar_random_unitary",
    "init_state",
    "measure_qubit",
    "parse_challenge_spec",
    "run_episode",
    "sp_reward",
    "train",
    "uc_reward",
    "__version__",
]
