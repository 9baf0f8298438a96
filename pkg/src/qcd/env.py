"""Episodic gate-placement environment.

One episode builds one circuit. Each step decodes a 4-component action in
[-1, 1]^4 into an operation from {M, Z, X, T}, a qubit, a control, and an
angle, applies it, and charges a step cost that ramps up once a third of
the depth budget is spent. The challenge target is scored only at the end
of the episode (termination via T / all qubits measured, or truncation at
the depth budget).
"""

from __future__ import annotations

import copy
import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .challenges import ChallengeSpec
from .circuit import Circuit, GateRecord
from .core import Gate, apply_gate, cp, cx, init_state, measure_qubit, phase, rx
from .errors import ConfigError, InvalidStateError

# operation bins, in decoding order: measure, phase-family, X-family, stop
OPS = ("M", "Z", "X", "T")


@dataclass(frozen=True)
class EnvConfig:
    """Environment parameters: the challenge plus a run seed.

    Register size and depth budget default to the challenge's; passing
    them explicitly only validates agreement.
    """

    challenge: ChallengeSpec
    seed: int = 0
    num_qubits: int | None = None
    max_depth: int | None = None

    def __post_init__(self):
        if self.num_qubits is None:
            object.__setattr__(self, "num_qubits", self.challenge.num_qubits)
        elif self.num_qubits != self.challenge.num_qubits:
            raise ConfigError(
                f"num_qubits {self.num_qubits} does not match challenge"
                f" eta={self.challenge.num_qubits}"
            )
        if self.max_depth is None:
            object.__setattr__(self, "max_depth", self.challenge.max_depth)
        elif self.max_depth != self.challenge.max_depth:
            raise ConfigError(
                f"max_depth {self.max_depth} does not match challenge"
                f" delta={self.challenge.max_depth}"
            )


@dataclass(frozen=True)
class DecodedAction:
    """A raw action after binning: operation, wires, angle."""

    op: str
    qubit: int
    control: int
    angle: float


@dataclass
class StepResult:
    observation: np.ndarray
    reward: float
    terminated: bool
    truncated: bool
    info: dict = field(default_factory=dict)

    @property
    def done(self) -> bool:
        return self.terminated or self.truncated


def decode_action(raw, num_qubits: int) -> DecodedAction:
    """Bin a raw action in [-1, 1]^4 into (op, qubit, control, angle).

    Components are clipped first, then mapped by uniform binning:
    op index floor((o+1)/2 * 4) into (M, Z, X, T), qubit and control
    floor((v+1)/2 * eta), each clamped into the top bin at +1. The angle
    is scaled linearly to [-pi, pi].
    """
    o, q, c, f = (min(1.0, max(-1.0, float(v))) for v in raw)
    op = OPS[min(3, int((o + 1.0) / 2.0 * 4.0))]
    qubit = min(num_qubits - 1, int((q + 1.0) / 2.0 * num_qubits))
    control = min(num_qubits - 1, int((c + 1.0) / 2.0 * num_qubits))
    return DecodedAction(op, qubit, control, f * math.pi)


def encode_action(
    op: str, qubit: int, control: int | None = None, angle: float = 0.0,
    num_qubits: int = 1,
) -> np.ndarray:
    """Raw action (bin centers) that decodes to the given choice."""
    if op not in OPS:
        raise ConfigError(f"op must be one of {OPS}, got {op!r}")
    if control is None:
        control = qubit
    if not (0 <= qubit < num_qubits and 0 <= control < num_qubits):
        raise ConfigError(f"wires ({qubit}, {control}) out of range")
    raw = np.array(
        [
            (OPS.index(op) + 0.5) / 4.0 * 2.0 - 1.0,
            (qubit + 0.5) / num_qubits * 2.0 - 1.0,
            (control + 0.5) / num_qubits * 2.0 - 1.0,
            angle / math.pi,
        ]
    )
    return raw


def step_cost(t: int, sigma: int) -> float:
    """C_t = max(0, (3/(2 sigma)) (t - sigma/3)).

    Zero through the first third of the budget, then a linear ramp that
    reaches 1 at t = sigma.
    """
    return max(0.0, (3.0 / (2.0 * sigma)) * (t - sigma / 3.0))


def flatten_state(state: np.ndarray) -> np.ndarray:
    """Interleaved (re, im) pairs in amplitude-index order."""
    obs = np.empty(2 * len(state), dtype=np.float64)
    obs[0::2] = state.real
    obs[1::2] = state.imag
    return obs


class CircuitDesignerEnv:
    """Reset/step MDP over circuits for one challenge instance.

    Mutable single-episode state; run one instance per worker. Randomized
    challenge targets are drawn once per instance from the challenge seed
    when given, otherwise from the run seed.
    """

    def __init__(self, config: EnvConfig):
        self.config = config
        self.num_qubits = config.num_qubits
        self.max_depth = config.max_depth
        spec = config.challenge
        if spec.target_name == "random" and spec.seed is None:
            spec = replace(spec, seed=config.seed)
        self.target = spec.target()
        self._challenge = spec
        self._rng = np.random.default_rng(config.seed)
        self._live = False

    @property
    def observation_size(self) -> int:
        return 2 * (1 << self.num_qubits)

    @property
    def action_size(self) -> int:
        return 4

    def reset(self, seed: int | None = None) -> np.ndarray:
        """Start a fresh episode on |0...0>; reseeds only when asked."""
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        self.state = init_state(self.num_qubits)
        self.circuit = Circuit(self.num_qubits, self.max_depth)
        self.step_index = 0
        self.terminated = False
        self.truncated = False
        self._live = True
        return flatten_state(self.state)

    def step(self, action) -> StepResult:
        """Advance one time step; see the module docstring for semantics."""
        if not self._live:
            raise InvalidStateError("step() before reset()")
        if self.terminated or self.truncated:
            raise InvalidStateError("episode is over; call reset()")

        decoded = decode_action(action, self.num_qubits)
        self.step_index += 1
        t = self.step_index

        if decoded.op == "T":
            self.terminated = True
        elif decoded.op == "M":
            outcome, self.state = measure_qubit(self.state, decoded.qubit, self._rng)
            self.circuit = self.circuit.mark_measured(decoded.qubit)
            if self.circuit.all_measured:
                self.terminated = True
        else:
            self._apply(decoded, t)

        if not self.terminated and t >= self.max_depth:
            self.truncated = True
        is_final = self.terminated or self.truncated
        if is_final:
            self.circuit = self.circuit.mark_terminated()

        cost = step_cost(t, self.max_depth)
        reward = -cost if cost else 0.0
        if is_final:
            reward += self._challenge.reward(self._achieved(), self.target, True)

        return StepResult(
            observation=flatten_state(self.state),
            reward=reward,
            terminated=self.terminated,
            truncated=self.truncated,
            info={
                "step": t,
                "depth": self.circuit.depth(),
                "qubits_used": self.circuit.qubits_used(),
                "decoded": decoded,
            },
        )

    def _apply(self, decoded: DecodedAction, t: int) -> None:
        q, c = decoded.qubit, decoded.control
        if decoded.op == "X":
            if q == c:
                gate, control = rx(decoded.angle), None
            else:
                gate, control = cx(), c  # angle dropped for the controlled form
        else:
            if q == c:
                gate, control = phase(decoded.angle), None
            else:
                gate, control = cp(decoded.angle), c
        record = GateRecord(gate, q, control, t)
        appended = self.circuit.append(record)
        if appended is not self.circuit:  # not discarded by a measured wire
            self.circuit = appended
            self.state = apply_gate(self.state, gate, q, control)

    def _achieved(self) -> np.ndarray:
        if self._challenge.family == "SP":
            return self.state
        return self.circuit.composed_unitary()

    def clone(self) -> "CircuitDesignerEnv":
        """Deep copy, including rng state: both copies replay identically."""
        return copy.deepcopy(self)


EPISODE_LOG_COLUMNS = (
    "episode", "step", "o", "q", "c", "phi", "reward",
    "terminated", "truncated", "depth", "qubits_used",
)


class EpisodeLogger:
    """CSV writer with one row per environment step."""

    def __init__(self, path: str):
        self._file = open(path, "w", newline="")
        self._writer = csv.writer(self._file)
        self._writer.writerow(EPISODE_LOG_COLUMNS)

    def log(self, episode: int, result: StepResult) -> None:
        decoded = result.info["decoded"]
        self._writer.writerow(
            [
                episode,
                result.info["step"],
                decoded.op,
                decoded.qubit,
                decoded.control,
                f"{decoded.angle:.17g}",
                f"{result.reward:.17g}",
                int(result.terminated),
                int(result.truncated),
                result.info["depth"],
                result.info["qubits_used"],
            ]
        )

    def close(self) -> None:
        self._file.close()

    def __enter__(self) -> "EpisodeLogger":
        return self

    def __exit__(self, *exc) -> None:
        self.close()
