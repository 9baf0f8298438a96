"""Challenge targets and episodic reward functions.

Two families of goals share one environment: prepare a target state from
|0...0> (reward: final fidelity), or compose a target unitary from placed
gates (reward: 1 - arctan of the squared Frobenius distance at the end).

Named instances and their register/budget defaults:

    SP-bell      eta=2  delta=12   (|00> + |11>) / sqrt(2)
    SP-random    eta=2  delta=12   Haar-random state, fixed by seed
    SP-ghz       eta=3  delta=15   (|000> + |111>) / sqrt(2)
    UC-hadamard  eta=1  delta=9    H
    UC-random    eta=2  delta=12   Haar-random unitary, fixed by seed
    UC-toffoli   eta=3  delta=63   CCX

The "custom" name loads a target from the plain-text array format instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    MAX_QUBITS,
    Gate,
    fidelity,
    frobenius_distance,
    gate_matrix,
    haar_random_state,
    haar_random_unitary,
    is_unitary,
    load_array,
    num_qubits_of,
)
from .errors import ConfigError, ParseError

# (num_qubits, max_depth) defaults per named instance
_DEFAULTS = {
    ("SP", "bell"): (2, 12),
    ("SP", "random"): (2, 12),
    ("SP", "ghz"): (3, 15),
    ("UC", "hadamard"): (1, 9),
    ("UC", "random"): (2, 12),
    ("UC", "toffoli"): (3, 63),
}

# targets whose qubit count is fixed by definition
_FIXED_QUBITS = {"bell": 2, "ghz": 3, "hadamard": 1, "toffoli": 3}

SP_TARGET_NAMES = ("bell", "ghz", "random", "custom")
UC_TARGET_NAMES = ("hadamard", "toffoli", "random", "custom")


@dataclass(frozen=True)
class ChallengeSpec:
    """A fully resolved challenge: family, target, register, budget."""

    family: str  # "SP" or "UC"
    target_name: str
    num_qubits: int
    max_depth: int
    seed: int | None = None
    custom_path: str | None = None

    def __post_init__(self):
        if self.family not in ("SP", "UC"):
            raise ConfigError(f"unknown family {self.family!r}")
        names = SP_TARGET_NAMES if self.family == "SP" else UC_TARGET_NAMES
        if self.target_name not in names:
            raise ConfigError(
                f"{self.family} target must be one of {names}, got"
                f" {self.target_name!r}"
            )
        if not 1 <= self.num_qubits <= MAX_QUBITS:
            raise ConfigError(f"num_qubits {self.num_qubits} out of range")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth {self.max_depth} must be positive")
        fixed = _FIXED_QUBITS.get(self.target_name)
        if fixed is not None and self.num_qubits != fixed:
            raise ConfigError(
                f"{self.target_name} is defined on {fixed} qubit(s), got"
                f" eta={self.num_qubits}"
            )
        if self.target_name == "custom" and self.custom_path is None:
            raise ConfigError("custom targets require path=<file>")

    @property
    def name(self) -> str:
        return f"{self.family}-{self.target_name}"

    def target(self) -> np.ndarray:
        if self.family == "SP":
            return target_state(
                self.target_name, self.num_qubits, self.seed, self.custom_path
            )
        return target_unitary(
            self.target_name, self.num_qubits, self.seed, self.custom_path
        )

    def reward(self, achieved: np.ndarray, target: np.ndarray, is_final: bool) -> float:
        if self.family == "SP":
            return sp_reward(achieved, target, is_final)
        return uc_reward(achieved, target, is_final)


def target_state(
    name: str, num_qubits: int, seed: int | None = None, path: str | None = None
) -> np.ndarray:
    """Resolve a state-preparation target to a normalized statevector."""
    if name == "bell":
        _require_qubits(name, num_qubits, 2)
        state = np.zeros(4, dtype=np.complex128)
        state[0] = state[3] = 1.0 / math.sqrt(2.0)
        return state
    if name == "ghz":
        _require_qubits(name, num_qubits, 3)
        state = np.zeros(8, dtype=np.complex128)
        state[0] = state[7] = 1.0 / math.sqrt(2.0)
        return state
    if name == "random":
        return haar_random_state(num_qubits, seed if seed is not None else 0)
    if name == "custom":
        state = load_array(path)
        if state.ndim != 1 or num_qubits_of(len(state)) != num_qubits:
            raise ConfigError(
                f"{path}: expected a statevector on {num_qubits} qubit(s)"
            )
        if abs(np.linalg.norm(state) - 1.0) > 1e-9:
            raise ConfigError(f"{path}: statevector is not normalized")
        return state
    raise ConfigError(f"unknown state target {name!r}")


def target_unitary(
    name: str, num_qubits: int, seed: int | None = None, path: str | None = None
) -> np.ndarray:
    """Resolve a unitary-composition target to its matrix."""
    if name == "hadamard":
        _require_qubits(name, num_qubits, 1)
        return gate_matrix(Gate("H"))
    if name == "toffoli":
        _require_qubits(name, num_qubits, 3)
        return gate_matrix(Gate("CCX"))
    if name == "random":
        return haar_random_unitary(num_qubits, seed if seed is not None else 0)
    if name == "custom":
        u = load_array(path)
        dim = 1 << num_qubits
        if u.ndim != 2 or u.shape != (dim, dim):
            raise ConfigError(f"{path}: expected a {dim}x{dim} matrix")
        if not is_unitary(u, tol=1e-9):
            raise ConfigError(f"{path}: matrix is not unitary")
        return u
    raise ConfigError(f"unknown unitary target {name!r}")


def _require_qubits(name: str, got: int, want: int):
    if got != want:
        raise ConfigError(f"{name} is defined on {want} qubit(s), got eta={got}")


def sp_reward(state: np.ndarray, target: np.ndarray, is_final: bool) -> float:
    """Final fidelity with the target state; zero before the end."""
    if len(state) != len(target):
        raise ValueError(f"state lengths differ: {len(state)} vs {len(target)}")
    if not is_final:
        return 0.0
    return fidelity(state, target)


def uc_reward(composed: np.ndarray, target: np.ndarray, is_final: bool) -> float:
    """1 - arctan(||U - V||_F^2) at the end; zero before.

    Can drop below 0 (down to 1 - pi/2 as the distance grows); the arctan
    only compresses the distance into a bounded range.
    """
    if composed.shape != target.shape:
        raise ValueError(f"matrix shapes differ: {composed.shape} vs {target.shape}")
    if not is_final:
        return 0.0
    return 1.0 - math.atan(frobenius_distance(target, composed))


def parse_challenge_spec(text: str) -> ChallengeSpec:
    """Parse "SP-<name>" / "UC-<name>" with optional overrides.

    Overrides follow a colon as comma-separated key=value pairs, e.g.
    "SP-random:eta=3,delta=20,seed=7" or "UC-custom:eta=2,path=u.txt".
    """
    head, sep, tail = text.partition(":")
    if "-" not in head:
        raise ParseError(
            f"{text!r}: expected '<family>-<name>', e.g. 'SP-bell'"
        )
    family, _, name = head.partition("-")
    family = family.upper()
    name = name.lower()
    if family not in ("SP", "UC"):
        raise ParseError(f"{text!r}: unknown family {family!r} (want SP or UC)")
    names = SP_TARGET_NAMES if family == "SP" else UC_TARGET_NAMES
    if name not in names:
        raise ParseError(f"{text!r}: unknown {family} target {name!r} (want one of {names})")

    overrides: dict[str, str] = {}
    if sep:
        for i, pair in enumerate(tail.split(","), start=1):
            key, eq, value = pair.partition("=")
            key = key.strip()
            if not eq or not value.strip():
                raise ParseError(f"{text!r}: override {i} ({pair!r}) is not key=value")
            if key not in ("eta", "delta", "seed", "path"):
                raise ParseError(f"{text!r}: unknown override key {key!r}")
            if key in overrides:
                raise ParseError(f"{text!r}: duplicate override {key!r}")
            overrides[key] = value.strip()

    defaults = _DEFAULTS.get((family, name))
    try:
        num_qubits = int(overrides["eta"]) if "eta" in overrides else None
        max_depth = int(overrides["delta"]) if "delta" in overrides else None
        seed = int(overrides["seed"]) if "seed" in overrides else None
    except ValueError as exc:
        raise ParseError(f"{text!r}: {exc}") from exc
    if num_qubits is None:
        if defaults is None:
            raise ParseError(f"{text!r}: custom targets require eta=<n>")
        num_qubits = defaults[0]
    if max_depth is None:
        if defaults is None:
            raise ParseError(f"{text!r}: custom targets require delta=<n>")
        max_depth = defaults[1]

    try:
        return ChallengeSpec(
            family=family,
            target_name=name,
            num_qubits=num_qubits,
            max_depth=max_depth,
            seed=seed,
            custom_path=overrides.get("path"),
        )
    except ConfigError as exc:
        raise ParseError(f"{text!r}: {exc}") from exc
