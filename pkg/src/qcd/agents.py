"""Baseline policies, training loop, and evaluation harness.

Two baselines: uniform-random actions, and REINFORCE with a small tanh
network emitting a squashed Gaussian over the 4-dimensional action space.
Episode metrics (undiscounted return, qubits used, depth) are smoothed
over a sliding window of the last 100 episodes.
"""

from __future__ import annotations

import csv
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .env import CircuitDesignerEnv, EnvConfig, encode_action
from .errors import ConfigError

LOG_STD_MIN = -5.0
LOG_STD_MAX = 1.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass
class Trajectory:
    """One episode's (observation, action, reward) steps as arrays."""

    observations: np.ndarray  # (T, obs_size)
    actions: np.ndarray  # (T, 4)
    rewards: np.ndarray  # (T,)

    def __len__(self) -> int:
        return len(self.rewards)


@dataclass(frozen=True)
class EpisodeMetrics:
    episode_return: float  # undiscounted reward sum
    qubits_used: int
    depth: int
    length: int


class MetricsWindow:
    """Arithmetic means over the last 100 episodes (no smoothing)."""

    def __init__(self, size: int = 100):
        self._episodes: deque[EpisodeMetrics] = deque(maxlen=size)

    def push(self, metrics: EpisodeMetrics) -> None:
        self._episodes.append(metrics)

    def __len__(self) -> int:
        return len(self._episodes)

    @property
    def mean_return(self) -> float:
        return float(np.mean([m.episode_return for m in self._episodes]))

    @property
    def mean_qubits(self) -> float:
        return float(np.mean([m.qubits_used for m in self._episodes]))

    @property
    def mean_depth(self) -> float:
        return float(np.mean([m.depth for m in self._episodes]))


def random_action(rng: np.random.Generator) -> np.ndarray:
    """Four independent uniform samples on [-1, 1]."""
    return rng.uniform(-1.0, 1.0, 4)


class Policy:
    """Minimal policy interface: act, learn, reseed."""

    def act(self, observation, explore: bool = True) -> np.ndarray:
        raise NotImplementedError

    def update(self, trajectories: list[Trajectory]) -> dict:
        return {}

    def begin_episode(self) -> None:
        pass

    def reseed(self, seed: int) -> None:
        pass


class RandomPolicy(Policy):
    def __init__(self, seed: int = 0):
        self._rng = np.random.default_rng(seed)

    def act(self, observation, explore: bool = True) -> np.ndarray:
        return random_action(self._rng)

    def reseed(self, seed: int) -> None:
        self._rng = np.random.default_rng(seed)


# optimal gate sequences as (op, qubit, control, angle) tuples; a final T
# stops the episode, and the policy keeps emitting T if asked further
SCRIPTED_SEQUENCES = {
    "bell": (
        2,
        [
            ("Z", 0, None, math.pi / 2),
            ("X", 0, None, math.pi / 2),
            ("Z", 0, None, math.pi / 2),
            ("X", 1, 0, 0.0),
            ("T", 0, None, 0.0),
        ],
    ),
    "ghz": (
        3,
        [
            ("Z", 0, None, math.pi / 2),
            ("X", 0, None, math.pi / 2),
            ("Z", 0, None, math.pi / 2),
            ("X", 1, 0, 0.0),
            ("X", 2, 0, 0.0),
            ("T", 0, None, 0.0),
        ],
    ),
    "hadamard": (
        1,
        [
            ("Z", 0, None, math.pi / 2),
            ("X", 0, None, math.pi / 2),
            ("Z", 0, None, math.pi / 2),
            ("T", 0, None, 0.0),
        ],
    ),
}


class ScriptedPolicy(Policy):
    """Replays a fixed optimal sequence, then stops."""

    def __init__(self, name: str):
        if name not in SCRIPTED_SEQUENCES:
            raise ConfigError(
                f"no scripted sequence {name!r}; have"
                f" {sorted(SCRIPTED_SEQUENCES)}"
            )
        self.name = name
        num_qubits, steps = SCRIPTED_SEQUENCES[name]
        self._actions = [
            encode_action(op, q, c, angle, num_qubits=num_qubits)
            for op, q, c, angle in steps
        ]
        self._cursor = 0

    def begin_episode(self) -> None:
        self._cursor = 0

    def act(self, observation, explore: bool = True) -> np.ndarray:
        if self._cursor < len(self._actions):
            action = self._actions[self._cursor]
            self._cursor += 1
            return action
        return self._actions[-1]  # trailing T


def gaussian_tanh_log_prob(
    u: np.ndarray, mu: np.ndarray, log_std: np.ndarray
) -> np.ndarray:
    """Per-component log-density of a = tanh(u), u ~ N(mu, e^{log_std}).

    The change-of-variables term -log(1 - tanh(u)^2) is evaluated as
    2(u + softplus(-2u) - log 2), which stays finite and exact even where
    tanh saturates.
    """
    var = np.exp(2.0 * log_std)
    base = -0.5 * (u - mu) ** 2 / var - log_std - _HALF_LOG_2PI
    return base + 2.0 * (u + np.logaddexp(0.0, -2.0 * u) - math.log(2.0))


def discounted_returns(rewards: np.ndarray, gamma: float) -> np.ndarray:
    """Reward-to-go: G_t = sum_k gamma^k r_{t+k}."""
    out = np.empty(len(rewards), dtype=np.float64)
    acc = 0.0
    for t in range(len(rewards) - 1, -1, -1):
        acc = rewards[t] + gamma * acc
        out[t] = acc
    return out


class ReinforcePolicy(Policy):
    """Monte-Carlo policy gradient with a squashed Gaussian head.

    Network: observation -> 64 tanh -> 64 tanh -> (4 means, 4 log-stds),
    log-stds clamped to [-5, 1]. Updates use reward-to-go returns minus a
    batch-mean baseline, plus an entropy bonus, stepped by Adam.
    """

    def __init__(
        self,
        obs_size: int,
        lr: float = 3e-4,
        gamma: float = 0.99,
        entropy_coef: float = 0.01,
        seed: int = 0,
        hidden: int = 64,
    ):
        self.obs_size = obs_size
        self.lr = lr
        self.gamma = gamma
        self.entropy_coef = entropy_coef
        init = np.random.default_rng(seed)
        # Xavier-scaled initial weights; final layer shrunk so early
        # action distributions stay near centered
        self.params = {
            "w1": _layer_init(init, obs_size, hidden),
            "b1": np.zeros(hidden),
            "w2": _layer_init(init, hidden, hidden),
            "b2": np.zeros(hidden),
            "w3": _layer_init(init, hidden, 8) * 0.01,
            "b3": np.zeros(8),
        }
        self._rng = np.random.default_rng(seed + 1)
        self._adam_m = {k: np.zeros_like(v) for k, v in self.params.items()}
        self._adam_v = {k: np.zeros_like(v) for k, v in self.params.items()}
        self._adam_t = 0

    def reseed(self, seed: int) -> None:
        self._rng = np.random.default_rng(seed)

    # -- forward ---------------------------------------------------------

    def _forward(self, obs: np.ndarray):
        p = self.params
        h1 = np.tanh(obs @ p["w1"] + p["b1"])
        h2 = np.tanh(h1 @ p["w2"] + p["b2"])
        out = h2 @ p["w3"] + p["b3"]
        mu = out[..., :4]
        raw_log_std = out[..., 4:]
        log_std = np.clip(raw_log_std, LOG_STD_MIN, LOG_STD_MAX)
        return mu, log_std, raw_log_std, (obs, h1, h2)

    def act(self, observation, explore: bool = True) -> np.ndarray:
        obs = np.asarray(observation, dtype=np.float64)
        mu, log_std, _, _ = self._forward(obs)
        if explore:
            u = mu + np.exp(log_std) * self._rng.standard_normal(4)
        else:
            u = mu
        return np.tanh(u)

    # -- learning --------------------------------------------------------

    def update(self, trajectories: list[Trajectory]) -> dict:
        loss, grads, stats = self._loss_and_grads(trajectories)
        self._adam_t += 1
        b1, b2, eps = 0.9, 0.999, 1e-8
        for key, grad in grads.items():
            m = self._adam_m[key] = b1 * self._adam_m[key] + (1 - b1) * grad
            v = self._adam_v[key] = b2 * self._adam_v[key] + (1 - b2) * grad**2
            m_hat = m / (1 - b1**self._adam_t)
            v_hat = v / (1 - b2**self._adam_t)
            self.params[key] -= self.lr * m_hat / (np.sqrt(v_hat) + eps)
        grad_norm = math.sqrt(sum(float(np.sum(g**2)) for g in grads.values()))
        return {"loss": loss, "grad_norm": grad_norm, **stats}

    def loss(self, trajectories: list[Trajectory]) -> float:
        """Objective value only (finite-difference support)."""
        return self._loss_and_grads(trajectories)[0]

    def _loss_and_grads(self, trajectories: list[Trajectory]):
        if not trajectories:
            raise ValueError("update needs at least one trajectory")
        obs = np.concatenate([t.observations for t in trajectories])
        actions = np.concatenate([t.actions for t in trajectories])
        returns = np.concatenate(
            [discounted_returns(t.rewards, self.gamma) for t in trajectories]
        )
        advantages = returns - returns.mean()
        n = len(returns)

        mu, log_std, raw_log_std, caches = self._forward(obs)
        # recover the pre-squash sample; actions never reach +-1 exactly
        u = np.arctanh(np.clip(actions, -1.0 + 1e-12, 1.0 - 1e-12))
        var = np.exp(2.0 * log_std)
        log_probs = gaussian_tanh_log_prob(u, mu, log_std).sum(axis=1)
        entropy = (log_std + 0.5 + _HALF_LOG_2PI).sum(axis=1)
        loss = float(
            -(advantages * log_probs).mean() - self.entropy_coef * entropy.mean()
        )

        # d loss / d mu and d loss / d log_std, through the clamp
        w = -advantages[:, None] / n
        d_mu = w * (u - mu) / var
        d_log_std = w * ((u - mu) ** 2 / var - 1.0)
        d_log_std -= self.entropy_coef / n  # entropy bonus, dH/dlog_std = 1
        clamp_active = (raw_log_std > LOG_STD_MIN) & (raw_log_std < LOG_STD_MAX)
        d_log_std = np.where(clamp_active, d_log_std, 0.0)

        grads = self._backward(np.concatenate([d_mu, d_log_std], axis=1), caches)
        stats = {
            "entropy": float(entropy.mean()),
            "mean_return": float(
                np.mean([t.rewards.sum() for t in trajectories])
            ),
        }
        return loss, grads, stats

    def _backward(self, d_out: np.ndarray, caches) -> dict:
        obs, h1, h2 = caches
        p = self.params
        d_h2 = d_out @ p["w3"].T
        d_z2 = d_h2 * (1.0 - h2**2)
        d_h1 = d_z2 @ p["w2"].T
        d_z1 = d_h1 * (1.0 - h1**2)
        return {
            "w3": h2.T @ d_out,
            "b3": d_out.sum(axis=0),
            "w2": h1.T @ d_z2,
            "b2": d_z2.sum(axis=0),
            "w1": obs.T @ d_z1,
            "b1": d_z1.sum(axis=0),
        }

    # -- parameter vector access (used by gradient checks) ----------------

    def get_flat_params(self) -> np.ndarray:
        return np.concatenate([self.params[k].ravel() for k in sorted(self.params)])

    def set_flat_params(self, flat: np.ndarray) -> None:
        offset = 0
        for key in sorted(self.params):
            size = self.params[key].size
            self.params[key] = (
                flat[offset : offset + size].reshape(self.params[key].shape).copy()
            )
            offset += size

    def flat_grads(self, trajectories: list[Trajectory]) -> np.ndarray:
        grads = self._loss_and_grads(trajectories)[1]
        return np.concatenate([grads[k].ravel() for k in sorted(grads)])


def _layer_init(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    bound = math.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, (fan_in, fan_out))


# ---------------------------------------------------------------------------
# Rollout, evaluation, training


def run_episode(policy: Policy, env, learn: bool = False):
    """Roll one episode; returns (Trajectory, EpisodeMetrics)."""
    policy.begin_episode()
    obs = env.reset()
    observations, actions, rewards = [], [], []
    while True:
        action = np.clip(np.asarray(policy.act(obs, explore=learn)), -1.0, 1.0)
        result = env.step(action)
        observations.append(obs)
        actions.append(action)
        rewards.append(result.reward)
        obs = result.observation
        if result.done:
            break
    trajectory = Trajectory(
        observations=np.asarray(observations, dtype=np.float64),
        actions=np.asarray(actions, dtype=np.float64),
        rewards=np.asarray(rewards, dtype=np.float64),
    )
    metrics = EpisodeMetrics(
        episode_return=float(trajectory.rewards.sum()),
        qubits_used=env.circuit.qubits_used(),
        depth=env.circuit.depth(),
        length=len(trajectory),
    )
    return trajectory, metrics


def evaluate(policy: Policy, challenge, episodes: int, seed: int = 0) -> dict:
    """Greedy-rollout means over a fixed number of episodes.

    Reseeds the policy and builds a fresh environment, so equal seeds give
    identical summaries.
    """
    if episodes < 1:
        raise ConfigError(f"episodes must be positive, got {episodes}")
    env = CircuitDesignerEnv(EnvConfig(challenge, seed=seed))
    env.reset(seed=seed)
    policy.reseed(seed)
    window = MetricsWindow(size=episodes)
    lengths = []
    for _ in range(episodes):
        _, metrics = run_episode(policy, env, learn=False)
        window.push(metrics)
        lengths.append(metrics.length)
    return {
        "episodes": episodes,
        "mean_return": window.mean_return,
        "mean_qubits": window.mean_qubits,
        "mean_depth": window.mean_depth,
        "mean_length": float(np.mean(lengths)),
    }


def ci95(values) -> float:
    """95% confidence half-width, normal approximation over seed means."""
    values = np.asarray(values, dtype=np.float64)
    if len(values) < 2:
        return 0.0
    return float(1.96 * values.std(ddof=1) / math.sqrt(len(values)))


METRICS_COLUMNS = (
    "global_step", "episode", "mean_return_100", "mean_qubits_100",
    "mean_depth_100",
)


def train(
    policy: Policy,
    env,
    total_steps: int,
    batch_episodes: int = 16,
    metrics_path: str | None = None,
) -> dict:
    """Run episodes until the step budget is spent, updating per batch.

    Streams one CSV row per episode (sliding-window means) when a metrics
    path is given. Returns the final window and counters.
    """
    if total_steps < 1:
        raise ConfigError(f"total_steps must be positive, got {total_steps}")
    window = MetricsWindow()
    writer = None
    handle = None
    if metrics_path is not None:
        handle = open(metrics_path, "w", newline="")
        writer = csv.writer(handle)
        writer.writerow(METRICS_COLUMNS)
    try:
        batch: list[Trajectory] = []
        episode = 0
        global_step = 0
        while global_step < total_steps:
            trajectory, metrics = run_episode(policy, env, learn=True)
            episode += 1
            global_step += metrics.length
            window.push(metrics)
            batch.append(trajectory)
            if writer is not None:
                writer.writerow(
                    [
                        global_step,
                        episode,
                        f"{window.mean_return:.17g}",
                        f"{window.mean_qubits:.17g}",
                        f"{window.mean_depth:.17g}",
                    ]
                )
            if len(batch) >= batch_episodes:
                policy.update(batch)
                batch = []
    finally:
        if handle is not None:
            handle.close()
    return {
        "episodes": episode,
        "steps": global_step,
        "mean_return": window.mean_return,
        "mean_qubits": window.mean_qubits,
        "mean_depth": window.mean_depth,
    }
