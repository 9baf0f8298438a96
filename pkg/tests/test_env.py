"""Environment MDP: decoding, stepping, costs, termination, logging."""

import csv
import math

import numpy as np
import pytest

from qcd.challenges import parse_challenge_spec, sp_reward
from qcd.core import init_state
from qcd.env import (
    CircuitDesignerEnv,
    EnvConfig,
    EpisodeLogger,
    decode_action,
    encode_action,
    flatten_state,
    step_cost,
)
from qcd.errors import ConfigError, InvalidStateError


def make_env(spec_text, seed=0):
    return CircuitDesignerEnv(EnvConfig(parse_challenge_spec(spec_text), seed=seed))


def scripted_rollout(env, actions):
    env.reset()
    results = [env.step(a) for a in actions]
    return results


# raw actions for the known optimal sequences, via bin centers
def bell_actions():
    n = 2
    return [
        encode_action("Z", 0, angle=math.pi / 2, num_qubits=n),
        encode_action("X", 0, angle=math.pi / 2, num_qubits=n),
        encode_action("Z", 0, angle=math.pi / 2, num_qubits=n),
        encode_action("X", 1, control=0, num_qubits=n),
        encode_action("T", 0, num_qubits=n),
    ]


class TestDecodeAction:
    def test_lower_edges(self):
        d = decode_action((-1, -1, -1, 0), 2)
        assert (d.op, d.qubit, d.control, d.angle) == ("M", 0, 0, 0.0)

    def test_upper_edges_clamp(self):
        d = decode_action((1, 1, 1, 1), 2)
        assert (d.op, d.qubit, d.control) == ("T", 1, 1)
        assert d.angle == pytest.approx(math.pi, abs=0)

    def test_interior_bins(self):
        d = decode_action((0.1, -0.2, -0.2, -0.5), 2)
        assert (d.op, d.qubit, d.control) == ("X", 0, 0)
        assert d.angle == pytest.approx(-math.pi / 2, abs=1e-15)

    def test_clipping(self):
        d = decode_action((5.0, -3.0, 0.0, 2.0), 2)
        assert (d.op, d.qubit) == ("T", 0)
        assert d.angle == pytest.approx(math.pi)

    def test_op_bin_balance(self):
        """Uniform raw actions select each operation 1/4 of the time."""
        rng = np.random.default_rng(101)
        raws = rng.uniform(-1.0, 1.0, size=(1_000_000, 4))
        counts = {op: 0 for op in ("M", "Z", "X", "T")}
        for raw in raws:
            counts[decode_action(raw, 2).op] += 1
        for op, count in counts.items():
            assert count / 1e6 == pytest.approx(0.25, abs=0.01), op

    def test_encode_decode_round_trip(self):
        rng = np.random.default_rng(5)
        for n in (1, 2, 3, 4):
            for op in ("M", "Z", "X", "T"):
                for _ in range(10):
                    qubit = int(rng.integers(n))
                    control = int(rng.integers(n))
                    angle = float(rng.uniform(-math.pi, math.pi))
                    raw = encode_action(op, qubit, control, angle, num_qubits=n)
                    d = decode_action(raw, n)
                    assert (d.op, d.qubit, d.control) == (op, qubit, control)
                    assert d.angle == pytest.approx(angle, abs=1e-12)


class TestStepCost:
    def test_profile(self):
        """No cost through sigma/3, then linear to 1 at sigma."""
        assert step_cost(4, 12) == 0.0
        assert step_cost(8, 12) == pytest.approx(0.5, abs=1e-15)
        assert step_cost(12, 12) == pytest.approx(1.0, abs=1e-15)

    def test_early_steps_free(self):
        for t in range(1, 5):
            assert step_cost(t, 12) == 0.0

    def test_other_budgets(self):
        assert step_cost(3, 9) == 0.0
        assert step_cost(4, 9) == pytest.approx(1.0 / 6.0, abs=1e-15)
        assert step_cost(5, 15) == 0.0
        assert step_cost(6, 15) == pytest.approx(0.1, abs=1e-15)


class TestReset:
    def test_initial_observation(self):
        obs = make_env("SP-bell").reset()
        np.testing.assert_array_equal(obs, [1, 0, 0, 0, 0, 0, 0, 0])

    def test_observation_size(self):
        env = make_env("SP-ghz")
        assert env.observation_size == 16
        assert len(env.reset()) == 16
        assert env.action_size == 4

    def test_reset_isolates_episodes(self):
        env = make_env("SP-bell")
        env.reset()
        env.step(encode_action("X", 0, angle=1.0, num_qubits=2))
        obs = env.reset()
        np.testing.assert_array_equal(obs, [1, 0, 0, 0, 0, 0, 0, 0])
        assert env.step_index == 0
        assert env.circuit.records == ()

    def test_step_before_reset_rejected(self):
        env = make_env("SP-bell")
        with pytest.raises(InvalidStateError):
            env.step([0, 0, 0, 0])


class TestStepSemantics:
    def test_terminate_on_empty_circuit(self):
        """Stopping immediately on SP-bell scores |<00|target>|^2 = 0.5."""
        env = make_env("SP-bell")
        env.reset()
        result = env.step(encode_action("T", 0, num_qubits=2))
        assert result.terminated and not result.truncated
        assert result.reward == pytest.approx(0.5, abs=1e-12)

    def test_gate_changes_state(self):
        env = make_env("SP-bell")
        env.reset()
        result = env.step(encode_action("X", 0, angle=math.pi, num_qubits=2))
        # RX(pi)|00> = -i|10>: obs index 4 holds re, 5 holds im of amp 2
        assert result.observation[5] == pytest.approx(-1.0, abs=1e-12)
        assert result.info["depth"] == 1
        assert result.info["qubits_used"] == 1

    def test_controlled_forms(self):
        env = make_env("SP-bell")
        env.reset()
        env.step(encode_action("X", 0, angle=math.pi, num_qubits=2))
        env.step(encode_action("X", 1, control=0, num_qubits=2))
        # state now -i|11>
        assert abs(env.state[3]) == pytest.approx(1.0, abs=1e-12)
        records = env.circuit.records
        assert records[-1].kind == "CX"
        assert (records[-1].target, records[-1].control) == (1, 0)

    def test_measured_qubit_discards_gates(self):
        env = make_env("SP-bell")
        env.reset()
        env.step(encode_action("M", 0, num_qubits=2))
        before = env.state.copy()
        result = env.step(encode_action("X", 0, angle=1.0, num_qubits=2))
        np.testing.assert_array_equal(env.state, before)
        assert env.circuit.records == ()
        assert result.info["step"] == 2  # discarded but still on the clock

    def test_all_measured_terminates(self):
        env = make_env("SP-bell")
        env.reset()
        r1 = env.step(encode_action("M", 0, num_qubits=2))
        assert not r1.terminated
        r2 = env.step(encode_action("M", 1, num_qubits=2))
        assert r2.terminated

    def test_single_qubit_measure_terminates(self):
        env = make_env("UC-hadamard")
        env.reset()
        result = env.step(encode_action("M", 0, num_qubits=1))
        assert result.terminated

    def test_measurement_collapse_scored(self):
        """Final SP reward uses the post-collapse state.

        Measuring both halves of a Bell pair collapses to |00> or |11>;
        either way the fidelity with the Bell target is exactly 1/2.
        """
        spec = parse_challenge_spec("SP-bell")
        target = spec.target()
        env = CircuitDesignerEnv(EnvConfig(spec, seed=3))
        env.reset()
        for a in bell_actions()[:4]:  # prepare the Bell state
            env.step(a)
        env.step(encode_action("M", 0, num_qubits=2))
        result = env.step(encode_action("M", 1, num_qubits=2))
        assert result.terminated
        assert sp_reward(env.state, target, True) == pytest.approx(0.5, abs=1e-9)
        assert result.reward == pytest.approx(0.5 - step_cost(6, 12), abs=1e-12)

    def test_truncation_at_budget(self):
        env = make_env("SP-bell")
        env.reset()
        gate = encode_action("X", 0, angle=0.3, num_qubits=2)
        for t in range(1, 12):
            result = env.step(gate)
            assert not result.done or t == 12
        result = env.step(gate)
        assert result.truncated and not result.terminated
        assert env.step_index == 12

    def test_truncation_grants_final_reward(self):
        """The challenge score is paid on truncation too."""
        env = make_env("SP-bell")
        env.reset()
        for _ in range(11):
            env.step(encode_action("Z", 0, angle=0.1, num_qubits=2))
        result = env.step(encode_action("Z", 0, angle=0.1, num_qubits=2))
        assert result.truncated
        # phases on |00> leave fidelity at 0.5; cost at t = 12 is 1
        assert result.reward == pytest.approx(0.5 - 1.0, abs=1e-9)

    def test_step_after_done_rejected(self):
        env = make_env("SP-bell")
        env.reset()
        env.step(encode_action("T", 0, num_qubits=2))
        with pytest.raises(InvalidStateError):
            env.step(encode_action("T", 0, num_qubits=2))


class TestCertificateReturns:
    """Total returns of the known optimal sequences, costs included."""

    def test_bell(self):
        env = make_env("SP-bell")
        results = scripted_rollout(env, bell_actions())
        rewards = [r.reward for r in results]
        np.testing.assert_allclose(rewards[:4], 0.0, atol=1e-12)
        assert rewards[4] == pytest.approx(0.875, abs=1e-9)
        assert results[4].terminated
        assert sum(rewards) == pytest.approx(0.875, abs=1e-9)

    def test_ghz(self):
        n = 3
        actions = [
            encode_action("Z", 0, angle=math.pi / 2, num_qubits=n),
            encode_action("X", 0, angle=math.pi / 2, num_qubits=n),
            encode_action("Z", 0, angle=math.pi / 2, num_qubits=n),
            encode_action("X", 1, control=0, num_qubits=n),
            encode_action("X", 2, control=0, num_qubits=n),
            encode_action("T", 0, num_qubits=n),
        ]
        results = scripted_rollout(make_env("SP-ghz"), actions)
        assert sum(r.reward for r in results) == pytest.approx(0.9, abs=1e-9)

    def test_hadamard(self):
        n = 1
        actions = [
            encode_action("Z", 0, angle=math.pi / 2, num_qubits=n),
            encode_action("X", 0, angle=math.pi / 2, num_qubits=n),
            encode_action("Z", 0, angle=math.pi / 2, num_qubits=n),
            encode_action("T", 0, num_qubits=n),
        ]
        results = scripted_rollout(make_env("UC-hadamard"), actions)
        assert sum(r.reward for r in results) == pytest.approx(5.0 / 6.0, abs=1e-9)


class TestInvariants:
    def test_observation_norm_one(self):
        rng = np.random.default_rng(77)
        env = make_env("SP-ghz", seed=4)
        for _ in range(20):
            obs = env.reset()
            while True:
                assert np.sum(obs**2) == pytest.approx(1.0, abs=1e-8)
                result = env.step(rng.uniform(-1, 1, 4))
                obs = result.observation
                if result.done:
                    break

    def test_episode_length_bounded(self):
        rng = np.random.default_rng(88)
        env = make_env("UC-random", seed=9)
        for _ in range(30):
            env.reset()
            steps = 0
            while True:
                result = env.step(rng.uniform(-1, 1, 4))
                steps += 1
                if result.done:
                    break
            assert steps <= env.max_depth

    def test_sp_reward_bounds(self):
        rng = np.random.default_rng(99)
        env = make_env("SP-random", seed=5)
        for _ in range(30):
            env.reset()
            while True:
                result = env.step(rng.uniform(-1, 1, 4))
                assert -1.0 - 1e-12 <= result.reward <= 1.0 + 1e-12
                if result.done:
                    break

    def test_determinism(self):
        rng = np.random.default_rng(123)
        actions = rng.uniform(-1, 1, (60, 4))

        def run():
            env = make_env("SP-random", seed=11)
            env.reset(seed=42)
            trace = []
            for a in actions:
                result = env.step(a)
                trace.append((result.observation.tobytes(), result.reward))
                if result.done:
                    env.reset(seed=43)
            return trace

        assert run() == run()

    def test_mid_episode_clone_replays_identically(self):
        """Step output is a function of the carried state only."""
        rng = np.random.default_rng(321)
        env = make_env("SP-ghz", seed=6)
        env.reset()
        for q in range(3):  # gate-only warmup so the episode stays live
            env.step(encode_action("X", q, angle=0.4, num_qubits=3))
        env.step(encode_action("M", 0, num_qubits=3))
        twin = env.clone()
        tail = rng.uniform(-1, 1, (40, 4))
        for a in tail:
            r1 = env.step(a)
            r2 = twin.step(a)
            np.testing.assert_array_equal(r1.observation, r2.observation)
            assert r1.reward == r2.reward
            assert (r1.terminated, r1.truncated) == (r2.terminated, r2.truncated)
            if r1.done:
                break


class TestTargets:
    def test_random_target_fixed_per_run(self):
        a = make_env("SP-random", seed=7)
        b = make_env("SP-random", seed=7)
        np.testing.assert_array_equal(a.target, b.target)
        c = make_env("SP-random", seed=8)
        assert not np.allclose(a.target, c.target, atol=1e-3)

    def test_challenge_seed_overrides_run_seed(self):
        a = make_env("SP-random:seed=5", seed=1)
        b = make_env("SP-random:seed=5", seed=2)
        np.testing.assert_array_equal(a.target, b.target)

    def test_config_validation(self):
        spec = parse_challenge_spec("SP-bell")
        with pytest.raises(ConfigError):
            EnvConfig(spec, num_qubits=3)
        with pytest.raises(ConfigError):
            EnvConfig(spec, max_depth=5)
        cfg = EnvConfig(spec)
        assert (cfg.num_qubits, cfg.max_depth) == (2, 12)


class TestEpisodeLog:
    def test_csv_rows(self, tmp_path):
        path = str(tmp_path / "log.csv")
        env = make_env("SP-bell")
        with EpisodeLogger(path) as logger:
            env.reset()
            for episode, action in ((0, bell_actions()), (1, bell_actions())):
                env.reset()
                for a in action:
                    logger.log(episode, env.step(a))
        with open(path, newline="") as f:
            rows = list(csv.reader(f))
        assert rows[0] == [
            "episode", "step", "o", "q", "c", "phi", "reward",
            "terminated", "truncated", "depth", "qubits_used",
        ]
        assert len(rows) == 11
        assert rows[1][:5] == ["0", "1", "Z", "0", "0"]
        assert float(rows[1][5]) == pytest.approx(math.pi / 2)
        last = rows[10]
        assert last[2] == "T"
        assert last[7] == "1"  # terminated flag
        assert float(last[6]) == pytest.approx(0.875, abs=1e-9)


def test_flatten_state_layout():
    state = init_state(1).astype(np.complex128)
    state[0] = 0.6 + 0.8j
    np.testing.assert_allclose(flatten_state(state), [0.6, 0.8, 0.0, 0.0])
