"""Train the REINFORCE baseline on SP-bell and compare with Random.

Run with: python3 demos/train_reinforce.py  (about half a minute)
"""

from qcd import (
    CircuitDesignerEnv,
    EnvConfig,
    RandomPolicy,
    ReinforcePolicy,
    evaluate,
    parse_challenge_spec,
    train,
)

spec = parse_challenge_spec("SP-bell")
seed = 0

# The random baseline samples uniform actions; most episodes stumble into
# costly steps or bad measurements before stopping.
baseline = evaluate(RandomPolicy(seed=seed), spec, episodes=100, seed=seed)
print(f"random baseline: mean return {baseline['mean_return']:.4f}"
      f" over {baseline['episodes']} episodes")

# REINFORCE with a squashed-Gaussian policy. 200k environment steps is the
# standard budget; the moving columns below are 100-episode window means.
env = CircuitDesignerEnv(EnvConfig(spec, seed=seed))
policy = ReinforcePolicy(obs_size=env.observation_size, seed=seed)

print("\ntraining REINFORCE for 200k steps...")
summary = train(policy, env, total_steps=200_000)
print(f"finished after {summary['episodes']} episodes"
      f" ({summary['steps']} steps)")
print(f"final window: mean return {summary['mean_return']:.4f},"
      f" mean depth {summary['mean_depth']:.2f},"
      f" mean qubits {summary['mean_qubits']:.2f}")

# A held-out evaluation run (fresh environment, same seed protocol).
result = evaluate(policy, spec, episodes=100, seed=seed)
print(f"\nREINFORCE eval: mean return {result['mean_return']:.4f}")
print(f"random eval:    mean return {baseline['mean_return']:.4f}")
print("learned beats random:", result["mean_return"] > baseline["mean_return"])
