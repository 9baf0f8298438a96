"""Command-line interface.

Subcommands:

    run     roll episodes (or replay an action log), write episode CSVs
            and the final circuit, print per-episode returns
    train   train an agent per seed, stream metrics CSVs, write a summary
    eval    greedy evaluation per seed with aggregate confidence intervals
    oracle  self-checks printing measured vs expected values
    render  pretty-print an exported circuit file
    serve   line-delimited JSON reset/step bridge over stdio

Config files are INI: a [run] section for the common fields and one
section per agent for hyperparameters; explicit flags win over the file.
QCD_THREADS caps how many seeds run concurrently. Exit codes: 0 success,
1 oracle failure, 2 usage or config errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import agents, circuit as circuit_mod, core
from .agents import (
    RandomPolicy,
    ReinforcePolicy,
    ScriptedPolicy,
    ci95,
    evaluate,
    run_episode,
    train,
)
from .challenges import ChallengeSpec, parse_challenge_spec, sp_reward
from .env import CircuitDesignerEnv, EnvConfig, EpisodeLogger
from .errors import ConfigError, ParseError, QcdError

DEFAULT_SEEDS = list(range(8))

_REINFORCE_OPTS = {
    "lr": float,
    "gamma": float,
    "entropy_coef": float,
    "seed": int,
    "hidden": int,
}


def make_policy(agent: str, obs_size: int, seed: int, options: dict | None = None):
    """Construct a policy from its CLI name (random, reinforce, scripted:x)."""
    options = dict(options or {})
    batch_episodes = int(options.pop("batch_episodes", 16))
    if agent == "random":
        if options:
            raise ConfigError(f"random agent takes no options, got {options}")
        return RandomPolicy(seed=seed), batch_episodes
    if agent == "reinforce":
        kwargs = {}
        for key, value in options.items():
            if key not in _REINFORCE_OPTS:
                raise ConfigError(f"unknown reinforce option {key!r}")
            kwargs[key] = _REINFORCE_OPTS[key](value)
        kwargs.setdefault("seed", seed)
        return ReinforcePolicy(obs_size=obs_size, **kwargs), batch_episodes
    if agent.startswith("scripted:"):
        return ScriptedPolicy(agent.split(":", 1)[1]), batch_episodes
    raise ConfigError(
        f"unknown agent {agent!r} (want random, reinforce, or scripted:<name>)"
    )


def _worker_count(num_seeds: int) -> int:
    cap = os.environ.get("QCD_THREADS")
    workers = min(num_seeds, os.cpu_count() or 1)
    if cap is not None:
        try:
            workers = min(workers, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"QCD_THREADS must be an integer, got {cap!r}")
    return max(1, workers)


def _per_seed(func, seeds):
    """Run one job per seed, possibly on a small thread pool; keep order."""
    workers = _worker_count(len(seeds))
    if workers == 1:
        return [func(seed) for seed in seeds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, seeds))


# ---------------------------------------------------------------------------
# run


def _load_actions(path: str) -> list[np.ndarray]:
    actions = []
    with open(path) as f:
        for lineno, line in enumerate(f, start=1):
            fields = line.split()
            if not fields:
                continue
            if len(fields) != 4:
                raise ParseError(f"{path}:{lineno}: expected 4 components")
            try:
                actions.append(np.array([float(x) for x in fields]))
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    if not actions:
        raise ConfigError(f"{path}: no actions found")
    return actions


def _fmt_vector(values) -> str:
    return " ".join(f"{v:.17g}" for v in values)


def cmd_run(args) -> int:
    spec = parse_challenge_spec(args.challenge)
    out_dir = args.out
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)

    if args.actions is not None:
        return _run_replay(args, spec, out_dir)

    def roll(seed: int):
        env = CircuitDesignerEnv(EnvConfig(spec, seed=seed))
        policy, _ = make_policy(args.agent, env.observation_size, seed, args.options)
        logger = None
        if out_dir is not None:
            logger = EpisodeLogger(os.path.join(out_dir, f"episode_log_seed{seed}.csv"))
        episodes = []
        try:
            for episode in range(args.episodes):
                policy.begin_episode()
                obs = env.reset()
                total = 0.0
                while True:
                    action = np.clip(np.asarray(policy.act(obs)), -1.0, 1.0)
                    result = env.step(action)
                    total += result.reward
                    obs = result.observation
                    if logger is not None:
                        logger.log(episode, result)
                    if result.done:
                        break
                episodes.append(
                    (total, env.step_index, env.circuit.depth(), env.circuit.qubits_used())
                )
        finally:
            if logger is not None:
                logger.close()
        if out_dir is not None:
            with open(os.path.join(out_dir, f"circuit_seed{seed}.txt"), "w") as f:
                f.write(env.circuit.render_text() + "\n")
            circuit_mod.dump_circuit(
                env.circuit, os.path.join(out_dir, f"circuit_seed{seed}.records")
            )
        return episodes

    all_episodes = _per_seed(roll, args.seeds)
    returns = []
    for seed, episodes in zip(args.seeds, all_episodes):
        for i, (total, length, depth, qubits) in enumerate(episodes):
            returns.append(total)
            print(
                f"seed {seed} episode {i}: return {total:.6f} length {length}"
                f" depth {depth} qubits {qubits}"
            )
    print(f"mean return {np.mean(returns):.6f} over {len(returns)} episode(s)")
    return 0


def _run_replay(args, spec: ChallengeSpec, out_dir: str | None) -> int:
    """Feed a logged action list through the engine, episode by episode."""
    actions = _load_actions(args.actions)
    seed = args.seeds[0]
    env = CircuitDesignerEnv(EnvConfig(spec, seed=seed))
    trace = open(args.trace, "w") if args.trace is not None else None
    logger = None
    if out_dir is not None:
        logger = EpisodeLogger(os.path.join(out_dir, f"episode_log_seed{seed}.csv"))
    episode = 0
    returns = [0.0]
    try:
        obs = env.reset()
        if trace is not None:
            trace.write(f"reset {_fmt_vector(obs)}\n")
        for action in actions:
            if env.terminated or env.truncated:
                episode += 1
                returns.append(0.0)
                obs = env.reset()
                if trace is not None:
                    trace.write(f"reset {_fmt_vector(obs)}\n")
            result = env.step(np.clip(action, -1.0, 1.0))
            returns[-1] += result.reward
            if trace is not None:
                trace.write(
                    f"step {result.reward:.17g} {int(result.terminated)}"
                    f" {int(result.truncated)} {_fmt_vector(result.observation)}\n"
                )
            if logger is not None:
                logger.log(episode, result)
    finally:
        if trace is not None:
            trace.close()
        if logger is not None:
            logger.close()
    print(
        f"replayed {len(actions)} action(s) over {episode + 1} episode(s),"
        f" mean return {np.mean(returns):.6f}"
    )
    return 0


# ---------------------------------------------------------------------------
# train


def cmd_train(args) -> int:
    spec = parse_challenge_spec(args.challenge)
    out_dir = args.out
    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)

    def train_seed(seed: int):
        env = CircuitDesignerEnv(EnvConfig(spec, seed=seed))
        policy, batch_episodes = make_policy(
            args.agent, env.observation_size, seed, args.options
        )
        metrics_path = None
        if out_dir is not None:
            metrics_path = os.path.join(out_dir, f"metrics_seed{seed}.csv")
        summary = train(
            policy, env, total_steps=args.steps,
            batch_episodes=batch_episodes, metrics_path=metrics_path,
        )
        return {"seed": seed, **summary}

    finals = _per_seed(train_seed, args.seeds)
    for final in finals:
        print(
            f"seed {final['seed']}: mean_return_100 {final['mean_return']:.6f}"
            f" episodes {final['episodes']} steps {final['steps']}"
        )
    summary = {
        "challenge": spec.name,
        "agent": args.agent,
        "total_steps": args.steps,
        "seeds": list(args.seeds),
        "per_seed": finals,
        "aggregate": _aggregate(finals),
    }
    print(
        f"aggregate mean_return {summary['aggregate']['mean_return']:.6f}"
        f" ci95 {summary['aggregate']['ci95_return']:.6f}"
    )
    if out_dir is not None:
        with open(os.path.join(out_dir, "summary.json"), "w") as f:
            json.dump(summary, f, indent=2, sort_keys=True)
            f.write("\n")
    return 0


def _aggregate(finals: list[dict]) -> dict:
    out = {}
    for key, label in (
        ("mean_return", "return"),
        ("mean_qubits", "qubits"),
        ("mean_depth", "depth"),
    ):
        values = [f[key] for f in finals]
        out[key] = float(np.mean(values))
        out[f"ci95_{label}"] = ci95(values)
    return out


# ---------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    spec = parse_challenge_spec(args.challenge)

    def eval_seed(seed: int):
        env_probe = CircuitDesignerEnv(EnvConfig(spec, seed=seed))
        policy, _ = make_policy(
            args.agent, env_probe.observation_size, seed, args.options
        )
        summary = evaluate(policy, spec, args.episodes, seed=seed)
        return {"seed": seed, **summary}

    per_seed = _per_seed(eval_seed, args.seeds)
    for row in per_seed:
        print(
            f"seed {row['seed']}: mean_return {row['mean_return']:.6f}"
            f" mean_qubits {row['mean_qubits']:.3f} mean_depth {row['mean_depth']:.3f}"
        )
    summary = {
        "challenge": spec.name,
        "agent": args.agent,
        "episodes": args.episodes,
        "seeds": list(args.seeds),
        "per_seed": per_seed,
        "aggregate": _aggregate(per_seed),
    }
    print(
        f"aggregate mean_return {summary['aggregate']['mean_return']:.6f}"
        f" ci95 {summary['aggregate']['ci95_return']:.6f}"
    )
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "eval.json"), "w") as f:
            json.dump(summary, f, indent=2, sort_keys=True)
            f.write("\n")
    return 0


# ---------------------------------------------------------------------------
# oracle


def _oracle_certificate(name: str):
    """Certificate sequences: quality metric and total return vs expected."""
    script, challenge, quality_expected, return_expected = {
        "SP-bell": ("bell", "SP-bell", 1.0, 0.875),
        "SP-ghz": ("ghz", "SP-ghz", 1.0, 0.9),
        "UC-hadamard": ("hadamard", "UC-hadamard", 0.0, 5.0 / 6.0),
    }[name]
    spec = parse_challenge_spec(challenge)
    env = CircuitDesignerEnv(EnvConfig(spec, seed=0))
    _, metrics = run_episode(ScriptedPolicy(script), env)
    if spec.family == "SP":
        quality = sp_reward(env.state, env.target, True)
        quality_label = "fidelity"
        quality_tol = 1e-9
    else:
        quality = core.frobenius_distance(env.circuit.composed_unitary(), env.target)
        quality_label = "frobenius_distance"
        quality_tol = 1e-10
    return [
        (f"{name} certificate {quality_label}", quality, quality_expected, quality_tol),
        (f"{name} certificate return", metrics.episode_return, return_expected, 1e-9),
    ]


def _oracle_haar():
    overlaps = [
        abs(core.haar_random_unitary(2, seed)[0, 0]) ** 2 for seed in range(2000)
    ]
    return [("haar mean overlap (eta=2)", float(np.mean(overlaps)), 0.25, 0.02)]


def _oracle_born():
    plus = core.apply_gate(core.init_state(1), core.Gate("H"), 0)
    rng = np.random.default_rng(0)
    ones = sum(core.measure_qubit(plus, 0, rng)[0] for _ in range(2000))
    return [("born frequency of 1 on |+>", ones / 2000.0, 0.5, 0.03)]


def _oracle_gradient():
    policy = ReinforcePolicy(obs_size=6, seed=13)
    rng = np.random.default_rng(14)
    trajectories = []
    for _ in range(4):
        length = int(rng.integers(2, 6))
        obs = rng.normal(size=(length, 6))
        acts = np.array([policy.act(o) for o in obs])
        trajectories.append(agents.Trajectory(obs, acts, rng.normal(size=length)))
    analytic = policy.flat_grads(trajectories)
    theta = policy.get_flat_params().copy()
    rng_idx = np.random.default_rng(15)
    picks = rng_idx.choice(len(theta), size=200, replace=False)
    h = 1e-6
    worst = 0.0
    for i in picks:
        theta[i] += h
        policy.set_flat_params(theta)
        up = policy.loss(trajectories)
        theta[i] -= 2 * h
        policy.set_flat_params(theta)
        down = policy.loss(trajectories)
        theta[i] += h
        numeric = (up - down) / (2 * h)
        scale = max(abs(numeric), 1e-3)
        worst = max(worst, abs(analytic[i] - numeric) / scale)
    policy.set_flat_params(theta)
    return [("reinforce gradient worst relative error", worst, 0.0, 1e-4)]


ORACLES = {
    "SP-bell": lambda: _oracle_certificate("SP-bell"),
    "SP-ghz": lambda: _oracle_certificate("SP-ghz"),
    "UC-hadamard": lambda: _oracle_certificate("UC-hadamard"),
    "haar": _oracle_haar,
    "born": _oracle_born,
    "gradient": _oracle_gradient,
}


def cmd_oracle(args) -> int:
    names = list(ORACLES) if args.name == "all" else [args.name]
    unknown = [n for n in names if n not in ORACLES]
    if unknown:
        raise ConfigError(f"unknown oracle {unknown[0]!r} (want {list(ORACLES)} or all)")
    failures = 0
    for name in names:
        for label, measured, expected, tol in ORACLES[name]():
            ok = abs(measured - expected) <= tol
            failures += not ok
            status = "PASS" if ok else "FAIL"
            print(
                f"{label}: measured {measured:.12g} expected {expected:.12g}"
                f" tol {tol:g} {status}"
            )
    return 1 if failures else 0


# ---------------------------------------------------------------------------
# render


def cmd_render(args) -> int:
    with open(args.circuit) as f:
        records = circuit_mod.parse_records(f.read())
    max_step = max((r.step for r in records), default=0)
    built = circuit_mod.Circuit(args.eta, max(1, max_step))
    for record in records:
        built = built.append(record)
    print(built.render_text())
    print(f"depth {built.depth()} qubits_used {built.qubits_used()}")
    return 0


# ---------------------------------------------------------------------------
# serve


def cmd_serve(args) -> int:
    """Line-delimited JSON bridge: make / reset / step / close."""
    env = None
    stdin = sys.stdin
    stdout = sys.stdout
    while True:
        line = stdin.readline()
        if not line:
            break
        line = line.strip()
        if not line:
            continue
        try:
            request = json.loads(line)
            command = request.get("cmd")
            if command == "make":
                spec = parse_challenge_spec(request["challenge"])
                env = CircuitDesignerEnv(
                    EnvConfig(spec, seed=int(request.get("seed", 0)))
                )
                reply = {
                    "ok": True,
                    "observation_size": env.observation_size,
                    "action_size": env.action_size,
                    "num_qubits": env.num_qubits,
                    "max_depth": env.max_depth,
                }
            elif command == "reset":
                if env is None:
                    raise ConfigError("reset before make")
                seed = request.get("seed")
                obs = env.reset(seed=None if seed is None else int(seed))
                reply = {"ok": True, "observation": obs.tolist()}
            elif command == "step":
                if env is None:
                    raise ConfigError("step before make")
                action = np.asarray(request["action"], dtype=np.float64)
                result = env.step(np.clip(action, -1.0, 1.0))
                reply = {
                    "ok": True,
                    "observation": result.observation.tolist(),
                    "reward": result.reward,
                    "terminated": result.terminated,
                    "truncated": result.truncated,
                    "step": result.info["step"],
                    "depth": result.info["depth"],
                    "qubits_used": result.info["qubits_used"],
                }
            elif command == "close":
                stdout.write(json.dumps({"ok": True}) + "\n")
                stdout.flush()
                break
            else:
                raise ConfigError(f"unknown command {command!r}")
        except (QcdError, ValueError, KeyError, TypeError) as exc:
            reply = {"ok": False, "error": f"{type(exc).__name__}: {exc}"}
        stdout.write(json.dumps(reply) + "\n")
        stdout.flush()
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def _parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(s) for s in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"bad seeds {text!r}: {exc}") from exc
    if not seeds:
        raise ConfigError("at least one seed is required")
    return seeds


def _parse_options(pairs: list[str]) -> dict:
    options = {}
    for pair in pairs:
        key, eq, value = pair.partition("=")
        if not eq or not key or not value:
            raise ConfigError(f"--opt wants key=value, got {pair!r}")
        options[key] = value
    return options


def _apply_config_file(args) -> None:
    """Fill unset args from the INI file; explicit flags keep priority."""
    if args.config is None:
        return
    parser = configparser.ConfigParser()
    read = parser.read(args.config)
    if not read:
        raise ConfigError(f"cannot read config file {args.config}")
    section = parser["run"] if parser.has_section("run") else {}
    if getattr(args, "challenge", None) is None and "challenge" in section:
        args.challenge = section["challenge"]
    if getattr(args, "agent", None) is None and "agent" in section:
        args.agent = section["agent"]
    if getattr(args, "seeds", None) is None and "seeds" in section:
        args.seeds = _parse_seeds(section["seeds"])
    if getattr(args, "steps", None) is None and "steps" in section:
        args.steps = int(section["steps"])
    if getattr(args, "episodes", None) is None and "episodes" in section:
        args.episodes = int(section["episodes"])
    if getattr(args, "out", None) is None and "out" in section:
        args.out = section["out"]
    agent = getattr(args, "agent", None)
    if agent is not None and parser.has_section(agent):
        file_options = dict(parser[agent])
        file_options.update(getattr(args, "options", {}) or {})
        args.options = file_options


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qcd",
        description="Quantum circuit designer: simulator, environment, agents.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, agent_default=None):
        p.add_argument("--challenge", help="challenge spec, e.g. SP-bell")
        p.add_argument("--agent", default=None,
                       help=f"random, reinforce, or scripted:<name>"
                            f" (default {agent_default})")
        p.add_argument("--seeds", type=_parse_seeds, default=None,
                       help="seed list, e.g. '0 1 2' (default 0..7)")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--config", default=None, help="INI config file")
        p.add_argument("--opt", action="append", default=[], metavar="KEY=VALUE",
                       help="agent hyperparameter override (repeatable)")
        p.set_defaults(agent_default=agent_default)

    p_run = sub.add_parser("run", help="roll episodes or replay an action log")
    common(p_run, agent_default="random")
    p_run.add_argument("--episodes", type=int, default=None,
                       help="episodes per seed (default 1)")
    p_run.add_argument("--actions", default=None,
                       help="replay raw actions from a file (4 numbers per line)")
    p_run.add_argument("--trace", default=None,
                       help="with --actions: write observations/rewards per step")
    p_run.set_defaults(func=cmd_run, episodes_default=1)

    p_train = sub.add_parser("train", help="train an agent per seed")
    common(p_train, agent_default="reinforce")
    p_train.add_argument("--steps", type=int, default=None,
                         help="environment steps per seed (default 200000)")
    p_train.set_defaults(func=cmd_train)

    p_eval = sub.add_parser("eval", help="evaluate an agent per seed")
    common(p_eval, agent_default="random")
    p_eval.add_argument("--episodes", type=int, default=None,
                        help="episodes per seed (default 100)")
    p_eval.set_defaults(func=cmd_eval, episodes_default=100)

    p_oracle = sub.add_parser("oracle", help="run self-checks")
    p_oracle.add_argument("name", nargs="?", default="all",
                          help=f"one of {list(ORACLES)} or all")
    p_oracle.set_defaults(func=cmd_oracle)

    p_render = sub.add_parser("render", help="pretty-print an exported circuit")
    p_render.add_argument("--circuit", required=True, help="records file")
    p_render.add_argument("--eta", type=int, required=True, help="register size")
    p_render.set_defaults(func=cmd_render)

    p_serve = sub.add_parser("serve", help="JSON reset/step bridge on stdio")
    p_serve.set_defaults(func=cmd_serve)

    return parser


def _finalize_args(args) -> None:
    args.options = _parse_options(args.opt)
    if args.config is not None:
        _apply_config_file(args)
    if args.agent is None:
        args.agent = args.agent_default
    if args.seeds is None:
        args.seeds = list(DEFAULT_SEEDS)
    if hasattr(args, "episodes") and args.episodes is None:
        args.episodes = args.episodes_default
    if hasattr(args, "steps") and args.steps is None:
        args.steps = 200_000
    if args.challenge is None:
        raise ConfigError("--challenge is required (flag or config file)")
    if getattr(args, "episodes", 1) < 1:
        raise ConfigError(f"episodes must be positive, got {args.episodes}")
    if getattr(args, "steps", 1) < 1:
        raise ConfigError(f"steps must be positive, got {args.steps}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.func in (cmd_run, cmd_train, cmd_eval):
            _finalize_args(args)  # the other commands take no run-config fields
        return args.func(args)
    except (ParseError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
