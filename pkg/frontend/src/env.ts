/**
 * Episodic environment binding over the engine, with Box spaces and a
 * registry of the six built-in challenge names so training scripts need
 * only a spec string. Observations, rewards, and flags are forwarded
 * from the engine untouched; no simulation state lives host-side.
 */
import nj from 'numjs';
import * as RL from 'rl-ts';
import { EngineOptions, SyncEngine } from './engine';

export type Observation = nj.NdArray<number>;
export type Action = nj.NdArray<number>;

export interface QcdEnvOptions extends EngineOptions {
  /** run seed: fixes random targets and the measurement stream */
  seed?: number;
}

/** Extra per-step detail beyond the done flag. */
export interface StepInfo {
  terminated: boolean;
  truncated: boolean;
  step: number;
  depth: number;
  qubitsUsed: number;
}

export class QcdEnv extends RL.Environments.Environment<
  RL.Spaces.Box,
  RL.Spaces.Box,
  Observation,
  Observation,
  Action,
  number
> {
  readonly observationSpace: RL.Spaces.Box;
  readonly actionSpace: RL.Spaces.Box;
  readonly challenge: string;
  readonly numQubits: number;
  /** step budget; episodes self-truncate at this length */
  maxEpisodeSteps: number;
  /** latest observation, mirrored for the host API; the engine is the
   * authority on simulation state */
  state: Observation;
  private readonly engine: SyncEngine;
  private pendingSeed: number | undefined;

  constructor(challenge: string, options: QcdEnvOptions = {}) {
    super(`qcd-${challenge}`);
    this.challenge = challenge;
    this.engine = new SyncEngine(options);
    let info;
    try {
      info = this.engine.make(challenge, options.seed ?? 0);
    } catch (error) {
      // a rejected make must not orphan the engine process
      this.engine.close();
      throw error;
    }
    this.observationSpace = new RL.Spaces.Box(-1, 1, [info.observationSize], 'float32');
    this.actionSpace = new RL.Spaces.Box(-1, 1, [info.actionSize], 'float32');
    this.numQubits = info.numQubits;
    this.maxEpisodeSteps = info.maxDepth;
    this.state = nj.zeros(info.observationSize);
  }

  /** Applies to the next reset only, mirroring the engine's contract. */
  seed(seed: number): void {
    this.pendingSeed = seed;
  }

  reset(): Observation {
    const observation = this.engine.reset(this.pendingSeed);
    this.pendingSeed = undefined;
    this.state = nj.array(observation);
    return this.state;
  }

  step(action: Action | number[] | number): {
    observation: Observation;
    reward: number;
    done: boolean;
    info: StepInfo;
  } {
    const raw =
      typeof action === 'number'
        ? [action]
        : Array.isArray(action)
        ? action
        : (action.flatten().tolist() as number[]);
    const result = this.engine.step(raw);
    this.state = nj.array(result.observation);
    return {
      observation: this.state,
      reward: result.reward,
      done: result.terminated || result.truncated,
      info: {
        terminated: result.terminated,
        truncated: result.truncated,
        step: result.step,
        depth: result.depth,
        qubitsUsed: result.qubitsUsed,
      },
    };
  }

  render(): void {
    // headless engine; diagrams come from the CLI's render subcommand
  }

  close(): void {
    this.engine.close();
  }
}

export type EnvFactory = (options?: QcdEnvOptions) => QcdEnv;

export const CHALLENGE_NAMES = [
  'SP-bell',
  'SP-ghz',
  'SP-random',
  'UC-hadamard',
  'UC-random',
  'UC-toffoli',
] as const;

const registry = new Map<string, EnvFactory>();

export function registerEnv(name: string, factory: EnvFactory): void {
  if (registry.has(name)) {
    throw new Error(`environment ${name} is already registered`);
  }
  registry.set(name, factory);
}

/** Register name, or any challenge spec string the engine accepts. */
export function makeEnv(name: string, options?: QcdEnvOptions): QcdEnv {
  const factory = registry.get(name);
  if (factory !== undefined) {
    return factory(options);
  }
  return new QcdEnv(name, options);
}

for (const name of CHALLENGE_NAMES) {
  registerEnv(name, (options) => new QcdEnv(name, options));
}
