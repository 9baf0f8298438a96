/**
 * Episodic environment binding over the engine, with Box spaces and a
 * registry of the six built-in challenge names so training scripts need
 * only a spec string. Observations, rewards, and flags are forwarded
 * from the engine untouched; no simulation state lives host-side.
 */
import nj from 'numjs';
import * as RL from 'rl-ts';
import { EngineOptions } from './engine';
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
export declare class QcdEnv extends RL.Environments.Environment<RL.Spaces.Box, RL.Spaces.Box, Observation, Observation, Action, number> {
    readonly observationSpace: RL.Spaces.Box;
    readonly actionSpace: RL.Spaces.Box;
    readonly challenge: string;
    readonly numQubits: number;
    /** step budget; episodes self-truncate at this length */
    maxEpisodeSteps: number;
    /** latest observation, mirrored for the host API; the engine is the
     * authority on simulation state */
    state: Observation;
    private readonly engine;
    private pendingSeed;
    constructor(challenge: string, options?: QcdEnvOptions);
    /** Applies to the next reset only, mirroring the engine's contract. */
    seed(seed: number): void;
    reset(): Observation;
    step(action: Action | number[] | number): {
        observation: Observation;
        reward: number;
        done: boolean;
        info: StepInfo;
    };
    render(): void;
    close(): void;
}
export type EnvFactory = (options?: QcdEnvOptions) => QcdEnv;
export declare const CHALLENGE_NAMES: readonly ["SP-bell", "SP-ghz", "SP-random", "UC-hadamard", "UC-random", "UC-toffoli"];
export declare function registerEnv(name: string, factory: EnvFactory): void;
/** Register name, or any challenge spec string the engine accepts. */
export declare function makeEnv(name: string, options?: QcdEnvOptions): QcdEnv;
