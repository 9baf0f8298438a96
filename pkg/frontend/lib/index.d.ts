export { EngineError, EngineInfo, EngineOptions, EngineStep, SyncEngine } from './engine';
export { Action, CHALLENGE_NAMES, EnvFactory, Observation, QcdEnv, QcdEnvOptions, StepInfo, makeEnv, registerEnv, } from './env';
