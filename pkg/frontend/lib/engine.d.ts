/** Engine-reported failure, or a dead or closed engine process. */
export declare class EngineError extends Error {
    constructor(message: string);
}
/** Geometry of a made environment. */
export interface EngineInfo {
    observationSize: number;
    actionSize: number;
    numQubits: number;
    maxDepth: number;
}
/** One transition, mirroring the native step result field for field. */
export interface EngineStep {
    observation: number[];
    reward: number;
    terminated: boolean;
    truncated: boolean;
    step: number;
    depth: number;
    qubitsUsed: number;
}
export interface EngineOptions {
    /** engine executable; the QCD_COMMAND variable overrides the default */
    command?: string;
}
export declare class SyncEngine {
    private readonly child;
    private readonly requestFd;
    private readonly replyFd;
    private readonly dir;
    private readonly chunk;
    private buffered;
    private closed;
    private disposed;
    constructor(options?: EngineOptions);
    /** One request/reply exchange. Throws EngineError on {ok: false}. */
    rpc(message: Record<string, unknown>): Record<string, any>;
    private readLine;
    make(challenge: string, seed?: number): EngineInfo;
    reset(seed?: number): number[];
    step(action: readonly number[]): EngineStep;
    close(): void;
}
