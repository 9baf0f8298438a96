/**
 * Synchronous client for the circuit-designer engine.
 *
 * The engine is a `qcd serve` subprocess speaking one JSON object per
 * line over stdio (make / reset / step / close). Host RL training loops
 * call step synchronously, so the transport must block: both streams
 * run over POSIX FIFOs and replies are read with fs.readSync on a
 * blocking descriptor. The engine owns all simulation state; this
 * client only forwards values.
 */
import { ChildProcess, execFileSync, spawn } from 'child_process';
import fs from 'fs';
import os from 'os';
import path from 'path';

/** Engine-reported failure, or a dead or closed engine process. */
export class EngineError extends Error {
  constructor(message: string) {
    super(message);
    this.name = 'EngineError';
  }
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

export class SyncEngine {
  private readonly child: ChildProcess;
  private readonly requestFd: number;
  private readonly replyFd: number;
  private readonly dir: string;
  private readonly chunk = Buffer.alloc(1 << 16);
  private buffered = '';
  private closed = false;
  private disposed = false;

  constructor(options: EngineOptions = {}) {
    const command = options.command ?? process.env.QCD_COMMAND ?? 'qcd';
    this.dir = fs.mkdtempSync(path.join(os.tmpdir(), 'qcd-engine-'));
    const requestPath = path.join(this.dir, 'requests');
    const replyPath = path.join(this.dir, 'replies');
    execFileSync('mkfifo', [requestPath, replyPath]);
    // Open order matters. 'r+' never blocks on a FIFO, and makes this
    // process the request writer. For replies this process must hold
    // only a read descriptor and the child the only write descriptor,
    // so that readSync reports EOF if the engine dies rather than
    // blocking forever.
    this.requestFd = fs.openSync(requestPath, 'r+');
    const unblock = fs.openSync(replyPath, 'r+');
    this.replyFd = fs.openSync(replyPath, 'r');
    const childOut = fs.openSync(replyPath, 'w');
    fs.closeSync(unblock);
    this.child = spawn(command, ['serve'], {
      stdio: [this.requestFd, childOut, 'inherit'],
    });
    this.child.unref();
    fs.closeSync(childOut);
  }

  /** One request/reply exchange. Throws EngineError on {ok: false}. */
  rpc(message: Record<string, unknown>): Record<string, any> {
    if (this.closed) {
      throw new EngineError('engine is closed');
    }
    fs.writeSync(this.requestFd, JSON.stringify(message) + '\n');
    const reply = JSON.parse(this.readLine());
    if (!reply.ok) {
      throw new EngineError(String(reply.error));
    }
    return reply;
  }

  private readLine(): string {
    for (;;) {
      const newline = this.buffered.indexOf('\n');
      if (newline >= 0) {
        const line = this.buffered.slice(0, newline);
        this.buffered = this.buffered.slice(newline + 1);
        return line;
      }
      const count = fs.readSync(this.replyFd, this.chunk, 0, this.chunk.length, null);
      if (count === 0) {
        this.closed = true;
        throw new EngineError('engine exited before replying');
      }
      this.buffered += this.chunk.toString('utf8', 0, count);
    }
  }

  make(challenge: string, seed = 0): EngineInfo {
    const reply = this.rpc({ cmd: 'make', challenge, seed });
    return {
      observationSize: reply.observation_size,
      actionSize: reply.action_size,
      numQubits: reply.num_qubits,
      maxDepth: reply.max_depth,
    };
  }

  reset(seed?: number): number[] {
    const message: Record<string, unknown> = { cmd: 'reset' };
    if (seed !== undefined) {
      message.seed = seed;
    }
    return this.rpc(message).observation;
  }

  step(action: readonly number[]): EngineStep {
    const reply = this.rpc({ cmd: 'step', action });
    return {
      observation: reply.observation,
      reward: reply.reward,
      terminated: reply.terminated,
      truncated: reply.truncated,
      step: reply.step,
      depth: reply.depth,
      qubitsUsed: reply.qubits_used,
    };
  }

  close(): void {
    // releases resources even when an engine EOF already set closed
    if (this.disposed) {
      return;
    }
    this.disposed = true;
    if (!this.closed) {
      try {
        this.rpc({ cmd: 'close' });
      } catch {
        // engine already gone; fall through to cleanup
      }
      this.closed = true;
    }
    if (this.child.exitCode === null && !this.child.killed) {
      this.child.kill();
    }
    fs.closeSync(this.requestFd);
    fs.closeSync(this.replyFd);
    fs.rmSync(this.dir, { recursive: true, force: true });
  }
}
