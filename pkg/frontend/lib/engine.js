"use strict";
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
exports.SyncEngine = exports.EngineError = void 0;
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
const child_process_1 = require("child_process");
const fs_1 = __importDefault(require("fs"));
const os_1 = __importDefault(require("os"));
const path_1 = __importDefault(require("path"));
/** Engine-reported failure, or a dead or closed engine process. */
class EngineError extends Error {
    constructor(message) {
        super(message);
        this.name = 'EngineError';
    }
}
exports.EngineError = EngineError;
class SyncEngine {
    constructor(options = {}) {
        this.chunk = Buffer.alloc(1 << 16);
        this.buffered = '';
        this.closed = false;
        this.disposed = false;
        const command = options.command ?? process.env.QCD_COMMAND ?? 'qcd';
        this.dir = fs_1.default.mkdtempSync(path_1.default.join(os_1.default.tmpdir(), 'qcd-engine-'));
        const requestPath = path_1.default.join(this.dir, 'requests');
        const replyPath = path_1.default.join(this.dir, 'replies');
        (0, child_process_1.execFileSync)('mkfifo', [requestPath, replyPath]);
        // Open order matters. 'r+' never blocks on a FIFO, and makes this
        // process the request writer. For replies this process must hold
        // only a read descriptor and the child the only write descriptor,
        // so that readSync reports EOF if the engine dies rather than
        // blocking forever.
        this.requestFd = fs_1.default.openSync(requestPath, 'r+');
        const unblock = fs_1.default.openSync(replyPath, 'r+');
        this.replyFd = fs_1.default.openSync(replyPath, 'r');
        const childOut = fs_1.default.openSync(replyPath, 'w');
        fs_1.default.closeSync(unblock);
        this.child = (0, child_process_1.spawn)(command, ['serve'], {
            stdio: [this.requestFd, childOut, 'inherit'],
        });
        this.child.unref();
        fs_1.default.closeSync(childOut);
    }
    /** One request/reply exchange. Throws EngineError on {ok: false}. */
    rpc(message) {
        if (this.closed) {
            throw new EngineError('engine is closed');
        }
        fs_1.default.writeSync(this.requestFd, JSON.stringify(message) + '\n');
        const reply = JSON.parse(this.readLine());
        if (!reply.ok) {
            throw new EngineError(String(reply.error));
        }
        return reply;
    }
    readLine() {
        for (;;) {
            const newline = this.buffered.indexOf('\n');
            if (newline >= 0) {
                const line = this.buffered.slice(0, newline);
                this.buffered = this.buffered.slice(newline + 1);
                return line;
            }
            const count = fs_1.default.readSync(this.replyFd, this.chunk, 0, this.chunk.length, null);
            if (count === 0) {
                this.closed = true;
                throw new EngineError('engine exited before replying');
            }
            this.buffered += this.chunk.toString('utf8', 0, count);
        }
    }
    make(challenge, seed = 0) {
        const reply = this.rpc({ cmd: 'make', challenge, seed });
        return {
            observationSize: reply.observation_size,
            actionSize: reply.action_size,
            numQubits: reply.num_qubits,
            maxDepth: reply.max_depth,
        };
    }
    reset(seed) {
        const message = { cmd: 'reset' };
        if (seed !== undefined) {
            message.seed = seed;
        }
        return this.rpc(message).observation;
    }
    step(action) {
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
    close() {
        // releases resources even when an engine EOF already set closed
        if (this.disposed) {
            return;
        }
        this.disposed = true;
        if (!this.closed) {
            try {
                this.rpc({ cmd: 'close' });
            }
            catch {
                // engine already gone; fall through to cleanup
            }
            this.closed = true;
        }
        if (this.child.exitCode === null && !this.child.killed) {
            this.child.kill();
        }
        fs_1.default.closeSync(this.requestFd);
        fs_1.default.closeSync(this.replyFd);
        fs_1.default.rmSync(this.dir, { recursive: true, force: true });
    }
}
exports.SyncEngine = SyncEngine;
