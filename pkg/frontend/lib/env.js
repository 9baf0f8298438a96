"use strict";
var __createBinding = (this && this.__createBinding) || (Object.create ? (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    var desc = Object.getOwnPropertyDescriptor(m, k);
    if (!desc || ("get" in desc ? !m.__esModule : desc.writable || desc.configurable)) {
      desc = { enumerable: true, get: function() { return m[k]; } };
    }
    Object.defineProperty(o, k2, desc);
}) : (function(o, m, k, k2) {
    if (k2 === undefined) k2 = k;
    o[k2] = m[k];
}));
var __setModuleDefault = (this && this.__setModuleDefault) || (Object.create ? (function(o, v) {
    Object.defineProperty(o, "default", { enumerable: true, value: v });
}) : function(o, v) {
    o["default"] = v;
});
var __importStar = (this && this.__importStar) || (function () {
    var ownKeys = function(o) {
        ownKeys = Object.getOwnPropertyNames || function (o) {
            var ar = [];
            for (var k in o) if (Object.prototype.hasOwnProperty.call(o, k)) ar[ar.length] = k;
            return ar;
        };
        return ownKeys(o);
    };
    return function (mod) {
        if (mod && mod.__esModule) return mod;
        var result = {};
        if (mod != null) for (var k = ownKeys(mod), i = 0; i < k.length; i++) if (k[i] !== "default") __createBinding(result, mod, k[i]);
        __setModuleDefault(result, mod);
        return result;
    };
})();
var __importDefault = (this && this.__importDefault) || function (mod) {
    return (mod && mod.__esModule) ? mod : { "default": mod };
};
Object.defineProperty(exports, "__esModule", { value: true });
exports.CHALLENGE_NAMES = exports.QcdEnv = void 0;
exports.registerEnv = registerEnv;
exports.makeEnv = makeEnv;
/**
 * Episodic environment binding over the engine, with Box spaces and a
 * registry of the six built-in challenge names so training scripts need
 * only a spec string. Observations, rewards, and flags are forwarded
 * from the engine untouched; no simulation state lives host-side.
 */
const numjs_1 = __importDefault(require("numjs"));
const RL = __importStar(require("rl-ts"));
const engine_1 = require("./engine");
class QcdEnv extends RL.Environments.Environment {
    constructor(challenge, options = {}) {
        super(`qcd-${challenge}`);
        this.challenge = challenge;
        this.engine = new engine_1.SyncEngine(options);
        let info;
        try {
            info = this.engine.make(challenge, options.seed ?? 0);
        }
        catch (error) {
            // a rejected make must not orphan the engine process
            this.engine.close();
            throw error;
        }
        this.observationSpace = new RL.Spaces.Box(-1, 1, [info.observationSize], 'float32');
        this.actionSpace = new RL.Spaces.Box(-1, 1, [info.actionSize], 'float32');
        this.numQubits = info.numQubits;
        this.maxEpisodeSteps = info.maxDepth;
        this.state = numjs_1.default.zeros(info.observationSize);
    }
    /** Applies to the next reset only, mirroring the engine's contract. */
    seed(seed) {
        this.pendingSeed = seed;
    }
    reset() {
        const observation = this.engine.reset(this.pendingSeed);
        this.pendingSeed = undefined;
        this.state = numjs_1.default.array(observation);
        return this.state;
    }
    step(action) {
        const raw = typeof action === 'number'
            ? [action]
            : Array.isArray(action)
                ? action
                : action.flatten().tolist();
        const result = this.engine.step(raw);
        this.state = numjs_1.default.array(result.observation);
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
    render() {
        // headless engine; diagrams come from the CLI's render subcommand
    }
    close() {
        this.engine.close();
    }
}
exports.QcdEnv = QcdEnv;
exports.CHALLENGE_NAMES = [
    'SP-bell',
    'SP-ghz',
    'SP-random',
    'UC-hadamard',
    'UC-random',
    'UC-toffoli',
];
const registry = new Map();
function registerEnv(name, factory) {
    if (registry.has(name)) {
        throw new Error(`environment ${name} is already registered`);
    }
    registry.set(name, factory);
}
/** Register name, or any challenge spec string the engine accepts. */
function makeEnv(name, options) {
    const factory = registry.get(name);
    if (factory !== undefined) {
        return factory(options);
    }
    return new QcdEnv(name, options);
}
for (const name of exports.CHALLENGE_NAMES) {
    registerEnv(name, (options) => new QcdEnv(name, options));
}
