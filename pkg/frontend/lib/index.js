"use strict";
Object.defineProperty(exports, "__esModule", { value: true });
exports.registerEnv = exports.makeEnv = exports.QcdEnv = exports.CHALLENGE_NAMES = exports.SyncEngine = exports.EngineError = void 0;
var engine_1 = require("./engine");
Object.defineProperty(exports, "EngineError", { enumerable: true, get: function () { return engine_1.EngineError; } });
Object.defineProperty(exports, "SyncEngine", { enumerable: true, get: function () { return engine_1.SyncEngine; } });
var env_1 = require("./env");
Object.defineProperty(exports, "CHALLENGE_NAMES", { enumerable: true, get: function () { return env_1.CHALLENGE_NAMES; } });
Object.defineProperty(exports, "QcdEnv", { enumerable: true, get: function () { return env_1.QcdEnv; } });
Object.defineProperty(exports, "makeEnv", { enumerable: true, get: function () { return env_1.makeEnv; } });
Object.defineProperty(exports, "registerEnv", { enumerable: true, get: function () { return env_1.registerEnv; } });
