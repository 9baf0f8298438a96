import { expect } from 'chai';
import { execFileSync } from 'child_process';
import fs from 'fs';
import os from 'os';
import path from 'path';
import nj from 'numjs';
import { makeEnv } from '../src';

const STEPS = 1000;
const TOLERANCE = 1e-12;

interface ResetEntry {
  kind: 'reset';
  observation: number[];
}

interface StepEntry {
  kind: 'step';
  reward: number;
  terminated: boolean;
  truncated: boolean;
  observation: number[];
}

type Entry = ResetEntry | StepEntry;

/** Random rollout through the binding, resetting lazily like the replay. */
function rolloutThroughBinding(challenge: string): {
  actions: number[][];
  transcript: Entry[];
} {
  const env = makeEnv(challenge, { seed: 0 });
  const actions: number[][] = [];
  const transcript: Entry[] = [];
  try {
    let done = true;
    for (let i = 0; i < STEPS; i++) {
      if (done) {
        transcript.push({
          kind: 'reset',
          observation: env.reset().tolist() as number[],
        });
        done = false;
      }
      const action = env.actionSpace.sample().flatten().tolist() as number[];
      actions.push(action);
      const result = env.step(nj.array(action));
      transcript.push({
        kind: 'step',
        reward: result.reward,
        terminated: result.info.terminated,
        truncated: result.info.truncated,
        observation: result.observation.tolist() as number[],
      });
      done = result.done;
    }
  } finally {
    env.close();
  }
  return { actions, transcript };
}

/** Replay the same action log natively and parse the trace file. */
function replayNatively(challenge: string, actions: number[][], dir: string): Entry[] {
  const actionsPath = path.join(dir, 'actions.txt');
  const tracePath = path.join(dir, 'trace.txt');
  // String(x) is the shortest round-trip form; the engine parses it back
  // to the identical double
  fs.writeFileSync(
    actionsPath,
    actions.map((a) => a.map(String).join(' ')).join('\n') + '\n'
  );
  execFileSync(
    process.env.QCD_COMMAND ?? 'qcd',
    ['run', '--challenge', challenge, '--agent', 'random', '--seeds', '0',
     '--actions', actionsPath, '--trace', tracePath,
     '--out', path.join(dir, 'out')],
    { stdio: ['ignore', 'pipe', 'pipe'] }
  );
  return fs
    .readFileSync(tracePath, 'utf8')
    .split('\n')
    .filter((line) => line.length > 0)
    .map((line) => {
      const parts = line.split(' ');
      if (parts[0] === 'reset') {
        return { kind: 'reset', observation: parts.slice(1).map(Number) };
      }
      return {
        kind: 'step',
        reward: Number(parts[1]),
        terminated: parts[2] === '1',
        truncated: parts[3] === '1',
        observation: parts.slice(4).map(Number),
      };
    });
}

function maxGap(a: number[], b: number[]): number {
  expect(b.length).to.equal(a.length);
  let worst = 0;
  for (let i = 0; i < a.length; i++) {
    worst = Math.max(worst, Math.abs(a[i] - b[i]));
  }
  return worst;
}

function checkParity(challenge: string): void {
  const tmp = fs.mkdtempSync(path.join(os.tmpdir(), 'qcd-parity-'));
  try {
    const { actions, transcript } = rolloutThroughBinding(challenge);
    const native = replayNatively(challenge, actions, tmp);
    expect(native.length).to.equal(transcript.length);
    let worst = 0;
    for (let i = 0; i < transcript.length; i++) {
      const ours = transcript[i];
      const theirs = native[i];
      expect(theirs.kind).to.equal(ours.kind);
      if (ours.kind === 'step' && theirs.kind === 'step') {
        expect(theirs.terminated).to.equal(ours.terminated);
        expect(theirs.truncated).to.equal(ours.truncated);
        worst = Math.max(worst, Math.abs(theirs.reward - ours.reward));
      }
      worst = Math.max(worst, maxGap(ours.observation, theirs.observation));
    }
    expect(worst).to.be.at.most(TOLERANCE);
  } finally {
    fs.rmSync(tmp, { recursive: true, force: true });
  }
}

describe('binding parity with the native engine', function () {
  this.timeout(120000);

  it(`SP-bell: ${STEPS} random steps match a native replay`, () => {
    checkParity('SP-bell');
  });

  it(`UC-toffoli: ${STEPS} random steps match a native replay`, () => {
    checkParity('UC-toffoli');
  });
});
