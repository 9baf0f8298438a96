import { expect } from 'chai';
import nj from 'numjs';
import { EngineError, makeEnv } from '../src';

describe('environment binding contract', () => {
  it('declares spaces from the engine geometry', () => {
    const env = makeEnv('SP-bell', { seed: 0 });
    try {
      expect(env.observationSpace.shape).to.eql([8]);
      expect(env.actionSpace.shape).to.eql([4]);
      expect(env.numQubits).to.equal(2);
      expect(env.maxEpisodeSteps).to.equal(12);
    } finally {
      env.close();
    }
  });

  it('sizes the observation box as 2 * 2^eta', () => {
    const env = makeEnv('UC-toffoli', { seed: 0 });
    try {
      expect(env.observationSpace.shape).to.eql([16]);
      expect(env.reset().shape).to.eql([16]);
    } finally {
      env.close();
    }
  });

  it('surfaces engine parse errors with their message', () => {
    expect(() => makeEnv('bogus', { seed: 0 })).to.throw(
      EngineError,
      /ParseError: 'bogus': expected '<family>-<name>'/
    );
  });

  it('rewards a first-step stop with the empty-circuit value', () => {
    const env = makeEnv('SP-bell', { seed: 0 });
    try {
      env.reset();
      // op bin 3 of 4 is the stop action; remaining slots are ignored
      const stop = nj.array([0.9, 0.0, 0.0, 0.0]);
      const result = env.step(stop);
      expect(result.reward).to.be.closeTo(0.5, 1e-12);
      expect(result.done).to.equal(true);
      expect(result.info.terminated).to.equal(true);
      expect(result.info.truncated).to.equal(false);
    } finally {
      env.close();
    }
  });

  it('truncates at the step budget when never terminating', () => {
    const env = makeEnv('SP-bell', { seed: 0 });
    try {
      env.reset();
      // op bin 2 of 4 is the X family: a gate each step, never stopping
      const gate = nj.array([0.3, -0.9, -0.9, 0.5]);
      for (let t = 1; t < env.maxEpisodeSteps; t++) {
        const mid = env.step(gate);
        expect(mid.done).to.equal(false);
      }
      const last = env.step(gate);
      expect(last.done).to.equal(true);
      expect(last.info.truncated).to.equal(true);
      expect(last.info.terminated).to.equal(false);
      expect(last.info.step).to.equal(env.maxEpisodeSteps);
    } finally {
      env.close();
    }
  });

  it('rejects stepping a finished episode', () => {
    const env = makeEnv('SP-bell', { seed: 0 });
    try {
      env.reset();
      env.step(nj.array([0.9, 0.0, 0.0, 0.0]));
      expect(() => env.step(nj.array([0.9, 0.0, 0.0, 0.0]))).to.throw(
        EngineError,
        /InvalidStateError/
      );
    } finally {
      env.close();
    }
  });

  it('reproduces measurement outcomes for equal reset seeds', () => {
    const env = makeEnv('SP-bell', { seed: 5 });
    try {
      // superpose qubit 0, then measure it: the collapse direction is
      // drawn from the episode stream, which reset(seed) pins down
      const superpose = nj.array([0.3, -0.5, -0.5, 0.5]);
      const measure = nj.array([-0.9, -0.5, -0.5, 0.0]);
      const outcomes: unknown[] = [];
      for (let round = 0; round < 2; round++) {
        env.seed(11);
        env.reset();
        env.step(superpose);
        outcomes.push(env.step(measure).observation.tolist());
      }
      expect(outcomes[1]).to.eql(outcomes[0]);
    } finally {
      env.close();
    }
  });
});
