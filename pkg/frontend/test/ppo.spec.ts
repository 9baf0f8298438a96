import { expect } from 'chai';
import * as RL from 'rl-ts';
import { QcdEnv, makeEnv } from '../src';

const TOTAL_STEPS = 50000;
const STEPS_PER_EPOCH = 2500;

describe('ecosystem PPO on the registered SP-bell environment', function () {
  this.timeout(3600000);

  it(`trains for ${TOTAL_STEPS} steps and reports a finite mean return`, async () => {
    const created: QcdEnv[] = [];
    const factory = () => {
      const env = makeEnv('SP-bell', { seed: 0 });
      created.push(env);
      return env;
    };
    try {
      const probe = factory();
      const ac = new RL.Models.MLPActorCritic(
        probe.observationSpace,
        probe.actionSpace,
        [32, 32],
        'tanh'
      );
      const ppo = new RL.Algos.PPO(factory, ac, {
        actionToTensor: (action) => action.squeeze(),
      });
      const epochMeans: number[] = [];
      await ppo.train({
        steps_per_epoch: STEPS_PER_EPOCH,
        epochs: TOTAL_STEPS / STEPS_PER_EPOCH,
        max_ep_len: probe.maxEpisodeSteps,
        // the pure-JS tensor backend makes value-function fits the
        // dominant cost; 20 iterations per epoch keeps the run tractable
        train_v_iters: 20,
        verbosity: 'warn',
        epochCallback({ epoch, ep_rets }) {
          epochMeans.push(ep_rets.mean);
          console.log(
            `      epoch ${epoch}: mean episode return ${ep_rets.mean.toFixed(4)}`
          );
        },
      });
      expect(epochMeans.length).to.equal(TOTAL_STEPS / STEPS_PER_EPOCH);
      for (const mean of epochMeans) {
        expect(Number.isFinite(mean)).to.equal(true);
      }
      const final = epochMeans[epochMeans.length - 1];
      console.log(`      final mean episode return: ${final.toFixed(4)}`);
      expect(Number.isFinite(final)).to.equal(true);
    } finally {
      for (const env of created) {
        env.close();
      }
    }
  });
});
