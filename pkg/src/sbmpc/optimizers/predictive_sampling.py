"""Predictive sampling: Gaussian perturbations of the nominal, keep the argmax."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbmpc.optimizers.base import Optimizer, OptimizerConfig


@dataclass
class PredictiveSamplingConfig(OptimizerConfig):
    sigma: float = 0.05


class PredictiveSampling(Optimizer):
    def sample_control_knots(self, nominal_knots, rng):
        nominal_knots = self.check_nominal(nominal_knots)
        nn = self.num_nodes
        nr = self.num_rollouts
        sigma = self.config.sigma
        noised = nominal_knots + sigma * rng.standard_normal((nr - 1, nn, self.nu))
        return self.clamp(np.concatenate([nominal_knots[None], noised]))

    def update_nominal_knots(self, sampled_knots, rewards):
        rewards = self._check_rewards(sampled_knots, rewards)
        i_best = int(np.argmax(rewards))
        return sampled_knots[i_best].copy()
