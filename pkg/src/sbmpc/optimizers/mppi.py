"""MPPI: exponentially reward-weighted average of the sampled knots."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbmpc.optimizers.base import Optimizer, OptimizerConfig


@dataclass
class MPPIConfig(OptimizerConfig):
    sigma: float = 0.1
    temperature: float = 0.1


class MPPI(Optimizer):
    def sample_control_knots(self, nominal_knots, rng):
        nominal_knots = self.check_nominal(nominal_knots)
        nn = self.num_nodes
        nr = self.num_rollouts
        sigma = self.config.sigma
        noised = nominal_knots + sigma * rng.standard_normal((nr - 1, nn, self.nu))
        return self.clamp(np.concatenate([nominal_knots[None], noised]))

    def update_nominal_knots(self, sampled_knots, rewards):
        rewards = self._check_rewards(sampled_knots, rewards)
        if self.config.temperature <= 0:
            raise ValueError(f"temperature must be positive, got {self.config.temperature}")
        best = np.max(rewards)
        if best == -np.inf:
            raise ValueError("all rollouts failed; softmax weights are undefined")
        # Subtracting the max bounds the exponent and makes the weights
        # invariant to a constant reward offset; failed (-inf) rollouts get
        # exactly zero weight.
        logits = (rewards - best) / float(self.config.temperature)
        weights = np.exp(logits)
        weights /= weights.sum()
        return np.einsum("i,inu->nu", weights, sampled_knots)
