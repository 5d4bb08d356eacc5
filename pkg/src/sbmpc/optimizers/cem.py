"""Cross-entropy method: refit a per-knot Gaussian to the elite samples."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from sbmpc.optimizers.base import Optimizer, OptimizerConfig


@dataclass
class CEMConfig(OptimizerConfig):
    sigma_init: float = 0.3
    sigma_min: float = 0.05
    num_elites: int = 4


class CEM(Optimizer):
    """Keeps a per-knot, per-dimension standard deviation as internal state."""

    def __init__(self, config: CEMConfig, nu: int, control_bounds=None):
        super().__init__(config, nu, control_bounds)
        self._std = None

    def reset(self):
        self._std = None

    def _current_std(self) -> np.ndarray:
        shape = (self.num_nodes, self.nu)
        if self._std is None or self._std.shape != shape:
            self._std = np.full(shape, float(self.config.sigma_init))
        return self._std

    def sample_control_knots(self, nominal_knots, rng):
        if not 1 <= self.config.num_elites < self.num_rollouts:
            raise ValueError(
                f"num_elites must be in [1, num_rollouts), got {self.config.num_elites} of {self.num_rollouts}"
            )
        nominal_knots = self.check_nominal(nominal_knots)
        std = self._current_std()
        noised = nominal_knots + std * rng.standard_normal((self.num_rollouts - 1, self.num_nodes, self.nu))
        return self.clamp(np.concatenate([nominal_knots[None], noised]))

    def update_nominal_knots(self, sampled_knots, rewards):
        rewards = self._check_rewards(sampled_knots, rewards)
        usable = np.flatnonzero(rewards > -np.inf)
        if usable.size == 0:
            raise ValueError("all rollouts failed; no elites to average")
        order = usable[np.argsort(-rewards[usable], kind="stable")]
        elites = sampled_knots[order[: min(self.config.num_elites, order.size)]]
        mean = elites.mean(axis=0)
        self._std = np.maximum(elites.std(axis=0), float(self.config.sigma_min))
        return mean
