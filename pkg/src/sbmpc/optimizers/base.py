"""Optimizer interface: sample control knots around a nominal, then update it."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class OptimizerConfig:
    num_rollouts: int = 32
    num_nodes: int = 4


class Optimizer:
    """Base sampler/updater over control-spline knots.

    `sample_control_knots` returns [num_rollouts, num_nodes, nu] with the
    unperturbed nominal as row 0; `update_nominal_knots` folds rewards back
    into a single knot matrix. Samples are clamped to the control bounds, so
    updates built from them stay in bounds too.
    """

    def __init__(self, config: OptimizerConfig, nu: int, control_bounds: np.ndarray | None = None):
        self.config = config
        self.nu = nu
        self.control_bounds = None if control_bounds is None else np.asarray(control_bounds, dtype=np.float64)

    @property
    def num_rollouts(self) -> int:
        return int(self.config.num_rollouts)

    @property
    def num_nodes(self) -> int:
        return int(self.config.num_nodes)

    def clamp(self, knots: np.ndarray) -> np.ndarray:
        if self.control_bounds is None:
            return knots
        return np.clip(knots, self.control_bounds[:, 0], self.control_bounds[:, 1])

    def check_nominal(self, nominal_knots: np.ndarray) -> np.ndarray:
        nominal_knots = np.asarray(nominal_knots, dtype=np.float64)
        expected = (self.num_nodes, self.nu)
        if nominal_knots.shape != expected:
            raise ValueError(f"nominal knots shape {nominal_knots.shape} != configured {expected}")
        if not np.all(np.isfinite(nominal_knots)):
            raise ValueError("nominal knots must be finite")
        return nominal_knots

    def sample_control_knots(self, nominal_knots: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        raise NotImplementedError

    def update_nominal_knots(self, sampled_knots: np.ndarray, rewards: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def reset(self) -> None:
        """Drop internal sampling state (called on task/optimizer switches)."""

    def _check_rewards(self, sampled_knots: np.ndarray, rewards: np.ndarray) -> np.ndarray:
        rewards = np.asarray(rewards, dtype=np.float64)
        if rewards.shape != (sampled_knots.shape[0],):
            raise ValueError(f"expected {sampled_knots.shape[0]} rewards, got shape {rewards.shape}")
        if np.any(np.isnan(rewards)):
            raise ValueError("rewards contain NaN")
        return rewards
