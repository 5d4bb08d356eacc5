"""Custom task/optimizer fixtures used by registry and YAML tests."""

from dataclasses import dataclass
from typing import Literal

import numpy as np

from sbmpc.optimizers.base import Optimizer, OptimizerConfig
from sbmpc.schema import array_field, slider
from sbmpc.tasks.base import Task, TaskState, quadratic_norm


@dataclass
class MyTaskCfg:
    w_pos: float = 1.0


class MyTask(Task):
    """1-D point mass with velocity control; small enough to need no kernel."""

    name = "my_task"
    nq = 1
    nv = 1
    nu = 1
    control_bounds = np.array([[-2.0, 2.0]])
    trace_labels = ("point",)
    config_cls = MyTaskCfg

    def step_array(self, x, u, dt):
        v = u[0]
        return np.array([x[0] + dt * v, v])

    def reward(self, states, controls, config):
        return -config.w_pos * quadratic_norm(states[..., 0]).sum(-1)

    def reset(self, rng):
        return TaskState(t=0.0, q=np.zeros(1), v=np.zeros(1))

    def trace_paths(self, states):
        paths = np.zeros(states.shape[:-1] + (1, 3))
        paths[..., 0, 0] = states[..., 0]
        return np.moveaxis(paths, -2, 1)


@dataclass
class MyOptCfg(OptimizerConfig):
    param: int = 7
    sigma: float = 0.1


class MyOpt(Optimizer):
    def sample_control_knots(self, nominal_knots, rng):
        noised = nominal_knots + self.config.sigma * rng.standard_normal(
            (self.num_rollouts - 1, self.num_nodes, self.nu)
        )
        return self.clamp(np.concatenate([nominal_knots[None], noised]))

    def update_nominal_knots(self, sampled_knots, rewards):
        rewards = self._check_rewards(sampled_knots, rewards)
        return sampled_knots[int(np.argmax(rewards))].copy()


@slider("num2", 0.0, 10.0, 0.1)
@dataclass
class DummyOptimizerConfig(OptimizerConfig):
    num1: int = 42  # default slider
    num2: float = 3.14  # custom slider
    num3: float = 2.71  # default slider
    checkbox: bool = True
    options: Literal["opt1", "opt2"] = "opt1"
    arr: np.ndarray = array_field(
        [1.0, 2.0],
        names=["field1", "field2"],
        mins=[0.0, 1.0],
        maxs=[10.0, 20.0],
        steps=[0.1, 0.2],
    )
