"""Receding-horizon planner: shift, sample, roll out, update, publish.

The nominal plan is an immutable snapshot replaced atomically at the end of
each update, so `action` can be called from any thread at any time and always
sees a complete plan.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Literal

import numpy as np

from sbmpc import spline
from sbmpc.optimizers.base import Optimizer
from sbmpc.rollout import RolloutBatch, evaluate_batch
from sbmpc.tasks.base import Task, TaskState


@dataclass
class ControllerConfig:
    horizon: float = 0.75
    spline_kind: Literal["zoh", "linear", "cubic"] = "zoh"
    max_num_traces: int = 3
    dt_rollout: float = 0.02


class Controller:
    """Runs the sampling loop against one task/optimizer pair."""

    def __init__(
        self,
        task: Task,
        optimizer: Optimizer,
        config: ControllerConfig | None = None,
        task_config=None,
        workers: int = 1,
    ):
        self.task = task
        self.optimizer = optimizer
        self.config = config if config is not None else ControllerConfig()
        self.task_config = task_config if task_config is not None else task.config_cls()
        self.workers = workers
        self.iteration = 0
        self.last_update_ms = 0.0
        self._plan = spline.zero_plan(
            optimizer.num_nodes, task.nu, 0.0, self.config.horizon, self.config.spline_kind
        )

    @property
    def plan(self) -> spline.ControlPlan:
        return self._plan

    def action(self, t: float) -> np.ndarray:
        """Interpolate the installed nominal plan at time t, clamped to bounds."""
        plan = self._plan  # snapshot; atomic swap means old or new, never a mix
        return self.task.clamp_controls(spline.interpolate(plan, t))

    def update(self, x0: TaskState, rng: np.random.Generator) -> RolloutBatch:
        """One planning iteration from state x0; installs and returns the new plan's batch."""
        start = time.perf_counter()
        cfg = self.config
        plan = self._plan
        if x0.t < plan.t_start or plan.nu != self.task.nu:
            # Time went backwards (sim reset) or the task changed shape.
            plan = spline.zero_plan(
                self.optimizer.num_nodes, self.task.nu, x0.t, cfg.horizon, cfg.spline_kind
            )
        # Keep the knot grid phase-locked to an absolute lattice: the grid only
        # advances when the current time crosses a knot, so plan content is
        # consumed knot-by-knot instead of sliding along with every replan.
        # (A grid re-anchored at x0.t every update never executes the tail of a
        # zero-order-hold plan: sub-knot shifts resample to identical knots and
        # deferred maneuvers stay deferred forever.)
        spacing = (plan.t_end - plan.t_start) / (plan.num_nodes - 1)
        t_anchor = plan.t_start + spacing * np.floor((x0.t - plan.t_start) / spacing)
        base = spline.resample_plan(
            plan, t_anchor, cfg.horizon, num_nodes=self.optimizer.num_nodes, kind=cfg.spline_kind
        )
        samples = self.optimizer.sample_control_knots(base.knots, rng)
        batch = evaluate_batch(
            self.task,
            x0,
            samples,
            cfg,
            workers=self.workers,
            task_config=self.task_config,
            t_anchor=t_anchor,
        )
        new_knots = self.optimizer.update_nominal_knots(samples, batch.rewards)
        self._plan = spline.ControlPlan(
            knots=new_knots, knot_times=base.knot_times, kind=cfg.spline_kind
        )
        self.iteration += 1
        self.last_update_ms = (time.perf_counter() - start) * 1e3
        return batch

    def reset_plan(self, t_start: float = 0.0) -> None:
        self._plan = spline.zero_plan(
            self.optimizer.num_nodes, self.task.nu, t_start, self.config.horizon, self.config.spline_kind
        )
        self.optimizer.reset()
