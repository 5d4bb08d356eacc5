"""Parallel evaluation of sampled knot plans from a shared initial state.

Rollouts are partitioned over the compiled kernels' thread pool (numba's
parallel runtime); every rollout's arithmetic is independent of the thread
count, so results are bit-identical for any `workers` value. Rewards are then
computed on the assembled batch in one vectorized call.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numba
import numpy as np

from sbmpc.spline import interpolation_weights
from sbmpc.tasks.base import Task, TaskState

_MAX_THREADS = numba.config.NUMBA_NUM_THREADS
_thread_lock = threading.Lock()


@dataclass
class TraceEntry:
    """One visualized polyline with the reward of the rollout it came from."""

    points: np.ndarray  # [T+1, 3]
    reward: float
    nominal: bool
    label: str = ""


@dataclass
class RolloutBatch:
    """Sampled knots, their trajectories, rewards, and trace polylines."""

    knots: np.ndarray  # [N, num_nodes, nu]
    knot_times: np.ndarray  # [num_nodes]
    kind: str
    states: np.ndarray  # [N, T+1, nq+nv]
    rewards: np.ndarray  # [N]
    ok: np.ndarray  # [N] bool
    traces: np.ndarray  # [N, P, T+1, 3]
    dt: float

    @property
    def num_rollouts(self) -> int:
        return self.knots.shape[0]


def evaluate_batch(
    task: Task,
    x0: TaskState,
    sampled_knots: np.ndarray,
    controller_cfg,
    workers: int = 1,
    task_config=None,
    t_anchor: float | None = None,
) -> RolloutBatch:
    """Roll out every sampled knot plan from x0 and score it.

    Each sample becomes a control plan on a uniform grid over
    [x0.t, x0.t + horizon] (or anchored at t_anchor <= x0.t when the caller
    keeps its grid on an absolute lattice); controls are interpolated at each
    step's start time. Rollouts that blow up get reward -inf; if all fail,
    raises.
    """
    horizon = float(controller_cfg.horizon)
    dt = float(controller_cfg.dt_rollout)
    kind = controller_cfg.spline_kind
    sampled_knots = np.asarray(sampled_knots, dtype=np.float64)
    if sampled_knots.ndim != 3:
        raise ValueError(f"sampled knots must be [N, num_nodes, nu], got {sampled_knots.shape}")
    num_steps = int(round(horizon / dt))
    if num_steps < 1:
        raise ValueError(f"horizon {horizon} too short for rollout step {dt}")
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")

    t_grid = x0.t if t_anchor is None else float(t_anchor)
    knot_times = np.linspace(t_grid, t_grid + horizon, sampled_knots.shape[1])
    step_times = x0.t + dt * np.arange(num_steps)
    weights = interpolation_weights(knot_times, step_times, kind)
    controls = np.matmul(weights, sampled_knots)  # [N, T, nu]
    controls = task.clamp_controls(controls)

    x0_array = x0.as_array()
    x0_batch = np.broadcast_to(x0_array, (sampled_knots.shape[0], x0_array.shape[0]))
    with _thread_lock:
        # numba's thread count is global process state; serialize rollouts so
        # concurrent callers cannot observe each other's setting.
        numba.set_num_threads(min(workers, _MAX_THREADS))
        try:
            states, ok = task.rollout(x0_batch, controls, dt)
        finally:
            numba.set_num_threads(_MAX_THREADS)

    if task_config is None:
        task_config = task.config_cls()
    with np.errstate(all="ignore"):
        rewards = np.asarray(task.reward(states, controls, task_config), dtype=np.float64)
    rewards = np.where(ok, rewards, -np.inf)
    if not np.any(np.isfinite(rewards)):
        raise RuntimeError(f"{task.name}: every rollout failed or scored non-finite reward")

    traces = task.trace_paths(states)
    return RolloutBatch(
        knots=sampled_knots,
        knot_times=knot_times,
        kind=kind,
        states=states,
        rewards=rewards,
        ok=ok,
        traces=traces,
        dt=dt,
    )


def top_traces(batch: RolloutBatch, k: int, labels=()) -> list[TraceEntry]:
    """Nominal rollout's traces first, then the k best non-nominal rollouts."""
    if k < 0:
        raise ValueError(f"k must be non-negative, got {k}")
    k = min(k, batch.num_rollouts - 1)
    order = 1 + np.argsort(-batch.rewards[1:], kind="stable")[:k]
    entries = []
    for rank, idx in enumerate([0, *order.tolist()]):
        for p in range(batch.traces.shape[1]):
            label = labels[p] if p < len(labels) else f"trace{p}"
            entries.append(
                TraceEntry(
                    points=batch.traces[idx, p],
                    reward=float(batch.rewards[idx]),
                    nominal=(rank == 0),
                    label=label,
                )
            )
    return entries
