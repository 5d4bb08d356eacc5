"""Task interface: analytic dynamics, batched rewards, and resets.

A task owns its dimensions, control bounds, and trace points. Dynamics follow
semi-implicit Euler (v' = v + dt*a, q' = q + dt*v'), with controls clamped to
the bounds before integration. Built-in tasks override `rollout` with a
compiled kernel; the base class provides a plain Python fallback so custom
tasks only need `step_array`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class TaskState:
    """Simulation time plus generalized positions and velocities."""

    t: float
    q: np.ndarray
    v: np.ndarray

    def as_array(self) -> np.ndarray:
        return np.concatenate([np.asarray(self.q, dtype=np.float64), np.asarray(self.v, dtype=np.float64)])

    @staticmethod
    def from_array(t: float, x: np.ndarray, nq: int) -> "TaskState":
        x = np.asarray(x, dtype=np.float64)
        return TaskState(t=float(t), q=x[:nq].copy(), v=x[nq:].copy())


def smooth_l1_norm(x: np.ndarray, delta: float) -> np.ndarray:
    """Elementwise sqrt(x^2 + delta^2) - delta: zero at the origin, slope 1 in the tails."""
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return np.sqrt(np.square(x) + delta * delta) - delta


def quadratic_norm(x: np.ndarray) -> np.ndarray:
    """Elementwise 0.5 * x^2."""
    x = np.asarray(x)
    return 0.5 * np.square(x)


class Task:
    """Base dynamics/reward/reset interface.

    Subclasses set `name`, `nq`, `nv`, `nu`, `control_bounds` ([nu, 2] lo/hi)
    and `trace_labels`, and implement `reward`, `reset`, and either
    `step_array` (pure Python) or `rollout` (vectorized/compiled).
    """

    name: str = "task"
    nq: int = 0
    nv: int = 0
    nu: int = 0
    control_bounds: np.ndarray = np.zeros((0, 2))
    trace_labels: tuple = ()
    config_cls: type = None

    @property
    def nx(self) -> int:
        return self.nq + self.nv

    @property
    def num_trace_points(self) -> int:
        return len(self.trace_labels)

    def clamp_controls(self, u: np.ndarray) -> np.ndarray:
        lo = self.control_bounds[:, 0]
        hi = self.control_bounds[:, 1]
        return np.clip(u, lo, hi)

    def step(self, state: TaskState, u: np.ndarray, dt: float) -> TaskState:
        """Advance one semi-implicit Euler step; raises on non-finite input or blow-up."""
        if dt <= 0:
            raise ValueError(f"dt must be positive, got {dt}")
        x = state.as_array()
        u = np.asarray(u, dtype=np.float64).reshape(self.nu)
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(u))):
            raise ValueError(f"{self.name}: non-finite state or control")
        states, ok = self.rollout(x[None, :], u[None, None, :], dt)
        if not ok[0]:
            raise ValueError(f"{self.name}: dynamics produced a non-finite state")
        return TaskState.from_array(state.t + dt, states[0, 1], self.nq)

    def step_array(self, x: np.ndarray, u: np.ndarray, dt: float) -> np.ndarray:
        """Single-state step on raw arrays; only needed when `rollout` is not overridden."""
        raise NotImplementedError

    def rollout(self, x0: np.ndarray, controls: np.ndarray, dt: float) -> tuple[np.ndarray, np.ndarray]:
        """Roll each batch row forward: x0 [B, nx], controls [B, T, nu] -> (states [B, T+1, nx], ok [B]).

        Rows that hit a non-finite state stop stepping, hold their last valid
        state, and are flagged not-ok. Controls are clamped per step.
        """
        x0 = np.asarray(x0, dtype=np.float64)
        controls = np.asarray(controls, dtype=np.float64)
        b, horizon_steps = controls.shape[0], controls.shape[1]
        states = np.zeros((b, horizon_steps + 1, self.nx))
        ok = np.ones(b, dtype=np.bool_)
        states[:, 0] = x0
        lo = self.control_bounds[:, 0]
        hi = self.control_bounds[:, 1]
        for i in range(b):
            x = x0[i]
            for t in range(horizon_steps):
                u = controls[i, t]
                if not np.all(np.isfinite(u)):
                    ok[i] = False
                    states[i, t + 1 :] = x
                    break
                x_next = self.step_array(x, np.clip(u, lo, hi), dt)
                if not np.all(np.isfinite(x_next)):
                    ok[i] = False
                    states[i, t + 1 :] = x
                    break
                states[i, t + 1] = x_next
                x = x_next
        return states, ok

    def reward(self, states: np.ndarray, controls: np.ndarray, config) -> np.ndarray:
        """Batched trajectory reward: states [..., T+1, nx], controls [..., T, nu] -> [...]."""
        raise NotImplementedError

    def reset(self, rng: np.random.Generator) -> TaskState:
        raise NotImplementedError

    def trace_points(self, state: TaskState) -> list[tuple[str, np.ndarray]]:
        """Labeled 3D points visualized as rollout traces; constant count per task."""
        paths = self.trace_paths(state.as_array()[None, None, :])
        return [(label, paths[0, p, 0]) for p, label in enumerate(self.trace_labels)]

    def trace_paths(self, states: np.ndarray) -> np.ndarray:
        """Trace-point paths for a state batch [B, T+1, nx] -> [B, P, T+1, 3]."""
        raise NotImplementedError

    def _check_reward_shapes(self, states: np.ndarray, controls: np.ndarray) -> None:
        if states.shape[-1] != self.nx:
            raise ValueError(f"{self.name}: states last axis {states.shape[-1]} != nx {self.nx}")
        if controls.shape[-1] != self.nu:
            raise ValueError(f"{self.name}: controls last axis {controls.shape[-1]} != nu {self.nu}")
        if states.shape[:-2] != controls.shape[:-2]:
            raise ValueError(f"{self.name}: batch shapes differ: {states.shape} vs {controls.shape}")
