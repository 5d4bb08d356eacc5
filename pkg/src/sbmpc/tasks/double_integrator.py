"""Scalar double integrator: acceleration equals the (clamped) control."""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from sbmpc.tasks.base import Task, TaskState, quadratic_norm, smooth_l1_norm


@dataclass
class DoubleIntegratorConfig:
    w_pos: float = 1.0
    w_vel: float = 0.1
    w_ctrl: float = 0.1


@numba.njit(parallel=True, nogil=True, cache=True)
def _rollout_kernel(states, controls, dt, lo, hi, ok):  # pragma: no cover - compiled
    for i in numba.prange(states.shape[0]):
        q = states[i, 0, 0]
        v = states[i, 0, 1]
        for t in range(controls.shape[1]):
            u = controls[i, t, 0]
            if not np.isfinite(u):
                ok[i] = False
            else:
                u = min(max(u, lo[0]), hi[0])
                v_n = v + dt * u
                q_n = q + dt * v_n
                if np.isfinite(q_n) and np.isfinite(v_n):
                    q, v = q_n, v_n
                else:
                    ok[i] = False
            if not ok[i]:
                for rest in range(t + 1, controls.shape[1] + 1):
                    states[i, rest, 0] = q
                    states[i, rest, 1] = v
                break
            states[i, t + 1, 0] = q
            states[i, t + 1, 1] = v


class DoubleIntegrator(Task):
    name = "double_integrator"
    nq = 1
    nv = 1
    nu = 1
    control_bounds = np.array([[-1.0, 1.0]])
    trace_labels = ("point",)

    def __init__(self, config_cls=DoubleIntegratorConfig):
        self.config_cls = config_cls

    def rollout(self, x0, controls, dt):
        x0 = np.ascontiguousarray(x0, dtype=np.float64)
        controls = np.ascontiguousarray(controls, dtype=np.float64)
        states = np.empty((controls.shape[0], controls.shape[1] + 1, self.nx))
        states[:, 0] = x0
        ok = np.ones(controls.shape[0], dtype=np.bool_)
        _rollout_kernel(states, controls, dt, self.control_bounds[:, 0], self.control_bounds[:, 1], ok)
        return states, ok

    def reward(self, states, controls, config: DoubleIntegratorConfig):
        self._check_reward_shapes(states, controls)
        q = states[..., 0]
        v = states[..., 1]
        pos_rew = -config.w_pos * smooth_l1_norm(q, 0.1).sum(-1)
        vel_rew = -config.w_vel * quadratic_norm(v).sum(-1)
        ctrl_rew = -config.w_ctrl * quadratic_norm(controls).sum(-1).sum(-1)
        return pos_rew + vel_rew + ctrl_rew

    def reset(self, rng: np.random.Generator) -> TaskState:
        return TaskState(t=0.0, q=rng.standard_normal(1), v=np.zeros(1))

    def trace_paths(self, states):
        paths = np.zeros(states.shape[:-1] + (1, 3))
        paths[..., 0, 0] = states[..., 0]
        return np.moveaxis(paths, -2, 1)
