"""Cart-pole swing-up task.

State is q = [cart position x, pole angle y] with y = 0 upright, v = [xdot,
ydot]. The single control is a normalized cart force in [-1, 1], scaled by
FORCE_GAIN newtons. Pole is a uniform rod of half-length POLE_LENGTH hinged on
the cart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numba
import numpy as np

from sbmpc.tasks.base import Task, TaskState, quadratic_norm, smooth_l1_norm

CART_MASS = 1.0
POLE_MASS = 0.1
POLE_LENGTH = 0.5  # half-length, meters
GRAVITY = 9.81
FORCE_GAIN = 10.0  # newtons per unit control


@dataclass
class CartpoleConfig:
    w_vert: float = 10.0
    w_ctr: float = 10.0
    w_vel: float = 0.1
    w_ctrl: float = 0.1


@numba.njit(parallel=True, nogil=True, cache=True)
def _rollout_kernel(states, controls, dt, lo, hi, ok):  # pragma: no cover - compiled
    total_mass = CART_MASS + POLE_MASS
    for i in numba.prange(states.shape[0]):
        x = states[i, 0, 0]
        y = states[i, 0, 1]
        xd = states[i, 0, 2]
        yd = states[i, 0, 3]
        for t in range(controls.shape[1]):
            u = controls[i, t, 0]
            if not np.isfinite(u):
                ok[i] = False
            else:
                u = min(max(u, lo[0]), hi[0])
                force = FORCE_GAIN * u
                sin_y = np.sin(y)
                cos_y = np.cos(y)
                tmp = (force + POLE_MASS * POLE_LENGTH * yd * yd * sin_y) / total_mass
                yacc = (GRAVITY * sin_y - cos_y * tmp) / (
                    POLE_LENGTH * (4.0 / 3.0 - POLE_MASS * cos_y * cos_y / total_mass)
                )
                xacc = tmp - POLE_MASS * POLE_LENGTH * yacc * cos_y / total_mass
                xd_n = xd + dt * xacc
                yd_n = yd + dt * yacc
                x_n = x + dt * xd_n
                y_n = y + dt * yd_n
                if np.isfinite(x_n) and np.isfinite(y_n) and np.isfinite(xd_n) and np.isfinite(yd_n):
                    x, y, xd, yd = x_n, y_n, xd_n, yd_n
                else:
                    ok[i] = False
            if not ok[i]:
                for rest in range(t + 1, controls.shape[1] + 1):
                    states[i, rest, 0] = x
                    states[i, rest, 1] = y
                    states[i, rest, 2] = xd
                    states[i, rest, 3] = yd
                break
            states[i, t + 1, 0] = x
            states[i, t + 1, 1] = y
            states[i, t + 1, 2] = xd
            states[i, t + 1, 3] = yd


class Cartpole(Task):
    name = "cartpole"
    nq = 2
    nv = 2
    nu = 1
    control_bounds = np.array([[-1.0, 1.0]])
    trace_labels = ("pole_tip",)

    def __init__(self, config_cls=CartpoleConfig):
        self.config_cls = config_cls

    def rollout(self, x0, controls, dt):
        x0 = np.ascontiguousarray(x0, dtype=np.float64)
        controls = np.ascontiguousarray(controls, dtype=np.float64)
        states = np.empty((controls.shape[0], controls.shape[1] + 1, self.nx))
        states[:, 0] = x0
        ok = np.ones(controls.shape[0], dtype=np.bool_)
        _rollout_kernel(states, controls, dt, self.control_bounds[:, 0], self.control_bounds[:, 1], ok)
        return states, ok

    def reward(self, states, controls, config: CartpoleConfig):
        self._check_reward_shapes(states, controls)
        x = states[..., 0]
        y = states[..., 1]
        vel = states[..., 2:]
        vertical_rew = -config.w_vert * smooth_l1_norm(np.cos(y) - 1.0, 0.01).sum(-1)
        centered_rew = -config.w_ctr * smooth_l1_norm(x, 0.1).sum(-1)
        velocity_rew = -config.w_vel * quadratic_norm(vel).sum(-1).sum(-1)
        control_rew = -config.w_ctrl * quadratic_norm(controls).sum(-1).sum(-1)
        return vertical_rew + centered_rew + velocity_rew + control_rew

    def reset(self, rng: np.random.Generator) -> TaskState:
        q = np.array([1.0, np.pi]) + rng.standard_normal(2)
        v = 0.1 * rng.standard_normal(2)
        return TaskState(t=0.0, q=q, v=v)

    def trace_paths(self, states):
        x = states[..., 0]
        y = states[..., 1]
        paths = np.zeros(states.shape[:-1] + (1, 3))
        paths[..., 0, 0] = x + POLE_LENGTH * np.sin(y)
        paths[..., 0, 2] = POLE_LENGTH * np.cos(y)
        return np.moveaxis(paths, -2, 1)

    def energy(self, state: TaskState) -> float:
        """Total mechanical energy; useful as an integration-accuracy oracle."""
        x_dot, y_dot = state.v
        y = state.q[1]
        kinetic = (
            0.5 * (CART_MASS + POLE_MASS) * x_dot**2
            + POLE_MASS * POLE_LENGTH * x_dot * y_dot * np.cos(y)
            + (2.0 / 3.0) * POLE_MASS * POLE_LENGTH**2 * y_dot**2
        )
        potential = POLE_MASS * GRAVITY * POLE_LENGTH * np.cos(y)
        return float(kinetic + potential)
