"""Planar pushing task: an actuated disk shoves a free disk toward a goal.

Both disks are double integrators; the control is a planar force on the
pusher. Disk-disk contact is resolved with an inelastic normal impulse plus a
positional projection split evenly between the equal-mass bodies, so the disks
never interpenetrate at the end of a step.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numba
import numpy as np

from sbmpc.schema import array_field
from sbmpc.tasks.base import Task, TaskState, quadratic_norm, smooth_l1_norm

PUSHER_RADIUS = 0.15
TARGET_RADIUS = 0.2
CONTACT_DIST = PUSHER_RADIUS + TARGET_RADIUS
BODY_MASS = 1.0
FORCE_GAIN = 5.0  # newtons per unit control
RESET_BOX = 1.0  # side length of the reset sampling box, meters


@dataclass
class CylinderPushConfig:
    w_pusher: float = 0.1
    w_goal: float = 10.0
    w_vel: float = 0.1
    w_ctrl: float = 0.1
    goal: np.ndarray = array_field(
        [0.0, 0.0],
        names=["goal_x", "goal_y"],
        mins=[-2.0, -2.0],
        maxs=[2.0, 2.0],
        steps=[0.05, 0.05],
    )


@numba.njit(parallel=True, nogil=True, cache=True)
def _rollout_kernel(states, controls, dt, lo, hi, ok):  # pragma: no cover - compiled
    accel = FORCE_GAIN / BODY_MASS
    for i in numba.prange(states.shape[0]):
        px = states[i, 0, 0]
        py = states[i, 0, 1]
        tx = states[i, 0, 2]
        ty = states[i, 0, 3]
        pvx = states[i, 0, 4]
        pvy = states[i, 0, 5]
        tvx = states[i, 0, 6]
        tvy = states[i, 0, 7]
        for t in range(controls.shape[1]):
            ux = controls[i, t, 0]
            uy = controls[i, t, 1]
            if not (np.isfinite(ux) and np.isfinite(uy)):
                ok[i] = False
            else:
                ux = min(max(ux, lo[0]), hi[0])
                uy = min(max(uy, lo[1]), hi[1])
                pvx += dt * accel * ux
                pvy += dt * accel * uy
                px += dt * pvx
                py += dt * pvy
                tx += dt * tvx
                ty += dt * tvy
                dx = tx - px
                dy = ty - py
                dist = np.sqrt(dx * dx + dy * dy)
                if dist < CONTACT_DIST:
                    if dist > 1e-12:
                        nx_ = dx / dist
                        ny_ = dy / dist
                    else:
                        nx_ = 1.0
                        ny_ = 0.0
                    rel = (tvx - pvx) * nx_ + (tvy - pvy) * ny_
                    if rel < 0.0:
                        # Inelastic impulse: kill approach speed, split by mass.
                        half = 0.5 * rel
                        pvx += half * nx_
                        pvy += half * ny_
                        tvx -= half * nx_
                        tvy -= half * ny_
                    push = 0.5 * (CONTACT_DIST - dist)
                    px -= push * nx_
                    py -= push * ny_
                    tx += push * nx_
                    ty += push * ny_
                if not (
                    np.isfinite(px)
                    and np.isfinite(py)
                    and np.isfinite(tx)
                    and np.isfinite(ty)
                    and np.isfinite(pvx)
                    and np.isfinite(pvy)
                    and np.isfinite(tvx)
                    and np.isfinite(tvy)
                ):
                    ok[i] = False
            if not ok[i]:
                for rest in range(t + 1, controls.shape[1] + 1):
                    for j in range(8):
                        states[i, rest, j] = states[i, t, j]
                break
            states[i, t + 1, 0] = px
            states[i, t + 1, 1] = py
            states[i, t + 1, 2] = tx
            states[i, t + 1, 3] = ty
            states[i, t + 1, 4] = pvx
            states[i, t + 1, 5] = pvy
            states[i, t + 1, 6] = tvx
            states[i, t + 1, 7] = tvy


class CylinderPush(Task):
    name = "cylinder_push"
    nq = 4
    nv = 4
    nu = 2
    control_bounds = np.array([[-1.0, 1.0], [-1.0, 1.0]])
    trace_labels = ("pusher", "target")

    def __init__(self, config_cls=CylinderPushConfig):
        self.config_cls = config_cls

    def rollout(self, x0, controls, dt):
        x0 = np.ascontiguousarray(x0, dtype=np.float64)
        controls = np.ascontiguousarray(controls, dtype=np.float64)
        states = np.empty((controls.shape[0], controls.shape[1] + 1, self.nx))
        states[:, 0] = x0
        ok = np.ones(controls.shape[0], dtype=np.bool_)
        _rollout_kernel(states, controls, dt, self.control_bounds[:, 0], self.control_bounds[:, 1], ok)
        return states, ok

    def reward(self, states, controls, config: CylinderPushConfig):
        self._check_reward_shapes(states, controls)
        pusher = states[..., 0:2]
        target = states[..., 2:4]
        vel = states[..., 4:]
        goal = np.asarray(config.goal, dtype=np.float64)
        pusher_dist = np.linalg.norm(pusher - target, axis=-1) - CONTACT_DIST
        goal_dist = np.linalg.norm(target - goal, axis=-1)
        pusher_rew = -config.w_pusher * smooth_l1_norm(pusher_dist, 0.01).sum(-1)
        goal_rew = -config.w_goal * smooth_l1_norm(goal_dist, 0.05).sum(-1)
        velocity_rew = -config.w_vel * quadratic_norm(vel).sum(-1).sum(-1)
        control_rew = -config.w_ctrl * quadratic_norm(controls).sum(-1).sum(-1)
        return pusher_rew + goal_rew + velocity_rew + control_rew

    def reset(self, rng: np.random.Generator) -> TaskState:
        pusher = np.zeros(2)
        while True:
            target = rng.uniform(-0.5 * RESET_BOX, 0.5 * RESET_BOX, size=2)
            if np.linalg.norm(target - pusher) >= CONTACT_DIST:
                break
        return TaskState(t=0.0, q=np.concatenate([pusher, target]), v=np.zeros(4))

    def trace_paths(self, states):
        paths = np.zeros(states.shape[:-1] + (2, 3))
        paths[..., 0, 0:2] = states[..., 0:2]
        paths[..., 1, 0:2] = states[..., 2:4]
        return np.moveaxis(paths, -2, 1)
