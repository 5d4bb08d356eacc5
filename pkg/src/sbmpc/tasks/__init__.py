from sbmpc.tasks.base import Task, TaskState, quadratic_norm, smooth_l1_norm
from sbmpc.tasks.cartpole import Cartpole, CartpoleConfig
from sbmpc.tasks.cylinder_push import CylinderPush, CylinderPushConfig
from sbmpc.tasks.double_integrator import DoubleIntegrator, DoubleIntegratorConfig

__all__ = [
    "Task",
    "TaskState",
    "smooth_l1_norm",
    "quadratic_norm",
    "Cartpole",
    "CartpoleConfig",
    "CylinderPush",
    "CylinderPushConfig",
    "DoubleIntegrator",
    "DoubleIntegratorConfig",
]
