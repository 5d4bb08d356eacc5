from sbmpc.optimizers.base import Optimizer, OptimizerConfig
from sbmpc.optimizers.cem import CEM, CEMConfig
from sbmpc.optimizers.mppi import MPPI, MPPIConfig
from sbmpc.optimizers.predictive_sampling import PredictiveSampling, PredictiveSamplingConfig

__all__ = [
    "Optimizer",
    "OptimizerConfig",
    "PredictiveSampling",
    "PredictiveSamplingConfig",
    "CEM",
    "CEMConfig",
    "MPPI",
    "MPPIConfig",
]
