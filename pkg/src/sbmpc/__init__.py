"""Sampling-based MPC: spline plans, stochastic rollouts, and a live-tunable stack."""

from sbmpc.spline import ControlPlan, interpolate, make_plan, shift_plan

__version__ = "0.1.0"

__all__ = ["ControlPlan", "interpolate", "make_plan", "shift_plan", "__version__"]
