"""Control plans as splines over a knot grid, and their evaluation.

A plan is a set of knot rows (one control vector per knot time) plus an
interpolation kind. Evaluation is linear in the knots for every kind, so a
single weight-matrix routine backs scalar queries, dense resampling, and the
batched rollout path alike.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

INTERPOLATION_KINDS = ("zoh", "linear", "cubic")


@dataclass(frozen=True)
class ControlPlan:
    """Immutable control spline: knots [num_nodes, nu] over strictly increasing times."""

    knots: np.ndarray
    knot_times: np.ndarray
    kind: str = "zoh"

    def __post_init__(self):
        knots = np.asarray(self.knots, dtype=np.float64)
        times = np.asarray(self.knot_times, dtype=np.float64)
        if knots.ndim != 2 or knots.shape[1] < 1:
            raise ValueError(f"knots must be [num_nodes, nu], got shape {knots.shape}")
        if times.ndim != 1 or times.shape[0] != knots.shape[0]:
            raise ValueError("knot_times must be a vector matching the knot rows")
        if knots.shape[0] < 2:
            raise ValueError("a plan needs at least 2 knots")
        if not np.all(np.diff(times) > 0):
            raise ValueError("knot_times must be strictly increasing")
        if not (np.all(np.isfinite(knots)) and np.all(np.isfinite(times))):
            raise ValueError("knots and knot_times must be finite")
        if self.kind not in INTERPOLATION_KINDS:
            raise ValueError(f"unknown interpolation kind {self.kind!r}; expected one of {INTERPOLATION_KINDS}")
        knots.setflags(write=False)
        times.setflags(write=False)
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "knot_times", times)

    @property
    def num_nodes(self) -> int:
        return self.knots.shape[0]

    @property
    def nu(self) -> int:
        return self.knots.shape[1]

    @property
    def t_start(self) -> float:
        return float(self.knot_times[0])

    @property
    def t_end(self) -> float:
        return float(self.knot_times[-1])


def make_plan(knots: np.ndarray, t_start: float, horizon: float, kind: str = "zoh") -> ControlPlan:
    """Build a plan with knots spaced uniformly over [t_start, t_start + horizon]."""
    knots = np.asarray(knots, dtype=np.float64)
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if knots.ndim != 2 or knots.shape[0] < 2:
        raise ValueError("knots must be a [num_nodes >= 2, nu] matrix")
    times = np.linspace(t_start, t_start + horizon, knots.shape[0])
    return ControlPlan(knots=knots, knot_times=times, kind=kind)


def zero_plan(num_nodes: int, nu: int, t_start: float, horizon: float, kind: str = "zoh") -> ControlPlan:
    return make_plan(np.zeros((num_nodes, nu)), t_start, horizon, kind)


def _catmull_rom_tangent_matrix(times: np.ndarray) -> np.ndarray:
    """D with tangents = D @ knots: central differences inside, one-sided at the ends."""
    n = times.shape[0]
    d = np.zeros((n, n))
    d[0, 0] = -1.0 / (times[1] - times[0])
    d[0, 1] = 1.0 / (times[1] - times[0])
    for i in range(1, n - 1):
        span = times[i + 1] - times[i - 1]
        d[i, i - 1] = -1.0 / span
        d[i, i + 1] = 1.0 / span
    d[n - 1, n - 2] = -1.0 / (times[-1] - times[-2])
    d[n - 1, n - 1] = 1.0 / (times[-1] - times[-2])
    return d


def interpolation_weights(knot_times: np.ndarray, ts: np.ndarray, kind: str) -> np.ndarray:
    """Weight matrix W [len(ts), num_nodes] with value(t) = W @ knots.

    Query times are clamped to the knot range, so rows always sum to 1 and
    out-of-range queries reproduce the boundary knots.
    """
    times = np.asarray(knot_times, dtype=np.float64)
    ts = np.atleast_1d(np.asarray(ts, dtype=np.float64))
    n = times.shape[0]
    ts = np.clip(ts, times[0], times[-1])
    w = np.zeros((ts.shape[0], n))

    if kind == "zoh":
        idx = np.searchsorted(times, ts, side="right") - 1
        idx = np.clip(idx, 0, n - 1)
        w[np.arange(ts.shape[0]), idx] = 1.0
        return w

    seg = np.clip(np.searchsorted(times, ts, side="right") - 1, 0, n - 2)
    h = times[seg + 1] - times[seg]
    s = (ts - times[seg]) / h

    if kind == "linear":
        rows = np.arange(ts.shape[0])
        w[rows, seg] = 1.0 - s
        w[rows, seg + 1] += s
        return w

    if kind == "cubic":
        # Cubic Hermite with Catmull-Rom tangents; C1 and exact at the knots.
        d = _catmull_rom_tangent_matrix(times)
        s2 = s * s
        s3 = s2 * s
        h00 = 2 * s3 - 3 * s2 + 1
        h10 = s3 - 2 * s2 + s
        h01 = -2 * s3 + 3 * s2
        h11 = s3 - s2
        rows = np.arange(ts.shape[0])
        w[rows, seg] += h00
        w[rows, seg + 1] += h01
        w += (h10 * h)[:, None] * d[seg] + (h11 * h)[:, None] * d[seg + 1]
        return w

    raise ValueError(f"unknown interpolation kind {kind!r}")


def interpolate_many(plan: ControlPlan, ts: np.ndarray) -> np.ndarray:
    """Evaluate the plan at each time in ts; returns [len(ts), nu]."""
    w = interpolation_weights(plan.knot_times, ts, plan.kind)
    return w @ plan.knots


def interpolate(plan: ControlPlan, t: float) -> np.ndarray:
    """Evaluate the plan at time t (clamped to the knot range); returns [nu]."""
    return interpolate_many(plan, np.array([t]))[0]


def resample_plan(
    plan: ControlPlan,
    t_start: float,
    horizon: float,
    num_nodes: int | None = None,
    kind: str | None = None,
) -> ControlPlan:
    """Resample a plan onto a fresh uniform grid, evaluating the old spline at the new knots."""
    num_nodes = plan.num_nodes if num_nodes is None else num_nodes
    kind = plan.kind if kind is None else kind
    if horizon <= 0:
        raise ValueError(f"horizon must be positive, got {horizon}")
    if num_nodes < 2:
        raise ValueError("num_nodes must be at least 2")
    new_times = np.linspace(t_start, t_start + horizon, num_nodes)
    new_knots = interpolate_many(plan, new_times)
    return ControlPlan(knots=new_knots, knot_times=new_times, kind=kind)


def shift_plan(plan: ControlPlan, new_t_start: float, horizon: float) -> ControlPlan:
    """Warm-start resample: same node count and kind, grid moved to start at new_t_start."""
    if new_t_start < plan.knot_times[0]:
        raise ValueError(
            f"cannot shift a plan backwards: new start {new_t_start} precedes plan start {plan.knot_times[0]}"
        )
    return resample_plan(plan, new_t_start, horizon)
