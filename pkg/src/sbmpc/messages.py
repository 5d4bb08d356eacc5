"""Messages exchanged on the bus and over the websocket bridge.

Wire format (JSON text frames) uses these exact field names:
  state  {"type":"state","seq","t","q","v","task"}
  plan   {"type":"plan","seq","t_start","knot_times","knots","kind","nu"}
  traces {"type":"traces","seq","traces":[{"points":[[x,y,z]..],"reward","nominal"}]}
  param  {"type":"param","scope","path","value"}
  command{"type":"command","name",...}
  stats  {"type":"stats","seq","update_ms_mean","update_ms_std","iteration","task","optimizer"}
  schema {"type":"schema","scope","fields":[...]}
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from sbmpc.rollout import TraceEntry
from sbmpc.spline import ControlPlan

TOPIC_STATE = "state"
TOPIC_PLAN = "plan"
TOPIC_TRACES = "traces"
TOPIC_STATS = "stats"
TOPIC_PARAM = "param"
TOPIC_COMMAND = "command"

COMMANDS = ("switch_task", "switch_optimizer", "reset", "pause", "resume")
PARAM_SCOPES = ("task", "optimizer", "controller")


@dataclass(frozen=True)
class StateMsg:
    t: float
    q: tuple
    v: tuple
    task: str

    def to_json(self, seq: int) -> dict:
        return {"type": "state", "seq": seq, "t": self.t, "q": list(self.q), "v": list(self.v), "task": self.task}


@dataclass(frozen=True)
class PlanMsg:
    t_start: float
    knot_times: tuple
    knots: tuple  # tuple of knot rows
    kind: str
    nu: int

    @staticmethod
    def from_plan(plan: ControlPlan) -> "PlanMsg":
        return PlanMsg(
            t_start=plan.t_start,
            knot_times=tuple(plan.knot_times.tolist()),
            knots=tuple(tuple(row) for row in plan.knots.tolist()),
            kind=plan.kind,
            nu=plan.nu,
        )

    def to_plan(self) -> ControlPlan:
        return ControlPlan(
            knots=np.asarray(self.knots, dtype=np.float64),
            knot_times=np.asarray(self.knot_times, dtype=np.float64),
            kind=self.kind,
        )

    def to_json(self, seq: int) -> dict:
        return {
            "type": "plan",
            "seq": seq,
            "t_start": self.t_start,
            "knot_times": list(self.knot_times),
            "knots": [list(row) for row in self.knots],
            "kind": self.kind,
            "nu": self.nu,
        }


@dataclass(frozen=True)
class TracesMsg:
    traces: tuple  # tuple of TraceEntry

    @staticmethod
    def from_entries(entries: list[TraceEntry]) -> "TracesMsg":
        return TracesMsg(traces=tuple(entries))

    def to_json(self, seq: int) -> dict:
        return {
            "type": "traces",
            "seq": seq,
            "traces": [
                {
                    "points": np.asarray(entry.points).tolist(),
                    "reward": entry.reward,
                    "nominal": entry.nominal,
                    "label": entry.label,
                }
                for entry in self.traces
            ],
        }


@dataclass(frozen=True)
class ParamUpdateMsg:
    scope: str  # task | optimizer | controller
    path: str
    value: object

    def to_json(self, seq: int) -> dict:
        return {"type": "param", "seq": seq, "scope": self.scope, "path": self.path, "value": self.value}


@dataclass(frozen=True)
class CommandMsg:
    name: str
    task: str | None = None
    optimizer: str | None = None

    def to_json(self, seq: int) -> dict:
        out = {"type": "command", "seq": seq, "name": self.name}
        if self.task is not None:
            out["task"] = self.task
        if self.optimizer is not None:
            out["optimizer"] = self.optimizer
        return out


@dataclass(frozen=True)
class StatsMsg:
    update_ms_mean: float
    update_ms_std: float
    iteration: int
    task: str
    optimizer: str

    def to_json(self, seq: int) -> dict:
        return {
            "type": "stats",
            "seq": seq,
            "update_ms_mean": self.update_ms_mean,
            "update_ms_std": self.update_ms_std,
            "iteration": self.iteration,
            "task": self.task,
            "optimizer": self.optimizer,
        }


def parse_client_frame(data: dict):
    """Inbound GUI frame -> ParamUpdateMsg or CommandMsg; raises ValueError on junk."""
    if not isinstance(data, dict):
        raise ValueError("frame must be a JSON object")
    kind = data.get("type")
    if kind == "param":
        scope = data.get("scope")
        if scope not in PARAM_SCOPES:
            raise ValueError(f"unknown param scope {scope!r}")
        path = data.get("path")
        if not isinstance(path, str) or not path:
            raise ValueError("param frame needs a non-empty 'path'")
        if "value" not in data:
            raise ValueError("param frame needs a 'value'")
        return ParamUpdateMsg(scope=scope, path=path, value=data["value"])
    if kind == "command":
        name = data.get("name")
        if name not in COMMANDS:
            raise ValueError(f"unknown command {name!r}")
        return CommandMsg(name=name, task=data.get("task"), optimizer=data.get("optimizer"))
    raise ValueError(f"unknown frame type {kind!r}")
