"""Asynchronous node graph: simulator and controller threads over the bus.

Each node runs in its own thread, reads only the latest message per topic,
and keeps running when its peers die. Swapping the simulator node for a
hardware interface requires no controller changes: anything that publishes
StateMsg and consumes PlanMsg fits.
"""

from __future__ import annotations

import logging
import threading
import time
from collections import deque

import numpy as np

from sbmpc import spline
from sbmpc.bus import MessageBus
from sbmpc.controller import Controller
from sbmpc.messages import (
    TOPIC_COMMAND,
    TOPIC_PARAM,
    TOPIC_PLAN,
    TOPIC_STATE,
    TOPIC_STATS,
    TOPIC_TRACES,
    CommandMsg,
    ParamUpdateMsg,
    PlanMsg,
    StateMsg,
    StatsMsg,
    TracesMsg,
)
from sbmpc.registry import Registry
from sbmpc.rollout import top_traces
from sbmpc.schema import apply_param_update
from sbmpc.tasks.base import TaskState

log = logging.getLogger(__name__)


class NodeThread:
    """Thread wrapper with a stop flag; nodes override `run_loop`."""

    def __init__(self, name: str):
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._run, name=name, daemon=True)
        self.name = name

    def start(self):
        self._thread.start()
        return self

    def stop(self, join: bool = True):
        self._stop.set()
        if join and self._thread.is_alive():
            self._thread.join(timeout=5.0)

    @property
    def stopped(self) -> bool:
        return self._stop.is_set()

    @property
    def alive(self) -> bool:
        return self._thread.is_alive()

    def _run(self):
        try:
            self.run_loop()
        except Exception:
            log.exception("node %s crashed", self.name)

    def run_loop(self):
        raise NotImplementedError


class SimulatorNode(NodeThread):
    """Steps the active task in (optionally real-time-paced) wall time.

    Reads the latest plan, applies the interpolated control, publishes the
    state. With no plan yet, applies zero control. Honors pause/resume/reset
    and switch_task commands; sim time freezes while paused.
    """

    def __init__(
        self,
        bus: MessageBus,
        registry: Registry,
        task_name: str,
        dt_sim: float = 0.01,
        realtime: bool = True,
        seed: int | None = None,
    ):
        super().__init__("simulator")
        self.bus = bus
        self.registry = registry
        self.dt_sim = dt_sim
        self.realtime = realtime
        self.rng = np.random.default_rng(seed)
        self.task_name = task_name
        self.task = registry.make_task(task_name)
        self.state = self.task.reset(self.rng)
        self.paused = False
        self._cmd_seq = 0

    def _handle_commands(self):
        got = self.bus.read_new(TOPIC_COMMAND, self._cmd_seq)
        if got is None:
            return
        self._cmd_seq, cmd = got
        if cmd.name == "pause":
            self.paused = True
        elif cmd.name == "resume":
            self.paused = False
        elif cmd.name == "reset":
            self.state = self.task.reset(self.rng)
        elif cmd.name == "switch_task" and cmd.task and cmd.task != self.task_name:
            self.task_name = cmd.task
            self.task = self.registry.make_task(cmd.task)
            self.state = self.task.reset(self.rng)

    def _control(self) -> np.ndarray:
        got = self.bus.read(TOPIC_PLAN)
        if got is None:
            return np.zeros(self.task.nu)
        _, plan_msg = got
        if plan_msg.nu != self.task.nu:
            return np.zeros(self.task.nu)  # stale plan from another task
        u = spline.interpolate(plan_msg.to_plan(), self.state.t)
        return self.task.clamp_controls(u)

    def publish_state(self):
        self.bus.publish(
            TOPIC_STATE,
            StateMsg(
                t=self.state.t,
                q=tuple(self.state.q.tolist()),
                v=tuple(self.state.v.tolist()),
                task=self.task_name,
            ),
        )

    def run_loop(self):
        next_tick = time.perf_counter()
        self.publish_state()
        while not self.stopped:
            self._handle_commands()
            if not self.paused:
                try:
                    self.state = self.task.step(self.state, self._control(), self.dt_sim)
                except ValueError:
                    log.warning("simulator: dynamics diverged, resetting %s", self.task_name)
                    self.state = self.task.reset(self.rng)
            self.publish_state()
            if self.realtime:
                next_tick += self.dt_sim
                delay = next_tick - time.perf_counter()
                if delay > 0:
                    time.sleep(delay)
                else:
                    next_tick = time.perf_counter()  # fell behind; don't bank time


class Stack:
    """A running simulator + controller (+ optional bridge) sharing one bus."""

    def __init__(self, bus, simulator, controller, bridge=None):
        self.bus = bus
        self.simulator = simulator
        self.controller = controller
        self.bridge = bridge

    def stop(self):
        if self.bridge is not None:
            self.bridge.stop()
        self.controller.stop()
        self.simulator.stop()


def launch_stack(
    registry: Registry,
    task_name: str = "cartpole",
    optimizer_name: str = "ps",
    workers: int = 1,
    dt_sim: float = 0.01,
    realtime: bool = True,
    seed: int | None = None,
    headless: bool = True,
    host: str = "127.0.0.1",
    port: int = 8008,
    gui_dir=None,
) -> Stack:
    """Start the node graph and return handles; caller owns shutdown."""
    bus = MessageBus()
    bridge = None
    if not headless:
        from sbmpc.bridge import WebsocketBridge

        bridge = WebsocketBridge(
            bus, registry, task_name, optimizer_name, host=host, port=port, gui_dir=gui_dir
        )
        bridge.start()
    simulator = SimulatorNode(bus, registry, task_name, dt_sim=dt_sim, realtime=realtime, seed=seed)
    controller = ControllerNode(
        bus, registry, task_name, optimizer_name, workers=workers,
        seed=None if seed is None else seed + 1,
    )
    simulator.start()
    controller.start()
    return Stack(bus, simulator, controller, bridge)


class ControllerNode(NodeThread):
    """Replans from the latest state as fast as it can and publishes the results.

    Param updates and commands are applied between iterations, never
    mid-update. Losing the state stream leaves the node replanning from the
    last state it saw.
    """

    def __init__(
        self,
        bus: MessageBus,
        registry: Registry,
        task_name: str,
        optimizer_name: str = "ps",
        workers: int = 1,
        seed: int | None = None,
        stats_window: int = 100,
    ):
        super().__init__("controller")
        self.bus = bus
        self.registry = registry
        self.workers = workers
        self.rng = np.random.default_rng(seed)
        self._cmd_seq = 0
        self._param_seq = 0
        self._state_seq = 0
        self._durations = deque(maxlen=stats_window)
        self.task_name = task_name
        self.optimizer_name = optimizer_name
        self._build()

    def _build(self):
        task = self.registry.make_task(self.task_name)
        task_cfg, opt_cfg, ctrl_cfg = self.registry.resolve_config(self.task_name, self.optimizer_name)
        optimizer = self.registry.make_optimizer(
            self.optimizer_name, opt_cfg, task.nu, task.control_bounds
        )
        self.controller = Controller(
            task, optimizer, ctrl_cfg, task_config=task_cfg, workers=self.workers
        )
        self._durations.clear()

    def _handle_commands(self):
        got = self.bus.read_new(TOPIC_COMMAND, self._cmd_seq)
        if got is None:
            return
        self._cmd_seq, cmd = got
        if cmd.name == "switch_task" and cmd.task and cmd.task != self.task_name:
            self.task_name = cmd.task
            self._build()
        elif cmd.name == "switch_optimizer" and cmd.optimizer and cmd.optimizer != self.optimizer_name:
            self.optimizer_name = cmd.optimizer
            self._build()
        elif cmd.name == "reset":
            self.controller.reset_plan()

    def _handle_params(self):
        got = self.bus.read_new(TOPIC_PARAM, self._param_seq)
        if got is None:
            return
        self._param_seq, msg = got
        target = {
            "task": self.controller.task_config,
            "optimizer": self.controller.optimizer.config,
            "controller": self.controller.config,
        }.get(msg.scope)
        if target is None:
            log.warning("param update with unknown scope %r dropped", msg.scope)
            return
        try:
            apply_param_update(target, msg.path, msg.value)
        except (KeyError, ValueError) as exc:
            log.warning("param update %s.%s rejected: %s", msg.scope, msg.path, exc)

    def publish_results(self, batch):
        self.bus.publish(TOPIC_PLAN, PlanMsg.from_plan(self.controller.plan))
        entries = top_traces(batch, self.controller.config.max_num_traces, self.controller.task.trace_labels)
        self.bus.publish(TOPIC_TRACES, TracesMsg.from_entries(entries))
        durs = np.asarray(self._durations)
        self.bus.publish(
            TOPIC_STATS,
            StatsMsg(
                update_ms_mean=float(durs.mean()),
                update_ms_std=float(durs.std()),
                iteration=self.controller.iteration,
                task=self.task_name,
                optimizer=self.optimizer_name,
            ),
        )

    def run_loop(self):
        while not self.stopped:
            self._handle_commands()
            self._handle_params()
            got = self.bus.topic(TOPIC_STATE).wait_new(0, timeout=0.1)
            if got is None:
                continue
            seq, state_msg = got
            if state_msg.task != self.task_name:
                time.sleep(0.001)  # stale stream from a task we switched away from
                continue
            self._state_seq = seq
            x0 = TaskState(t=state_msg.t, q=np.asarray(state_msg.q), v=np.asarray(state_msg.v))
            try:
                batch = self.controller.update(x0, self.rng)
            except RuntimeError as exc:
                log.warning("controller update failed: %s", exc)
                continue
            self._durations.append(self.controller.last_update_ms)
            self.publish_results(batch)
