"""Name registries for tasks/optimizers, per-task config overrides, and YAML loading.

Overrides are keyed by (task name, config class): a value registered for an
optimizer config class only applies when that optimizer is active and that
task is selected. YAML files mirror the programmatic API one-to-one, so a
config file and a registration script produce identical resolutions.
"""

from __future__ import annotations

import copy
import dataclasses
import importlib
import typing
from dataclasses import dataclass
from pathlib import Path

import yaml

from sbmpc.controller import ControllerConfig
from sbmpc.optimizers import CEM, CEMConfig, MPPI, MPPIConfig, PredictiveSampling, PredictiveSamplingConfig
from sbmpc.schema import apply_param_update, coerce_value
from sbmpc.tasks import (
    Cartpole,
    CartpoleConfig,
    CylinderPush,
    CylinderPushConfig,
    DoubleIntegrator,
    DoubleIntegratorConfig,
)

_YAML_KEYS = {
    "defaults",
    "task",
    "custom_tasks",
    "custom_optimizers",
    "controller_config_overrides",
    "optimizer_config_overrides",
}


@dataclass
class StackSettings:
    """Launch-time knobs that are not part of any config object."""

    task: str = "cartpole"
    optimizer: str = "ps"


@dataclass(frozen=True)
class _Entry:
    factory: type
    config_cls: type


class Registry:
    def __init__(self, builtins: bool = True):
        self._tasks: dict[str, _Entry] = {}
        self._optimizers: dict[str, _Entry] = {}
        self._overrides: dict[tuple[str, type], dict] = {}
        if builtins:
            register_builtins(self)

    # -- registration ------------------------------------------------------

    def register_task(self, name: str, factory, config_cls) -> None:
        if name in self._tasks:
            raise ValueError(f"task {name!r} is already registered")
        self._tasks[name] = _Entry(factory, config_cls)

    def register_optimizer(self, name: str, factory, config_cls) -> None:
        if name in self._optimizers:
            raise ValueError(f"optimizer {name!r} is already registered")
        self._optimizers[name] = _Entry(factory, config_cls)

    def set_config_overrides(self, task_name: str, config_cls, overrides: dict) -> None:
        key = (task_name, config_cls)
        self._overrides.setdefault(key, {}).update(overrides)

    # -- lookup --------------------------------------------------------------

    def task_names(self) -> list[str]:
        return sorted(self._tasks)

    def optimizer_names(self) -> list[str]:
        return sorted(self._optimizers)

    def task_entry(self, name: str) -> _Entry:
        if name not in self._tasks:
            raise KeyError(f"unknown task {name!r}; registered: {self.task_names()}")
        return self._tasks[name]

    def optimizer_entry(self, name: str) -> _Entry:
        if name not in self._optimizers:
            raise KeyError(f"unknown optimizer {name!r}; registered: {self.optimizer_names()}")
        return self._optimizers[name]

    def make_task(self, name: str):
        entry = self.task_entry(name)
        task = entry.factory()
        task.config_cls = entry.config_cls
        return task

    def make_optimizer(self, name: str, config, nu: int, control_bounds=None):
        entry = self.optimizer_entry(name)
        return entry.factory(config, nu, control_bounds)

    # -- resolution ------------------------------------------------------------

    def resolve_config(self, task_name: str, optimizer_name: str):
        """Defaults plus task-specific overrides -> (task cfg, optimizer cfg, controller cfg)."""
        task_entry = self.task_entry(task_name)
        opt_entry = self.optimizer_entry(optimizer_name)
        task_cfg = self._apply(task_name, task_entry.config_cls())
        opt_cfg = self._apply(task_name, opt_entry.config_cls())
        ctrl_cfg = self._apply(task_name, ControllerConfig())
        return task_cfg, opt_cfg, ctrl_cfg

    def _apply(self, task_name: str, config):
        overrides = self._overrides.get((task_name, type(config)), {})
        field_names = {f.name for f in dataclasses.fields(type(config))}
        hints = typing.get_type_hints(type(config))
        for path, value in overrides.items():
            name = path.split(".")[0]
            if name not in field_names:
                raise KeyError(
                    f"override {path!r} for task {task_name!r}: "
                    f"{type(config).__name__} has no field {name!r}"
                )
            if "." in path:
                apply_param_update(config, path, value)
            else:
                setattr(config, name, coerce_value(hints.get(name), value, name))
        return config

    def copy(self) -> "Registry":
        clone = Registry(builtins=False)
        clone._tasks = dict(self._tasks)
        clone._optimizers = dict(self._optimizers)
        clone._overrides = copy.deepcopy(self._overrides)
        return clone


def register_builtins(registry: Registry) -> None:
    registry.register_task("cartpole", Cartpole, CartpoleConfig)
    registry.register_task("cylinder_push", CylinderPush, CylinderPushConfig)
    registry.register_task("double_integrator", DoubleIntegrator, DoubleIntegratorConfig)
    registry.register_optimizer("ps", PredictiveSampling, PredictiveSamplingConfig)
    registry.register_optimizer("cem", CEM, CEMConfig)
    registry.register_optimizer("mppi", MPPI, MPPIConfig)


# Default process-wide registry used by the programmatic API and the CLI.
_default_registry = Registry()


def default_registry() -> Registry:
    return _default_registry


def register_task(name: str, factory, config_cls) -> None:
    _default_registry.register_task(name, factory, config_cls)


def register_optimizer(name: str, factory, config_cls) -> None:
    _default_registry.register_optimizer(name, factory, config_cls)


def set_config_overrides(task_name: str, config_cls, overrides: dict) -> None:
    _default_registry.set_config_overrides(task_name, config_cls, overrides)


def _import_symbol(path: str):
    module_name, _, attr = path.rpartition(".")
    if not module_name:
        raise ValueError(f"cannot import {path!r}: expected a dotted module path")
    try:
        module = importlib.import_module(module_name)
    except ImportError as exc:
        raise ValueError(f"cannot import module {module_name!r} for {path!r}: {exc}") from exc
    try:
        return getattr(module, attr)
    except AttributeError as exc:
        raise ValueError(f"module {module_name!r} has no attribute {attr!r}") from exc


def load_yaml(path, base: Registry | None = None) -> tuple[Registry, StackSettings]:
    """Build a registry and stack settings from a YAML file.

    The result is observationally identical to making the equivalent
    register_*/set_config_overrides calls. Unknown top-level keys are hard
    errors; the hydra-style `defaults` list is accepted and ignored.
    """
    path = Path(path)
    with open(path) as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a mapping at the top level")
    unknown = set(data) - _YAML_KEYS
    if unknown:
        raise ValueError(f"{path}: unknown config keys: {sorted(unknown)}")

    registry = (base if base is not None else _default_registry).copy()
    settings = StackSettings()

    for name, spec in (data.get("custom_tasks") or {}).items():
        registry.register_task(name, _import_symbol(spec["task"]), _import_symbol(spec["config"]))
    for name, spec in (data.get("custom_optimizers") or {}).items():
        registry.register_optimizer(
            name, _import_symbol(spec["optimizer"]), _import_symbol(spec["config"])
        )

    for task_name, overrides in (data.get("controller_config_overrides") or {}).items():
        registry.set_config_overrides(task_name, ControllerConfig, dict(overrides))

    for task_name, per_opt in (data.get("optimizer_config_overrides") or {}).items():
        for opt_name, overrides in (per_opt or {}).items():
            entry = registry.optimizer_entry(opt_name)
            registry.set_config_overrides(task_name, entry.config_cls, dict(overrides))

    if "task" in data:
        settings.task = str(data["task"])
        registry.task_entry(settings.task)  # fail fast on unknown initial task
    return registry, settings
