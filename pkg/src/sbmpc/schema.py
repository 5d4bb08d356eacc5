"""Config reflection: turn dataclass configs into GUI widget schemas.

Field kinds map to widgets: int -> int-slider, float -> float-slider,
bool -> checkbox, Literal[...] -> dropdown, 1-D float array -> array-folder of
sub-sliders. Slider bounds come from an explicit @slider annotation or
array_field metadata when present; otherwise a deterministic heuristic based
on the class-level default keeps bounds stable while values change.
"""

from __future__ import annotations

import dataclasses
import typing
from dataclasses import dataclass, field

import numpy as np

_SLIDER_ATTR = "_slider_overrides"

INT_SLIDER = "int-slider"
FLOAT_SLIDER = "float-slider"
CHECKBOX = "checkbox"
DROPDOWN = "dropdown"
ARRAY_FOLDER = "array-folder"


def slider(name: str, min: float, max: float, step: float):
    """Class decorator pinning slider bounds for one config field."""

    def decorate(cls):
        overrides = dict(getattr(cls, _SLIDER_ATTR, {}))
        overrides[name] = (float(min), float(max), float(step))
        setattr(cls, _SLIDER_ATTR, overrides)
        return cls

    return decorate


def array_field(values, names=None, mins=None, maxs=None, steps=None):
    """Dataclass field for a fixed-size 1-D float array with per-entry slider metadata."""
    values = [float(v) for v in values]
    meta = {
        "array_names": list(names) if names is not None else None,
        "array_mins": [float(v) for v in mins] if mins is not None else None,
        "array_maxs": [float(v) for v in maxs] if maxs is not None else None,
        "array_steps": [float(v) for v in steps] if steps is not None else None,
    }
    return field(default_factory=lambda: np.array(values, dtype=np.float64), metadata=meta)


@dataclass
class FieldSchema:
    name: str
    kind: str
    default: object = None
    min: float | None = None
    max: float | None = None
    step: float | None = None
    options: list = field(default_factory=list)
    subfields: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "default": self.default,
            "min": self.min,
            "max": self.max,
            "step": self.step,
            "options": list(self.options),
            "subfields": [sub.to_json() for sub in self.subfields],
        }


@dataclass
class ConfigSchema:
    fields: list

    def field(self, name: str) -> FieldSchema:
        for f in self.fields:
            if f.name == name:
                return f
        raise KeyError(f"no field named {name!r} in schema")

    def to_json(self) -> list:
        return [f.to_json() for f in self.fields]


def _heuristic_range(default: float) -> tuple[float, float, float]:
    if default == 0:
        lo, hi = 0.0, 1.0
    else:
        lo, hi = 0.0, 4.0 * abs(float(default))
    return lo, hi, (hi - lo) / 100.0


def _class_default(fld: dataclasses.Field):
    if fld.default is not dataclasses.MISSING:
        return fld.default
    if fld.default_factory is not dataclasses.MISSING:
        return fld.default_factory()
    raise ValueError(f"config field {fld.name!r} has no default")


def schema_of(config) -> ConfigSchema:
    """Reflect a dataclass config instance into a widget schema."""
    cls = type(config)
    if not dataclasses.is_dataclass(cls):
        raise TypeError(f"expected a dataclass config, got {cls.__name__}")
    overrides = getattr(cls, _SLIDER_ATTR, {})
    hints = typing.get_type_hints(cls)
    out = []
    for fld in dataclasses.fields(cls):
        hint = hints.get(fld.name, type(_class_default(fld)))
        value = getattr(config, fld.name)
        out.append(_reflect_field(fld, hint, value, overrides.get(fld.name)))
    return ConfigSchema(fields=out)


def _reflect_field(fld, hint, value, override) -> FieldSchema:
    name = fld.name
    if typing.get_origin(hint) is typing.Literal:
        options = [str(o) for o in typing.get_args(hint)]
        if not options:
            raise ValueError(f"field {name!r}: dropdown needs at least one option")
        return FieldSchema(name=name, kind=DROPDOWN, default=str(value), options=options)
    if hint is bool:
        return FieldSchema(name=name, kind=CHECKBOX, default=bool(value))
    if hint is int:
        lo, hi, step = override if override else _heuristic_range(_class_default(fld))
        if not override:
            lo, hi = int(round(lo)), int(round(hi))
            step = max(1, round(step))
        return FieldSchema(name=name, kind=INT_SLIDER, default=int(value), min=lo, max=hi, step=step)
    if hint is float:
        lo, hi, step = override if override else _heuristic_range(_class_default(fld))
        return FieldSchema(name=name, kind=FLOAT_SLIDER, default=float(value), min=lo, max=hi, step=step)
    if hint is np.ndarray or isinstance(value, np.ndarray):
        return _reflect_array(fld, np.asarray(value, dtype=np.float64))
    raise ValueError(f"field {name!r}: unsupported config field kind {hint!r}")


def _reflect_array(fld, value: np.ndarray) -> FieldSchema:
    if value.ndim != 1:
        raise ValueError(f"field {fld.name!r}: only 1-D arrays are supported")
    meta = fld.metadata
    names = meta.get("array_names") or [f"{fld.name}[{i}]" for i in range(value.shape[0])]
    defaults = np.asarray(_class_default(fld), dtype=np.float64)
    subs = []
    for i in range(value.shape[0]):
        if meta.get("array_mins") is not None:
            lo = meta["array_mins"][i]
            hi = meta["array_maxs"][i]
            step = meta["array_steps"][i]
        else:
            lo, hi, step = _heuristic_range(defaults[i])
        subs.append(
            FieldSchema(name=names[i], kind=FLOAT_SLIDER, default=float(value[i]), min=lo, max=hi, step=step)
        )
    return FieldSchema(
        name=fld.name, kind=ARRAY_FOLDER, default=[float(v) for v in value], subfields=subs
    )


def apply_param_update(config, path: str, value) -> None:
    """Set one config field from a dotted path; array entries use `name.index`."""
    cls = type(config)
    parts = path.split(".")
    name = parts[0]
    field_names = {f.name for f in dataclasses.fields(cls)}
    if name not in field_names:
        raise KeyError(f"{cls.__name__} has no config field {name!r}")
    hints = typing.get_type_hints(cls)
    hint = hints.get(name)
    current = getattr(config, name)
    if len(parts) == 2:
        if not isinstance(current, np.ndarray):
            raise KeyError(f"field {name!r} is not an array; path {path!r} is invalid")
        idx = int(parts[1])
        if not 0 <= idx < current.shape[0]:
            raise KeyError(f"index {idx} out of range for field {name!r}")
        current[idx] = float(value)
        return
    if len(parts) != 1:
        raise KeyError(f"invalid field path {path!r}")
    setattr(config, name, coerce_value(hint, value, name))


def coerce_value(hint, value, name: str):
    """Check/convert a raw (e.g. JSON) value to the field's declared type."""
    if typing.get_origin(hint) is typing.Literal:
        options = [str(o) for o in typing.get_args(hint)]
        if str(value) not in options:
            raise ValueError(f"field {name!r}: {value!r} is not one of {options}")
        return str(value)
    if hint is bool:
        if not isinstance(value, bool):
            raise ValueError(f"field {name!r}: expected a boolean, got {value!r}")
        return value
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"field {name!r}: expected an integer, got {value!r}")
        if isinstance(value, float) and not value.is_integer():
            raise ValueError(f"field {name!r}: expected an integer, got {value!r}")
        return int(value)
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ValueError(f"field {name!r}: expected a number, got {value!r}")
        return float(value)
    if hint is np.ndarray:
        arr = np.asarray(value, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"field {name!r}: expected a 1-D array")
        return arr
    raise ValueError(f"field {name!r}: unsupported field kind {hint!r}")
