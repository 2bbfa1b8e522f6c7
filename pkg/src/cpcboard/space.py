"""Pipeline search-space model and its JSON space file.

A space is an ordered list of step slots (transformers first, one estimator
slot last), each offering an ordered list of components, each declaring an
ordered list of hyperparameters.  Ordering is load-bearing: the i-th
declared hyperparameter of a component is the i-th conditional axis
everywhere downstream, and estimator color indices follow declaration
order.  The space file is the single source of truth; nothing is compiled
in.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Any, Mapping

from .errors import (
    SchemaError,
    SpaceSyntaxError,
    UnknownComponent,
    UnknownSlot,
    ValidationError,
)

KINDS = ("categorical", "boolean", "integer", "real")
ROLES = ("transformer", "estimator")
CONSTRAINT_METRICS = ("group_disparity", "prediction_time")
SCALES = ("linear", "log")


@dataclass(frozen=True)
class Violation:
    """One invariant breach, located by a path into the space document."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


@dataclass(frozen=True)
class HyperparameterSpec:
    """One tunable value of a component.

    ``values`` applies to categorical, ``min``/``max`` to integer and real,
    ``scale`` to real only (log scale demands min > 0).
    """

    name: str
    kind: str
    default: Any
    values: tuple[str, ...] | None = None
    min: float | int | None = None
    max: float | int | None = None
    scale: str = "linear"

    @property
    def is_numeric(self) -> bool:
        return self.kind in ("integer", "real")


@dataclass(frozen=True)
class ComponentSpec:
    name: str
    role: str
    hyperparameters: tuple[HyperparameterSpec, ...] = ()

    def hyperparameter(self, name: str) -> HyperparameterSpec:
        for hp in self.hyperparameters:
            if hp.name == name:
                return hp
        raise KeyError(name)


@dataclass(frozen=True)
class StepSlot:
    name: str
    role: str
    components: tuple[ComponentSpec, ...] = ()

    def component(self, name: str) -> ComponentSpec:
        for comp in self.components:
            if comp.name == name:
                return comp
        raise UnknownComponent(self.name, name)

    def component_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.components)


@dataclass(frozen=True)
class ConstraintSpec:
    """Upper bound on a result metric; the comparator is always <=."""

    metric: str
    threshold: float


@dataclass(frozen=True)
class SearchSpace:
    slots: tuple[StepSlot, ...]
    constraints: tuple[ConstraintSpec, ...] = ()

    def slot(self, name: str) -> StepSlot:
        for slot in self.slots:
            if slot.name == name:
                return slot
        raise UnknownSlot(name)

    @property
    def estimator_slot(self) -> StepSlot:
        return self.slots[-1]

    def find_component(self, name: str) -> tuple[StepSlot, ComponentSpec]:
        """First declared occurrence of a component name across slots."""
        for slot in self.slots:
            for comp in slot.components:
                if comp.name == name:
                    return slot, comp
        raise UnknownComponent(None, name)


@dataclass(frozen=True)
class Configuration:
    """A concrete pipeline choice: one component per slot plus a full
    hyperparameter assignment for each chosen component."""

    structure: dict[str, str]
    assignment: dict[str, dict[str, Any]]


# -- parsing ---------------------------------------------------------------


def _expect(obj: Any, typ, path: str, what: str):
    if typ is float:
        ok = isinstance(obj, (int, float)) and not isinstance(obj, bool)
    elif typ is int:
        ok = isinstance(obj, int) and not isinstance(obj, bool)
    else:
        ok = isinstance(obj, typ)
    if not ok:
        raise SchemaError(path, f"expected {what}, got {type(obj).__name__}")
    return obj


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise SchemaError(path, f"missing field {key!r}")
    return obj[key]


def _reject_unknown(obj: dict, allowed: set[str], path: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise SchemaError(path, f"unknown field(s) {sorted(extra)}")


def _hp_from_doc(doc: Any, path: str) -> HyperparameterSpec:
    _expect(doc, dict, path, "object")
    name = _expect(_require(doc, "name", path), str, f"{path}.name", "string")
    kind = _expect(_require(doc, "kind", path), str, f"{path}.kind", "string")
    if kind not in KINDS:
        raise SchemaError(f"{path}.kind", f"unknown kind {kind!r}")
    default = _require(doc, "default", path)
    allowed = {"name", "kind", "default"}
    values = None
    lo = hi = None
    scale = "linear"
    if kind == "categorical":
        allowed.add("values")
        raw = _expect(_require(doc, "values", path), list, f"{path}.values", "array")
        values = tuple(
            _expect(v, str, f"{path}.values[{i}]", "string") for i, v in enumerate(raw)
        )
    elif kind in ("integer", "real"):
        allowed |= {"min", "max"}
        num = int if kind == "integer" else float
        word = "integer" if kind == "integer" else "number"
        lo = _expect(_require(doc, "min", path), num, f"{path}.min", word)
        hi = _expect(_require(doc, "max", path), num, f"{path}.max", word)
        if kind == "real":
            allowed.add("scale")
            if "scale" in doc:
                scale = _expect(doc["scale"], str, f"{path}.scale", "string")
            lo, hi = float(lo), float(hi)
    _reject_unknown(doc, allowed, path)
    return HyperparameterSpec(
        name=name, kind=kind, default=default, values=values, min=lo, max=hi, scale=scale
    )


def _component_from_doc(doc: Any, path: str) -> ComponentSpec:
    _expect(doc, dict, path, "object")
    _reject_unknown(doc, {"name", "role", "hyperparameters"}, path)
    name = _expect(_require(doc, "name", path), str, f"{path}.name", "string")
    role = _expect(_require(doc, "role", path), str, f"{path}.role", "string")
    if role not in ROLES:
        raise SchemaError(f"{path}.role", f"unknown role {role!r}")
    raw = _expect(
        _require(doc, "hyperparameters", path), list, f"{path}.hyperparameters", "array"
    )
    hps = tuple(
        _hp_from_doc(h, f"{path}.hyperparameters[{i}]") for i, h in enumerate(raw)
    )
    return ComponentSpec(name=name, role=role, hyperparameters=hps)


def _slot_from_doc(doc: Any, path: str) -> StepSlot:
    _expect(doc, dict, path, "object")
    _reject_unknown(doc, {"name", "role", "components"}, path)
    name = _expect(_require(doc, "name", path), str, f"{path}.name", "string")
    role = _expect(_require(doc, "role", path), str, f"{path}.role", "string")
    if role not in ROLES:
        raise SchemaError(f"{path}.role", f"unknown role {role!r}")
    raw = _expect(_require(doc, "components", path), list, f"{path}.components", "array")
    comps = tuple(
        _component_from_doc(c, f"{path}.components[{i}]") for i, c in enumerate(raw)
    )
    return StepSlot(name=name, role=role, components=comps)


def space_from_doc(doc: Any) -> SearchSpace:
    """Build a SearchSpace from a parsed JSON document (schema checks only)."""
    _expect(doc, dict, "$", "object")
    _reject_unknown(doc, {"slots", "constraints"}, "$")
    raw_slots = _expect(_require(doc, "slots", "$"), list, "$.slots", "array")
    slots = tuple(_slot_from_doc(s, f"$.slots[{i}]") for i, s in enumerate(raw_slots))
    constraints = []
    for i, c in enumerate(doc.get("constraints", [])):
        path = f"$.constraints[{i}]"
        _expect(c, dict, path, "object")
        _reject_unknown(c, {"metric", "threshold"}, path)
        metric = _expect(_require(c, "metric", path), str, f"{path}.metric", "string")
        if metric not in CONSTRAINT_METRICS:
            raise SchemaError(f"{path}.metric", f"unknown metric {metric!r}")
        threshold = _expect(
            _require(c, "threshold", path), float, f"{path}.threshold", "number"
        )
        constraints.append(ConstraintSpec(metric=metric, threshold=float(threshold)))
    return SearchSpace(slots=slots, constraints=tuple(constraints))


def parse_space(text: str) -> SearchSpace:
    """Parse and validate a space file; total over valid input, order-preserving."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpaceSyntaxError(f"malformed space document: {exc}") from exc
    space = space_from_doc(doc)
    violations = validate_space(space)
    if violations:
        raise ValidationError(violations)
    return space


# -- validation ------------------------------------------------------------


def _default_ok(hp: HyperparameterSpec) -> str | None:
    d = hp.default
    if hp.kind == "boolean":
        if not isinstance(d, bool):
            return "default must be a boolean"
    elif hp.kind == "categorical":
        if d not in (hp.values or ()):
            return f"default {d!r} not among declared values"
    elif hp.kind == "integer":
        if not isinstance(d, int) or isinstance(d, bool):
            return "default must be an integer"
        elif not (hp.min <= d <= hp.max):
            return f"default {d} outside [{hp.min}, {hp.max}]"
    else:
        if isinstance(d, bool) or not isinstance(d, (int, float)):
            return "default must be a number"
        elif not (hp.min <= d <= hp.max):
            return f"default {d} outside [{hp.min}, {hp.max}]"
    return None


def validate_space(space: SearchSpace) -> list[Violation]:
    """Every invariant breach as a record; empty list means valid."""
    out: list[Violation] = []

    if not space.slots:
        out.append(Violation("$.slots", "space must declare at least one slot"))
        return out

    seen_slots: set[str] = set()
    for si, slot in enumerate(space.slots):
        spath = f"$.slots[{si}]"
        if slot.name in seen_slots:
            out.append(Violation(spath, f"duplicate slot name {slot.name!r}"))
        seen_slots.add(slot.name)
        if not slot.components:
            out.append(Violation(spath, f"slot {slot.name!r} has no components"))
        seen_comps: set[str] = set()
        for ci, comp in enumerate(slot.components):
            cpath = f"{spath}.components[{ci}]"
            if comp.name in seen_comps:
                out.append(
                    Violation(
                        cpath,
                        f"duplicate component name {comp.name!r} in slot {slot.name!r}",
                    )
                )
            seen_comps.add(comp.name)
            if comp.role != slot.role:
                out.append(
                    Violation(
                        cpath,
                        f"component role {comp.role!r} does not match slot role {slot.role!r}",
                    )
                )
            seen_hps: set[str] = set()
            for hi, hp in enumerate(comp.hyperparameters):
                hpath = f"{cpath}.hyperparameters[{hi}]"
                if hp.name in seen_hps:
                    out.append(
                        Violation(hpath, f"duplicate hyperparameter name {hp.name!r}")
                    )
                seen_hps.add(hp.name)
                out.extend(
                    Violation(hpath, f"hyperparameter {hp.name!r}: {msg}")
                    for msg in _hp_violations(hp)
                )

    est = [i for i, s in enumerate(space.slots) if s.role == "estimator"]
    if len(est) != 1:
        out.append(
            Violation("$.slots", f"expected exactly one estimator slot, found {len(est)}")
        )
    elif est[0] != len(space.slots) - 1:
        out.append(Violation(f"$.slots[{est[0]}]", "estimator slot must be last"))

    seen_metrics: set[str] = set()
    for ci, con in enumerate(space.constraints):
        path = f"$.constraints[{ci}]"
        if con.metric in seen_metrics:
            out.append(Violation(path, f"duplicate constraint for {con.metric!r}"))
        seen_metrics.add(con.metric)
        if con.metric == "group_disparity" and not (0.0 <= con.threshold <= 1.0):
            out.append(Violation(path, "group_disparity threshold must be in [0, 1]"))
        if con.metric == "prediction_time" and not (con.threshold > 0.0):
            out.append(Violation(path, "prediction_time threshold must be > 0"))

    return out


def _hp_violations(hp: HyperparameterSpec) -> list[str]:
    msgs: list[str] = []
    if hp.kind == "categorical":
        values = hp.values or ()
        if len(set(values)) < 2:
            msgs.append("categorical needs at least 2 distinct values")
    elif hp.is_numeric:
        if not (hp.min < hp.max):
            msgs.append(f"min must be < max (got min={hp.min}, max={hp.max})")
        if hp.kind == "real":
            if hp.scale not in SCALES:
                msgs.append(f"unknown scale {hp.scale!r}")
            elif hp.scale == "log" and not (hp.min is not None and hp.min > 0):
                msgs.append("log scale requires min > 0")
    bad_default = _default_ok(hp)
    if bad_default:
        msgs.append(bad_default)
    return msgs


# -- serialization ---------------------------------------------------------


def space_to_doc(space: SearchSpace) -> dict:
    def hp_doc(hp: HyperparameterSpec) -> dict:
        doc: dict[str, Any] = {"name": hp.name, "kind": hp.kind}
        if hp.kind == "categorical":
            doc["values"] = list(hp.values or ())
        elif hp.is_numeric:
            doc["min"] = hp.min
            doc["max"] = hp.max
            if hp.kind == "real":
                doc["scale"] = hp.scale
        doc["default"] = hp.default
        return doc

    return {
        "slots": [
            {
                "name": slot.name,
                "role": slot.role,
                "components": [
                    {
                        "name": comp.name,
                        "role": comp.role,
                        "hyperparameters": [hp_doc(h) for h in comp.hyperparameters],
                    }
                    for comp in slot.components
                ],
            }
            for slot in space.slots
        ],
        "constraints": [
            {"metric": c.metric, "threshold": c.threshold} for c in space.constraints
        ],
    }


def serialize_space(space: SearchSpace, indent: int | None = 2) -> str:
    """Inverse of parse_space on valid spaces (field-for-field round-trip)."""
    return json.dumps(space_to_doc(space), indent=indent)


def load_default_space() -> SearchSpace:
    """The bundled three-slot space mirroring the shipped demo catalog."""
    text = resources.files("cpcboard.data").joinpath("default_space.json").read_text("utf-8")
    return parse_space(text)


# -- structure-level operations --------------------------------------------


def count_structures(space: SearchSpace) -> int:
    """Number of distinct component choices (product over slots)."""
    return math.prod(len(slot.components) for slot in space.slots)


def default_configuration(space: SearchSpace, structure: Mapping[str, str]) -> Configuration:
    """Bind every hyperparameter of the chosen components to its default."""
    expected = {slot.name for slot in space.slots}
    for key in structure:
        if key not in expected:
            raise UnknownSlot(key)
    ordered: dict[str, str] = {}
    assignment: dict[str, dict[str, Any]] = {}
    for slot in space.slots:
        if slot.name not in structure:
            raise UnknownSlot(slot.name)
        comp = slot.component(structure[slot.name])
        ordered[slot.name] = comp.name
        assignment[slot.name] = {hp.name: hp.default for hp in comp.hyperparameters}
    return Configuration(structure=ordered, assignment=assignment)
