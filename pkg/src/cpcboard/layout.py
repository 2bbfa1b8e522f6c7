"""Conditional parallel coordinates geometry.

Top-level axes run pipeline id, one categorical axis per step slot, then
the four metric axes.  Expanding a (slot, component) splices that
component's hyperparameter axes immediately after the slot axis, in
declared order, and all visible axes are re-spaced equally across [0, 1].
Pipelines that do not use an expanded component simply skip its axes
(straight segment across the block).  Everything here is a pure function
of (snapshot, expansion); coordinates live in the unit square with y = 1
at the top value of each axis.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Any, Sequence

from .engine import PipelineCandidate, RunSnapshot
from .errors import DomainError, EmptySnapshot, UnknownComponent, UnknownExpansion
from .space import SearchSpace

PIPELINE_ID_AXIS = "pipeline_id"
METRIC_AXES = ("group_disparity", "prediction_time", "roc_auc_train", "roc_auc_holdout")

KIND_IDENTIFIER = "identifier"
KIND_CATEGORICAL = "categorical"
KIND_NUMERIC = "numeric"


@dataclass(frozen=True)
class NumericDomain:
    lo: float
    hi: float
    scale: str = "linear"


@dataclass(frozen=True)
class AxisDescriptor:
    """One visible axis.  Conditional axes carry their (slot, component)
    parent and an axis_id of the form "<slot>/<component>/<hyperparameter>"."""

    axis_id: str
    kind: str
    parent: tuple[str, str] | None
    domain: tuple[str, ...] | NumericDomain
    x: float


@dataclass(frozen=True)
class ExpansionState:
    """Set of expanded (slot, component) pairs, at most one per slot."""

    expanded: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        slots = [slot for slot, _ in self.expanded]
        if len(slots) != len(set(slots)):
            raise ValueError("at most one expanded component per slot")

    def component_for(self, slot: str) -> str | None:
        for s, c in self.expanded:
            if s == slot:
                return c
        return None


@dataclass(frozen=True)
class Polyline:
    id: str
    vertices: tuple[tuple[float, float], ...]
    color_index: int


@dataclass(frozen=True)
class CpcLayout:
    axes: tuple[AxisDescriptor, ...]
    polylines: tuple[Polyline, ...]
    ticks: dict[str, tuple[tuple[str, float], ...]]
    legend: dict[str, int]


def color_for(estimator: str, space: SearchSpace) -> int:
    """Color index = declared position in the estimator slot; snapshot-stable."""
    names = space.estimator_slot.component_names()
    if estimator not in names:
        raise UnknownComponent(space.estimator_slot.name, estimator)
    return names.index(estimator)


def _validate_expansion(space: SearchSpace, expansion: ExpansionState) -> None:
    for slot_name, comp_name in expansion.expanded:
        try:
            slot = space.slot(slot_name)
        except Exception as exc:
            raise UnknownExpansion(f"unknown slot {slot_name!r}") from exc
        if comp_name not in slot.component_names():
            raise UnknownExpansion(
                f"unknown component {comp_name!r} in slot {slot_name!r}"
            )


def toggle(expansion: ExpansionState, space: SearchSpace, slot: str, component: str) -> ExpansionState:
    """Click semantics: re-click collapses, a sibling click replaces."""
    _validate_expansion(space, ExpansionState(frozenset({(slot, component)})))
    pairs = set(expansion.expanded)
    if (slot, component) in pairs:
        pairs.remove((slot, component))
    else:
        pairs = {(s, c) for s, c in pairs if s != slot}
        pairs.add((slot, component))
    return ExpansionState(frozenset(pairs))


def _spread(axes: list[AxisDescriptor]) -> tuple[AxisDescriptor, ...]:
    m = len(axes)
    if m == 1:
        return (dataclasses.replace(axes[0], x=0.5),)
    return tuple(
        dataclasses.replace(ax, x=i / (m - 1)) for i, ax in enumerate(axes)
    )


def _metric_domain(metric: str, candidates: Sequence[PipelineCandidate]) -> NumericDomain:
    if not candidates:
        return NumericDomain(0.0, 1.0)
    values = [c.metrics.get(metric) for c in candidates]
    return NumericDomain(min(values), max(values))


def _conditional_axes(slot_name: str, comp) -> list[AxisDescriptor]:
    out = []
    for hp in comp.hyperparameters:
        axis_id = f"{slot_name}/{comp.name}/{hp.name}"
        if hp.is_numeric:
            domain: Any = NumericDomain(float(hp.min), float(hp.max), hp.scale)
            kind = KIND_NUMERIC
        elif hp.kind == "boolean":
            domain = ("false", "true")
            kind = KIND_CATEGORICAL
        else:
            domain = tuple(hp.values or ())
            kind = KIND_CATEGORICAL
        out.append(
            AxisDescriptor(
                axis_id=axis_id,
                kind=kind,
                parent=(slot_name, comp.name),
                domain=domain,
                x=0.0,
            )
        )
    return out


def _axes_unspaced(
    space: SearchSpace,
    expansion: ExpansionState,
    candidates: Sequence[PipelineCandidate],
) -> list[AxisDescriptor]:
    axes = [
        AxisDescriptor(
            axis_id=PIPELINE_ID_AXIS,
            kind=KIND_IDENTIFIER,
            parent=None,
            domain=tuple(c.id for c in candidates),
            x=0.0,
        )
    ]
    for slot in space.slots:
        axes.append(
            AxisDescriptor(
                axis_id=slot.name,
                kind=KIND_CATEGORICAL,
                parent=None,
                domain=slot.component_names(),
                x=0.0,
            )
        )
        expanded = expansion.component_for(slot.name)
        if expanded is not None:
            axes.extend(_conditional_axes(slot.name, slot.component(expanded)))
    for metric in METRIC_AXES:
        axes.append(
            AxisDescriptor(
                axis_id=metric,
                kind=KIND_NUMERIC,
                parent=None,
                domain=_metric_domain(metric, candidates),
                x=0.0,
            )
        )
    return axes


def top_level_axes(
    space: SearchSpace, candidates: Sequence[PipelineCandidate] = ()
) -> tuple[AxisDescriptor, ...]:
    """The always-visible axes: pipeline id, one per slot, four metrics.

    ``candidates`` fills the data-driven domains (pipeline ids, metric
    extrema); without them those domains are placeholders.
    """
    return _spread(_axes_unspaced(space, ExpansionState(), candidates))


def visible_axes(
    space: SearchSpace,
    expansion: ExpansionState,
    candidates: Sequence[PipelineCandidate] = (),
) -> tuple[AxisDescriptor, ...]:
    """Top-level axes plus spliced-in conditional axes, equally re-spaced."""
    _validate_expansion(space, expansion)
    return _spread(_axes_unspaced(space, expansion, candidates))


def normalize(value: Any, axis: AxisDescriptor) -> float:
    """Map a value onto [0, 1] along its axis.

    Numeric axes interpolate linearly (or in log space); a degenerate
    domain pins everything at 0.5.  Categorical axes, including the
    identifier axis and booleans, sit at band centers (i + 0.5) / k.
    """
    if isinstance(axis.domain, NumericDomain):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise DomainError(f"{axis.axis_id}: expected number, got {value!r}")
        dom = axis.domain
        if not (dom.lo <= value <= dom.hi):
            raise DomainError(
                f"{axis.axis_id}: {value!r} outside [{dom.lo}, {dom.hi}]"
            )
        if dom.lo == dom.hi:
            return 0.5
        if dom.scale == "log":
            lo, hi = math.log(dom.lo), math.log(dom.hi)
            y = (math.log(value) - lo) / (hi - lo)
        else:
            y = (value - dom.lo) / (dom.hi - dom.lo)
        # guard against an ulp of rounding past the ends
        return min(max(y, 0.0), 1.0)
    key = ("true" if value else "false") if isinstance(value, bool) else value
    try:
        index = axis.domain.index(key)
    except ValueError:
        raise DomainError(f"{axis.axis_id}: {value!r} not in axis domain") from None
    return (index + 0.5) / len(axis.domain)


def _applies(candidate: PipelineCandidate, axis: AxisDescriptor) -> bool:
    if axis.parent is None:
        return True
    slot, comp = axis.parent
    return candidate.structure.get(slot) == comp


def _value_for(candidate: PipelineCandidate, axis: AxisDescriptor) -> Any:
    if axis.parent is not None:
        slot, _ = axis.parent
        hp = axis.axis_id.rsplit("/", 1)[1]
        return candidate.assignment[slot][hp]
    if axis.axis_id == PIPELINE_ID_AXIS:
        return candidate.id
    if axis.axis_id in METRIC_AXES:
        return candidate.metrics.get(axis.axis_id)
    return candidate.structure[axis.axis_id]


def compute_layout(snapshot: RunSnapshot, expansion: ExpansionState) -> CpcLayout:
    """Full geometry for one snapshot under one expansion state."""
    if not snapshot.candidates:
        raise EmptySnapshot("layout requires at least one candidate")
    space = snapshot.space
    axes = visible_axes(space, expansion, snapshot.candidates)

    estimator_slot = space.estimator_slot
    polylines = []
    for cand in snapshot.candidates:
        vertices = tuple(
            (axis.x, normalize(_value_for(cand, axis), axis))
            for axis in axes
            if _applies(cand, axis)
        )
        polylines.append(
            Polyline(
                id=cand.id,
                vertices=vertices,
                color_index=color_for(cand.structure[estimator_slot.name], space),
            )
        )

    ticks = {
        axis.axis_id: tuple(
            (category, normalize(category, axis)) for category in axis.domain
        )
        for axis in axes
        if axis.kind in (KIND_CATEGORICAL, KIND_IDENTIFIER)
    }
    legend = {name: i for i, name in enumerate(estimator_slot.component_names())}

    return CpcLayout(
        axes=axes,
        polylines=tuple(polylines),
        ticks=ticks,
        legend=legend,
    )


def serialize_layout(layout: CpcLayout) -> dict:
    """Wire form consumed by the web UI and the SVG exporter."""

    def domain_doc(domain):
        if isinstance(domain, NumericDomain):
            return {"lo": domain.lo, "hi": domain.hi, "scale": domain.scale}
        return list(domain)

    return {
        "axes": [
            {
                "axis_id": ax.axis_id,
                "kind": ax.kind,
                "parent": list(ax.parent) if ax.parent else None,
                "domain": domain_doc(ax.domain),
                "x": ax.x,
            }
            for ax in layout.axes
        ],
        "polylines": [
            {
                "id": p.id,
                "vertices": [[x, y] for x, y in p.vertices],
                "color_index": p.color_index,
            }
            for p in layout.polylines
        ],
        "ticks": {
            axis_id: [[cat, y] for cat, y in pairs]
            for axis_id, pairs in layout.ticks.items()
        },
        "legend": dict(layout.legend),
    }
