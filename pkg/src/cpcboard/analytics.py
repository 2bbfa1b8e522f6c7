"""Leaderboard and snapshot queries.

Everything here is a pure scan over an immutable snapshot.  The
leaderboard sorts by holdout ROC AUC descending (ties broken by lower
seq) with dense 1-based ranks.  Influence scores are |Pearson
correlation| for numeric hyperparameters and the between-group share of
variance for categorical/boolean ones, both in [0, 1] and invariant
under positive affine rescaling of the metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .engine import (
    METRIC_NAMES,
    PipelineCandidate,
    RunSnapshot,
    satisfies,
)
from .errors import (
    EmptySnapshot,
    InsufficientData,
    UnknownComponent,
    UnknownMetric,
    UnknownPipeline,
    UnknownSlot,
)
from .layout import color_for
from .space import ConstraintSpec, SearchSpace
from .surface import normalized_hp_value


@dataclass(frozen=True)
class LeaderboardRow:
    rank: int
    id: str
    roc_auc_holdout: float
    group_disparity: float
    prediction_time: float
    structure: dict[str, str]
    color_index: int


@dataclass(frozen=True)
class InfluenceReport:
    """Per-hyperparameter influence scores plus the winning name (ties go
    to the earliest declared hyperparameter)."""

    scores: dict[str, float]
    winner: str | None


def leaderboard(snapshot: RunSnapshot) -> list[LeaderboardRow]:
    space = snapshot.space
    ordered = sorted(
        snapshot.candidates, key=lambda c: (-c.metrics.roc_auc_holdout, c.seq)
    )
    estimator_slot = space.estimator_slot.name
    return [
        LeaderboardRow(
            rank=i + 1,
            id=c.id,
            roc_auc_holdout=c.metrics.roc_auc_holdout,
            group_disparity=c.metrics.group_disparity,
            prediction_time=c.metrics.prediction_time,
            structure=dict(c.structure),
            color_index=color_for(c.structure[estimator_slot], space),
        )
        for i, c in enumerate(ordered)
    ]


def count_pipelines(snapshot: RunSnapshot) -> int:
    return len(snapshot.candidates)


def count_steps(space: SearchSpace) -> int:
    return len(space.slots)


def distinct_components(snapshot: RunSnapshot, slot: str) -> int:
    """How many distinct components actually appeared on a slot."""
    snapshot.space.slot(slot)  # raises UnknownSlot
    return len({c.structure[slot] for c in snapshot.candidates})


def metric_of(snapshot: RunSnapshot, pipeline_id: str, metric: str) -> float:
    if metric not in METRIC_NAMES:
        raise UnknownMetric(metric)
    for c in snapshot.candidates:
        if c.id == pipeline_id:
            return c.metrics.get(metric)
    raise UnknownPipeline(pipeline_id)


def best_estimator(snapshot: RunSnapshot, metric: str, aggregate: str = "max") -> str:
    """Estimator whose candidates do best on a metric.

    ``aggregate`` is "max" (leaderboard-style: the estimator of the single
    best candidate per group) or "mean"; ties go to the estimator whose
    deciding candidate arrived first.
    """
    if metric not in METRIC_NAMES:
        raise UnknownMetric(metric)
    if not snapshot.candidates:
        raise EmptySnapshot("no candidates")
    if aggregate not in ("max", "mean"):
        raise ValueError(f"unknown aggregate {aggregate!r}")
    slot = snapshot.space.estimator_slot.name
    groups: dict[str, list[PipelineCandidate]] = {}
    for c in snapshot.candidates:
        groups.setdefault(c.structure[slot], []).append(c)

    scored = []
    for name, cands in groups.items():
        if aggregate == "max":
            best = min(cands, key=lambda c: (-c.metrics.get(metric), c.seq))
            scored.append((name, best.metrics.get(metric), best.seq))
        else:
            mean = math.fsum(c.metrics.get(metric) for c in cands) / len(cands)
            scored.append((name, mean, min(c.seq for c in cands)))
    scored.sort(key=lambda t: (-t[1], t[2]))
    return scored[0][0]


def constrained_pipelines(
    snapshot: RunSnapshot, constraints: Sequence[ConstraintSpec]
) -> list[str]:
    """Ids (seq order) of candidates meeting every constraint."""
    return [
        c.id for c in snapshot.candidates if satisfies(c, list(constraints))
    ]


def component_frequency(snapshot: RunSnapshot, role: str) -> list[tuple[str, int]]:
    """Occurrence counts across all slots of a role, most frequent first.

    A transformer used on two slots by one candidate counts twice.  Ties
    keep first-declaration order; unobserved components are omitted.
    """
    if role not in ("transformer", "estimator"):
        raise ValueError(f"unknown role {role!r}")
    slots = [s for s in snapshot.space.slots if s.role == role]
    declared: list[str] = []
    for slot in slots:
        for name in slot.component_names():
            if name not in declared:
                declared.append(name)
    counts = {name: 0 for name in declared}
    for c in snapshot.candidates:
        for slot in slots:
            counts[c.structure[slot.name]] += 1
    observed = [(name, counts[name]) for name in declared if counts[name] > 0]
    observed.sort(key=lambda t: (-t[1], declared.index(t[0])))
    return observed


def hyperparameter_count(space: SearchSpace, component: str) -> int:
    """Declared hyperparameter count of a component (first occurrence wins
    when a name appears in several slots)."""
    _, comp = space.find_component(component)
    return len(comp.hyperparameters)


def _usages(snapshot: RunSnapshot, component: str) -> list[tuple[str, PipelineCandidate]]:
    """Every (slot, candidate) pair where the candidate uses the component."""
    out = []
    for c in snapshot.candidates:
        for slot in snapshot.space.slots:
            if c.structure[slot.name] == component:
                out.append((slot.name, c))
    return out


def _abs_pearson(xs: list[float], ys: list[float]) -> float:
    if min(xs) == max(xs) or min(ys) == max(ys):
        return 0.0
    n = len(xs)
    mx = math.fsum(xs) / n
    my = math.fsum(ys) / n
    cov = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = math.fsum((x - mx) ** 2 for x in xs)
    vy = math.fsum((y - my) ** 2 for y in ys)
    r = abs(cov / math.sqrt(vx * vy))
    return min(r, 1.0)


def _variance_ratio(groups: dict[str, list[float]], ys: list[float]) -> float:
    if min(ys) == max(ys):
        return 0.0
    n = len(ys)
    my = math.fsum(ys) / n
    total = math.fsum((y - my) ** 2 for y in ys)
    between = math.fsum(
        len(g) * (math.fsum(g) / len(g) - my) ** 2 for g in groups.values()
    )
    return min(max(between / total, 0.0), 1.0)


def influence(snapshot: RunSnapshot, component: str, metric: str) -> InfluenceReport:
    """Which hyperparameter of a component moved a metric the most."""
    if metric not in METRIC_NAMES:
        raise UnknownMetric(metric)
    _, comp = snapshot.space.find_component(component)
    usages = _usages(snapshot, component)
    if len(usages) < 2:
        raise InsufficientData(
            f"influence needs >= 2 candidates using {component!r}, found {len(usages)}"
        )
    ys = [c.metrics.get(metric) for _, c in usages]
    scores: dict[str, float] = {}
    for hp in comp.hyperparameters:
        values = [c.assignment[slot][hp.name] for slot, c in usages]
        if hp.is_numeric:
            xs = [normalized_hp_value(hp, v) for v in values]
            scores[hp.name] = _abs_pearson(xs, ys)
        else:
            groups: dict[str, list[float]] = {}
            for v, y in zip(values, ys):
                key = ("true" if v else "false") if isinstance(v, bool) else str(v)
                groups.setdefault(key, []).append(y)
            scores[hp.name] = _variance_ratio(groups, ys)
    winner = None
    if comp.hyperparameters:
        best = max(scores.values())
        for hp in comp.hyperparameters:
            if scores[hp.name] == best:
                winner = hp.name
                break
    return InfluenceReport(scores=scores, winner=winner)


def metric_spread(snapshot: RunSnapshot, metric: str) -> tuple[float, float, float]:
    """(best, worst, best - worst) of a metric over the snapshot."""
    if metric not in METRIC_NAMES:
        raise UnknownMetric(metric)
    if not snapshot.candidates:
        raise EmptySnapshot("no candidates")
    values = [c.metrics.get(metric) for c in snapshot.candidates]
    return max(values), min(values), max(values) - min(values)
