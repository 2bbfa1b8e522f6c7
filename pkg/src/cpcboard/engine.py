"""Two-phase pipeline search over a response surface.

Phase one draws structures uniformly at random (without replacement while
enough distinct structures remain) and evaluates each at its default
hyperparameters.  Phase two repeatedly picks one of the top-k structures,
ranked by best holdout ROC AUC seen so far with ties broken by lower seq,
and evaluates a perturbation of that structure's best assignment.  The
whole run is a pure function of (space, config).
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Any, Callable

from .errors import ConfigError, ValidationError
from .rng import SplitMix64, derive_seed
from .space import (
    ComponentSpec,
    Configuration,
    ConstraintSpec,
    SearchSpace,
    Violation,
    count_structures,
    default_configuration,
    space_to_doc,
    validate_space,
)
from .surface import DEFAULT_T_MAX, evaluate, make_surface

PHASE_STRUCTURE = "structure"
PHASE_REFINEMENT = "refinement"

METRIC_NAMES = ("group_disparity", "prediction_time", "roc_auc_train", "roc_auc_holdout")


@dataclass(frozen=True)
class Metrics:
    group_disparity: float
    prediction_time: float
    roc_auc_train: float
    roc_auc_holdout: float

    def get(self, name: str) -> float:
        if name not in METRIC_NAMES:
            raise KeyError(name)
        return getattr(self, name)


@dataclass(frozen=True)
class PipelineCandidate:
    """One evaluated pipeline; ``id`` is "P<seq>" with seq starting at 1."""

    id: str
    structure: dict[str, str]
    assignment: dict[str, dict[str, Any]]
    metrics: Metrics
    phase: str
    seq: int

    @property
    def configuration(self) -> Configuration:
        return Configuration(structure=self.structure, assignment=self.assignment)


@dataclass(frozen=True)
class SearchConfig:
    seed: int
    n_structure: int
    n_refine: int
    top_k: int
    step_scale: float


@dataclass(frozen=True)
class RunSnapshot:
    run_id: str
    space: SearchSpace
    config: SearchConfig
    candidates: tuple[PipelineCandidate, ...]
    status: str  # running | completed


def config_violations(config: SearchConfig) -> list[Violation]:
    out = []
    if config.n_structure < 1:
        out.append(Violation("config.n_structure", "must be >= 1"))
    if config.n_refine < 0:
        out.append(Violation("config.n_refine", "must be >= 0"))
    if not (1 <= config.top_k <= max(config.n_structure, 1)):
        out.append(Violation("config.top_k", "must satisfy 1 <= top_k <= n_structure"))
    if not (0.0 < config.step_scale <= 1.0):
        out.append(Violation("config.step_scale", "must be in (0, 1]"))
    return out


def structure_at(space: SearchSpace, index: int) -> dict[str, str]:
    """Structure for a mixed-radix index; the last slot varies fastest."""
    choice: dict[str, str] = {}
    for slot in reversed(space.slots):
        n = len(slot.components)
        choice[slot.name] = slot.components[index % n].name
        index //= n
    return {slot.name: choice[slot.name] for slot in space.slots}


def _sample_distinct(rng: SplitMix64, n: int, k: int) -> list[int]:
    # partial Fisher-Yates over a virtual identity permutation; O(k) memory
    perm: dict[int, int] = {}
    out = []
    for i in range(k):
        j = i + rng.randrange(n - i)
        vi = perm.get(i, i)
        vj = perm.get(j, j)
        perm[i], perm[j] = vj, vi
        out.append(vj)
    return out


def perturb(
    assignment: dict[str, Any],
    component: ComponentSpec,
    rng: SplitMix64,
    step_scale: float,
) -> dict[str, Any]:
    """Jitter one component's assignment, staying inside every domain.

    Numeric values move by a uniform offset within +/- step_scale of the
    range (log-scale reals move in the log domain); categorical and boolean
    values are resampled uniformly with probability step_scale.
    """
    out: dict[str, Any] = {}
    for hp in component.hyperparameters:
        v = assignment[hp.name]
        if hp.kind == "integer":
            span = hp.max - hp.min
            offset = rng.uniform(-step_scale * span, step_scale * span)
            moved = int(math.floor(v + offset + 0.5))
            out[hp.name] = min(max(moved, hp.min), hp.max)
        elif hp.kind == "real":
            if hp.scale == "log":
                lo, hi = math.log(hp.min), math.log(hp.max)
                span = hi - lo
                moved = math.log(v) + rng.uniform(-step_scale * span, step_scale * span)
                # exp(log(x)) can land an ulp outside the bounds
                out[hp.name] = min(max(math.exp(min(max(moved, lo), hi)), hp.min), hp.max)
            else:
                span = hp.max - hp.min
                moved = v + rng.uniform(-step_scale * span, step_scale * span)
                out[hp.name] = min(max(moved, hp.min), hp.max)
        elif hp.kind == "boolean":
            if rng.random() < step_scale:
                out[hp.name] = bool(rng.randrange(2))
            else:
                out[hp.name] = v
        else:
            if rng.random() < step_scale:
                out[hp.name] = hp.values[rng.randrange(len(hp.values))]
            else:
                out[hp.name] = v
    return out


def satisfies(candidate: PipelineCandidate, constraints: list[ConstraintSpec]) -> bool:
    """True iff every constraint's metric is <= its threshold."""
    return all(candidate.metrics.get(c.metric) <= c.threshold for c in constraints)


def default_run_id(space: SearchSpace, config: SearchConfig) -> str:
    import json

    blob = json.dumps(space_to_doc(space), separators=(",", ":")) + "|" + repr(
        (config.seed, config.n_structure, config.n_refine, config.top_k, config.step_scale)
    )
    return "run-" + hashlib.sha256(blob.encode("utf-8")).hexdigest()[:12]


def run_search(
    space: SearchSpace,
    config: SearchConfig,
    sink: Callable[[PipelineCandidate], None] | None = None,
    run_id: str | None = None,
    t_max: float = DEFAULT_T_MAX,
) -> RunSnapshot:
    """Execute a full search, emitting candidates to ``sink`` in seq order."""
    bad = config_violations(config)
    if bad:
        raise ConfigError("; ".join(str(v) for v in bad))
    violations = validate_space(space)
    if violations:
        raise ValidationError(violations)

    surface = make_surface(space, config.seed, t_max=t_max)
    total = count_structures(space)
    rng_structures = SplitMix64(derive_seed(config.seed, "phase1"))
    rng_refine = SplitMix64(derive_seed(config.seed, "phase2"))

    candidates: list[PipelineCandidate] = []
    # structure key -> (best holdout auc, seq achieving it, its configuration)
    best: dict[tuple[str, ...], tuple[float, int, Configuration]] = {}

    def emit(conf: Configuration, phase: str) -> PipelineCandidate:
        metrics = evaluate(surface, conf)
        seq = len(candidates) + 1
        cand = PipelineCandidate(
            id=f"P{seq}",
            structure=dict(conf.structure),
            assignment={s: dict(v) for s, v in conf.assignment.items()},
            metrics=metrics,
            phase=phase,
            seq=seq,
        )
        candidates.append(cand)
        key = tuple(conf.structure[slot.name] for slot in space.slots)
        prev = best.get(key)
        if prev is None or metrics.roc_auc_holdout > prev[0]:
            best[key] = (metrics.roc_auc_holdout, seq, conf)
        if sink is not None:
            sink(cand)
        return cand

    if config.n_structure <= total:
        indices = _sample_distinct(rng_structures, total, config.n_structure)
    else:
        indices = [rng_structures.randrange(total) for _ in range(config.n_structure)]
    for index in indices:
        structure = structure_at(space, index)
        emit(default_configuration(space, structure), PHASE_STRUCTURE)

    for _ in range(config.n_refine):
        ranked = sorted(best.items(), key=lambda kv: (-kv[1][0], kv[1][1]))
        k = min(config.top_k, len(ranked))
        _, (_, _, base_conf) = ranked[rng_refine.randrange(k)]
        assignment = {}
        for slot in space.slots:
            comp = slot.component(base_conf.structure[slot.name])
            assignment[slot.name] = perturb(
                base_conf.assignment[slot.name], comp, rng_refine, config.step_scale
            )
        conf = Configuration(structure=dict(base_conf.structure), assignment=assignment)
        emit(conf, PHASE_REFINEMENT)

    return RunSnapshot(
        run_id=run_id if run_id is not None else default_run_id(space, config),
        space=space,
        config=config,
        candidates=tuple(candidates),
        status="completed",
    )
