"""Synthetic response surface standing in for real model training.

Every metric of a configuration is

    clamp(base(structure) + sum of hyperparameter contributions
          + pairwise structure interaction + configuration-keyed jitter)

Numeric hyperparameters contribute a quadratic bump w * (1 - (x - opt)^2)
with the value x and the hidden optimum opt both normalized to [0, 1], so
moving a value toward its optimum visibly raises the score.  Categorical
and boolean values carry a fixed per-value offset in [0, w].  Training
ROC AUC adds a non-negative optimism term on top of the holdout score.
Everything derives from (space, seed); evaluation is a pure function.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any

from .errors import IllegalConfiguration
from .rng import derive_seed, unit_hash
from .space import Configuration, HyperparameterSpec, SearchSpace

HOLDOUT = "roc_auc_holdout"
TRAIN = "roc_auc_train"
DISPARITY = "group_disparity"
TIME = "prediction_time"

# metrics that receive bases, contributions, interactions and jitter directly
_DIRECT = (HOLDOUT, DISPARITY, TIME)

DEFAULT_T_MAX = 10.0
_TIME_FLOOR = 0.001


@dataclass(frozen=True)
class HpTerm:
    """Per-hyperparameter surface term.

    Numeric kinds use ``optimum`` plus per-metric curvature ``weights``;
    categorical/boolean kinds use per-value ``offsets`` instead.
    """

    weights: dict[str, float]
    optimum: float | None = None
    offsets: dict[str, dict[str, float]] | None = None


@dataclass(frozen=True)
class ResponseSurface:
    space: SearchSpace
    noise_seed: int
    t_max: float
    bases: dict[tuple[str, ...], dict[str, float]]
    hp_terms: dict[tuple[str, str, str], HpTerm]
    interaction: dict[str, float] = field(
        default_factory=lambda: dict(_DEFAULT_INTERACTION)
    )
    jitter: dict[str, float] = field(default_factory=lambda: dict(_DEFAULT_JITTER))
    optimism_jitter: float = 0.02


_DEFAULT_INTERACTION = {HOLDOUT: 0.015, DISPARITY: 0.01, TIME: 0.05}
_DEFAULT_JITTER = {HOLDOUT: 0.004, DISPARITY: 0.004, TIME: 0.01}


def enumerate_structures(space: SearchSpace) -> list[tuple[str, ...]]:
    """All structures in declaration order, last slot varying fastest."""
    pools = [slot.component_names() for slot in space.slots]
    return [tuple(combo) for combo in itertools.product(*pools)]


def _value_key(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def _hp_values(hp: HyperparameterSpec) -> tuple[str, ...]:
    if hp.kind == "boolean":
        return ("false", "true")
    return hp.values or ()


def make_surface(space: SearchSpace, seed: int, t_max: float = DEFAULT_T_MAX) -> ResponseSurface:
    """Deterministic surface for (space, seed); same inputs, same surface."""
    noise = derive_seed(seed, "surface")

    bases: dict[tuple[str, ...], dict[str, float]] = {}
    for key in enumerate_structures(space):
        hold = 0.55 + 0.23 * unit_hash(noise, "base", HOLDOUT, *key)
        bases[key] = {
            HOLDOUT: hold,
            TRAIN: hold + 0.05 * unit_hash(noise, "base", TRAIN, *key),
            DISPARITY: 0.05 + 0.55 * unit_hash(noise, "base", DISPARITY, *key),
            TIME: 0.02 + 3.0 * unit_hash(noise, "base", TIME, *key) ** 2,
        }

    # each component spends a fixed per-metric weight budget across its
    # hyperparameters, so deep components cannot push totals past the clamps
    budget = {HOLDOUT: 0.06, DISPARITY: 0.04, TIME: 0.30}
    hp_terms: dict[tuple[str, str, str], HpTerm] = {}
    for slot in space.slots:
        for comp in slot.components:
            if not comp.hyperparameters:
                continue
            raw = {
                hp.name: {
                    m: 0.2 + 0.8 * unit_hash(noise, "w", m, slot.name, comp.name, hp.name)
                    for m in _DIRECT
                }
                for hp in comp.hyperparameters
            }
            sums = {m: sum(raw[hp.name][m] for hp in comp.hyperparameters) for m in _DIRECT}
            for hp in comp.hyperparameters:
                tkey = (slot.name, comp.name, hp.name)
                weights = {m: budget[m] * raw[hp.name][m] / sums[m] for m in _DIRECT}
                if hp.is_numeric:
                    hp_terms[tkey] = HpTerm(
                        weights=weights,
                        optimum=unit_hash(noise, "opt", *tkey),
                    )
                else:
                    offsets = {
                        value: {
                            m: weights[m] * unit_hash(noise, "cat", m, *tkey, value)
                            for m in _DIRECT
                        }
                        for value in _hp_values(hp)
                    }
                    hp_terms[tkey] = HpTerm(weights=weights, offsets=offsets)

    return ResponseSurface(
        space=space,
        noise_seed=noise,
        t_max=t_max,
        bases=bases,
        hp_terms=hp_terms,
    )


def normalized_hp_value(hp: HyperparameterSpec, value: Any) -> float:
    """Numeric hyperparameter value mapped onto [0, 1] over its declared range."""
    if hp.kind == "real" and hp.scale == "log":
        lo, hi = math.log(hp.min), math.log(hp.max)
        return (math.log(value) - lo) / (hi - lo)
    return (value - hp.min) / (hp.max - hp.min)


def canonical_configuration(space: SearchSpace, config: Configuration) -> str:
    """Stable text key of a configuration, used to seed per-configuration jitter."""
    parts = []
    for slot in space.slots:
        comp_name = config.structure[slot.name]
        comp = slot.component(comp_name)
        vals = config.assignment.get(slot.name, {})
        bits = [f"{slot.name}={comp_name}"]
        for hp in comp.hyperparameters:
            v = vals[hp.name]
            if isinstance(v, bool):
                s = "true" if v else "false"
            elif isinstance(v, float):
                s = format(v, ".17g")
            else:
                s = str(v)
            bits.append(f"{hp.name}={s}")
        parts.append(";".join(bits))
    return "||".join(parts)


def _check_value(slot: str, comp: str, hp: HyperparameterSpec, value: Any) -> None:
    where = f"{slot}/{comp}/{hp.name}"
    if hp.kind == "boolean":
        if not isinstance(value, bool):
            raise IllegalConfiguration(f"{where}: expected boolean, got {value!r}")
    elif hp.kind == "categorical":
        if value not in (hp.values or ()):
            raise IllegalConfiguration(f"{where}: {value!r} not among declared values")
    elif hp.kind == "integer":
        if not isinstance(value, int) or isinstance(value, bool):
            raise IllegalConfiguration(f"{where}: expected integer, got {value!r}")
        if not (hp.min <= value <= hp.max):
            raise IllegalConfiguration(f"{where}: {value} outside [{hp.min}, {hp.max}]")
    else:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise IllegalConfiguration(f"{where}: expected number, got {value!r}")
        if not (hp.min <= value <= hp.max):
            raise IllegalConfiguration(f"{where}: {value} outside [{hp.min}, {hp.max}]")


def validate_configuration(space: SearchSpace, config: Configuration) -> None:
    """Raise IllegalConfiguration unless every value sits in its declared domain."""
    for slot in space.slots:
        comp_name = config.structure.get(slot.name)
        if comp_name is None or comp_name not in slot.component_names():
            raise IllegalConfiguration(
                f"{slot.name}: unknown component {comp_name!r}"
            )
        comp = slot.component(comp_name)
        vals = config.assignment.get(slot.name, {})
        declared = {hp.name for hp in comp.hyperparameters}
        extra = set(vals) - declared
        if extra:
            raise IllegalConfiguration(
                f"{slot.name}/{comp_name}: undeclared hyperparameter(s) {sorted(extra)}"
            )
        for hp in comp.hyperparameters:
            if hp.name not in vals:
                raise IllegalConfiguration(
                    f"{slot.name}/{comp_name}/{hp.name}: missing value"
                )
            _check_value(slot.name, comp_name, hp, vals[hp.name])


def _clamp(v: float, lo: float, hi: float) -> float:
    return lo if v < lo else hi if v > hi else v


def evaluate(surface: ResponseSurface, config: Configuration):
    """Score a configuration on all four metrics (pure, deterministic).

    Returns a Metrics instance; import happens lazily to avoid a cycle with
    the engine module, which owns the candidate types.
    """
    from .engine import Metrics

    space = surface.space
    validate_configuration(space, config)

    key = tuple(config.structure[slot.name] for slot in space.slots)
    base = surface.bases[key]
    canon = canonical_configuration(space, config)

    totals = {m: base[m] for m in _DIRECT}

    for slot in space.slots:
        comp = slot.component(config.structure[slot.name])
        vals = config.assignment[slot.name]
        for hp in comp.hyperparameters:
            term = surface.hp_terms[(slot.name, comp.name, hp.name)]
            if term.offsets is not None:
                offs = term.offsets[_value_key(vals[hp.name])]
                for m in _DIRECT:
                    totals[m] += offs[m]
            else:
                x = normalized_hp_value(hp, vals[hp.name])
                d = x - term.optimum
                bump = 1.0 - d * d
                for m in _DIRECT:
                    totals[m] += term.weights[m] * bump

    names = [slot.name for slot in space.slots]
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            pair = (names[i], key[i], names[j], key[j])
            for m in _DIRECT:
                u = unit_hash(surface.noise_seed, "pair", m, *pair)
                totals[m] += surface.interaction[m] * (2.0 * u - 1.0)

    for m in _DIRECT:
        u = unit_hash(surface.noise_seed, "jit", m, canon)
        totals[m] += surface.jitter[m] * (2.0 * u - 1.0)

    holdout = _clamp(totals[HOLDOUT], 0.5, 1.0)
    disparity = _clamp(totals[DISPARITY], 0.0, 1.0)
    pred_time = _clamp(totals[TIME], _TIME_FLOOR, surface.t_max)
    optimism = (base[TRAIN] - base[HOLDOUT]) + surface.optimism_jitter * unit_hash(
        surface.noise_seed, "optimism", canon
    )
    train = _clamp(holdout + optimism, holdout, 1.0)

    return Metrics(
        group_disparity=disparity,
        prediction_time=pred_time,
        roc_auc_train=train,
        roc_auc_holdout=holdout,
    )
