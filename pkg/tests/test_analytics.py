from __future__ import annotations

import dataclasses
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpcboard.analytics import (
    best_estimator,
    component_frequency,
    constrained_pipelines,
    count_pipelines,
    count_steps,
    distinct_components,
    hyperparameter_count,
    influence,
    leaderboard,
    metric_of,
    metric_spread,
)
from cpcboard.engine import Metrics, PipelineCandidate, RunSnapshot, SearchConfig
from cpcboard.errors import (
    EmptySnapshot,
    InsufficientData,
    UnknownComponent,
    UnknownMetric,
    UnknownPipeline,
    UnknownSlot,
)
from cpcboard.space import ConstraintSpec, parse_space, space_to_doc

from . import oracle
from .test_space import MINIMAL

SRP = "Sparse Random Projection"
QDA = "Quadratic Discriminant Analysis"


def _mini_snapshot(holdouts, estimators=None, space=None):
    """Tiny hand-built snapshot for tie and edge cases."""
    space = space or parse_space(MINIMAL)
    est_slot = space.slots[-1].name
    cands = []
    for i, h in enumerate(holdouts, start=1):
        est = estimators[i - 1] if estimators else space.slots[-1].components[0].name
        structure = {s.name: s.components[0].name for s in space.slots}
        structure[est_slot] = est
        cands.append(
            PipelineCandidate(
                id=f"P{i}",
                structure=structure,
                assignment={s.name: {} for s in space.slots},
                metrics=Metrics(
                    group_disparity=0.1,
                    prediction_time=0.5,
                    roc_auc_train=min(h + 0.01, 1.0),
                    roc_auc_holdout=h,
                ),
                phase="structure",
                seq=i,
            )
        )
    config = SearchConfig(seed=0, n_structure=len(cands) or 1, n_refine=0, top_k=1, step_scale=0.5)
    return RunSnapshot(
        run_id="mini", space=space, config=config, candidates=tuple(cands), status="completed"
    )


def test_leaderboard_empty():
    assert leaderboard(_mini_snapshot([])) == []


def test_leaderboard_orders_two_candidates():
    rows = leaderboard(_mini_snapshot([0.7, 0.9]))
    assert [(r.rank, r.id) for r in rows] == [(1, "P2"), (2, "P1")]


def test_leaderboard_tie_breaks_by_seq():
    rows = leaderboard(_mini_snapshot([0.8, 0.9, 0.9]))
    assert [r.id for r in rows] == ["P2", "P3", "P1"]
    assert [r.rank for r in rows] == [1, 2, 3]


def test_leaderboard_matches_sort_oracle(demo_snapshot, demo_log):
    _, cands = oracle.read_lines(demo_log)
    expected = oracle.leaderboard_ids(cands)
    rows = leaderboard(demo_snapshot)
    assert [r.id for r in rows] == expected
    assert [r.rank for r in rows] == list(range(1, 25))


def test_counts_and_distinct(demo_snapshot, default_space):
    assert count_pipelines(demo_snapshot) == 24
    assert count_steps(default_space) == 3
    assert distinct_components(demo_snapshot, "Transformer 1") == 5
    assert distinct_components(demo_snapshot, "Transformer 2") == 5
    assert distinct_components(demo_snapshot, "Estimator") == 4
    with pytest.raises(UnknownSlot):
        distinct_components(demo_snapshot, "Nope")


def test_empty_snapshot_counts():
    snap = _mini_snapshot([])
    assert count_pipelines(snap) == 0
    assert distinct_components(snap, "Estimator") == 0


def test_metric_of_exact_and_errors(demo_snapshot):
    cand = demo_snapshot.candidates[4]
    assert metric_of(demo_snapshot, cand.id, "group_disparity") == cand.metrics.group_disparity
    with pytest.raises(UnknownPipeline):
        metric_of(demo_snapshot, "P999", "group_disparity")
    with pytest.raises(UnknownMetric):
        metric_of(demo_snapshot, cand.id, "accuracy")


def test_metric_of_matches_log_records(demo_snapshot, demo_log):
    _, cands = oracle.read_lines(demo_log)
    for record in cands:
        for metric in ("group_disparity", "prediction_time", "roc_auc_train", "roc_auc_holdout"):
            assert metric_of(demo_snapshot, record["id"], metric) == record["metrics"][metric]


def test_best_estimator_single_and_pairwise():
    snap = _mini_snapshot([0.9], estimators=["Only"])
    assert best_estimator(snap, "roc_auc_train") == "Only"
    with pytest.raises(EmptySnapshot):
        best_estimator(_mini_snapshot([]), "roc_auc_train")


def test_best_estimator_matches_group_oracle(demo_snapshot, demo_log):
    header, cands = oracle.read_lines(demo_log)
    for metric in ("roc_auc_train", "roc_auc_holdout", "group_disparity", "prediction_time"):
        assert best_estimator(demo_snapshot, metric) == oracle.best_estimator(
            cands, metric, "Estimator"
        )


def test_best_estimator_mean_aggregate(demo_snapshot):
    # mean aggregation is available behind the flag, not the default
    assert best_estimator(demo_snapshot, "roc_auc_holdout", aggregate="mean") in {
        c.structure["Estimator"] for c in demo_snapshot.candidates
    }
    with pytest.raises(ValueError):
        best_estimator(demo_snapshot, "roc_auc_holdout", aggregate="median")


def test_constrained_pipelines_trivia(demo_snapshot):
    all_ids = [c.id for c in demo_snapshot.candidates]
    assert constrained_pipelines(demo_snapshot, []) == all_ids
    impossible = [ConstraintSpec("prediction_time", 1e-9)]
    assert constrained_pipelines(demo_snapshot, impossible) == []


def test_constrained_matches_oracle(demo_snapshot, default_space, demo_log):
    _, cands = oracle.read_lines(demo_log)
    thresholds = {c.metric: c.threshold for c in default_space.constraints}
    assert constrained_pipelines(demo_snapshot, default_space.constraints) == oracle.constrained(
        cands, thresholds
    )


def test_component_frequency(demo_snapshot, demo_log, default_space):
    _, cands = oracle.read_lines(demo_log)
    doc = space_to_doc(default_space)
    for role in ("transformer", "estimator"):
        assert component_frequency(demo_snapshot, role) == oracle.component_frequency(
            cands, role, doc
        )
    transformer_total = sum(n for _, n in component_frequency(demo_snapshot, "transformer"))
    assert transformer_total == 2 * 24
    assert component_frequency(_mini_snapshot([]), "estimator") == []
    with pytest.raises(ValueError):
        component_frequency(demo_snapshot, "cook")


def test_hyperparameter_counts(default_space):
    assert hyperparameter_count(default_space, SRP) == 5
    assert hyperparameter_count(default_space, QDA) == 5
    with pytest.raises(UnknownComponent):
        hyperparameter_count(default_space, "Nope")


def test_hyperparameter_count_zero():
    space = parse_space(MINIMAL)
    assert hyperparameter_count(space, "Only") == 0


# -- influence ----------------------------------------------------------------

LINEAR_SPACE = parse_space(
    json.dumps(
        {
            "slots": [
                {
                    "name": "Estimator",
                    "role": "estimator",
                    "components": [
                        {
                            "name": "Only",
                            "role": "estimator",
                            "hyperparameters": [
                                {"name": "a", "kind": "real", "min": 0.0, "max": 1.0, "scale": "linear", "default": 0.0},
                                {"name": "b", "kind": "real", "min": 0.0, "max": 1.0, "scale": "linear", "default": 0.5},
                            ],
                        }
                    ],
                }
            ],
            "constraints": [],
        }
    )
)


def _linear_snapshot(metric_from_a=True, constant_metric=False):
    cands = []
    for i, a in enumerate((0.1, 0.4, 0.6, 0.9), start=1):
        h = 0.75 if constant_metric else (0.5 + 0.4 * a if metric_from_a else 0.75)
        cands.append(
            PipelineCandidate(
                id=f"P{i}",
                structure={"Estimator": "Only"},
                assignment={"Estimator": {"a": a, "b": 0.5}},
                metrics=Metrics(0.1, 0.5, min(h + 0.01, 1.0), h),
                phase="structure",
                seq=i,
            )
        )
    config = SearchConfig(seed=0, n_structure=4, n_refine=0, top_k=1, step_scale=0.5)
    return RunSnapshot(
        run_id="lin", space=LINEAR_SPACE, config=config, candidates=tuple(cands), status="completed"
    )


def test_influence_perfect_linear_relation_wins():
    report = influence(_linear_snapshot(), "Only", "roc_auc_holdout")
    assert report.winner == "a"
    assert report.scores["a"] == pytest.approx(1.0)
    assert report.scores["b"] == 0.0


def test_influence_zero_variance_all_scores_zero():
    report = influence(_linear_snapshot(constant_metric=True), "Only", "roc_auc_holdout")
    assert report.scores == {"a": 0.0, "b": 0.0}
    assert report.winner == "a"  # ties go to the first declared


def test_influence_requires_two_users():
    snap = _linear_snapshot()
    single = dataclasses.replace(snap, candidates=snap.candidates[:1])
    with pytest.raises(InsufficientData):
        influence(single, "Only", "roc_auc_holdout")


def test_influence_matches_independent_oracle(demo_snapshot, demo_log, default_space):
    _, cands = oracle.read_lines(demo_log)
    doc = space_to_doc(default_space)
    for component in (SRP, QDA, "Logistic Regression", "PCA"):
        usage = sum(
            1
            for c in demo_snapshot.candidates
            for s in demo_snapshot.space.slots
            if c.structure[s.name] == component
        )
        if usage < 2:
            continue
        for metric in ("roc_auc_holdout", "prediction_time"):
            expected_scores, expected_winner = oracle.influence(cands, doc, component, metric)
            report = influence(demo_snapshot, component, metric)
            for name, score in report.scores.items():
                assert score == pytest.approx(expected_scores[name], abs=1e-12)
                assert 0.0 <= score <= 1.0
            top = max(expected_scores.values())
            assert top - expected_scores[report.winner] <= 1e-12
            runner_up = max(
                (v for k, v in expected_scores.items() if k != expected_winner),
                default=top,
            )
            if top - runner_up > 2e-12:
                assert report.winner == expected_winner


@given(st.floats(min_value=0.1, max_value=50.0), st.floats(min_value=-5.0, max_value=5.0))
@settings(max_examples=30, deadline=None)
def test_influence_invariant_under_affine_metric_rescale(scale, shift):
    base = influence(_linear_snapshot(), "Only", "roc_auc_holdout").scores
    snap = _linear_snapshot()
    rescaled = dataclasses.replace(
        snap,
        candidates=tuple(
            dataclasses.replace(
                c,
                metrics=Metrics(
                    c.metrics.group_disparity,
                    c.metrics.prediction_time,
                    c.metrics.roc_auc_train,
                    scale * c.metrics.roc_auc_holdout + shift,
                ),
            )
            for c in snap.candidates
        ),
    )
    scores = influence(rescaled, "Only", "roc_auc_holdout").scores
    for name in base:
        assert scores[name] == pytest.approx(base[name], abs=1e-9)


# -- spread --------------------------------------------------------------------

def test_spread_single_candidate():
    best, worst, diff = metric_spread(_mini_snapshot([0.8]), "roc_auc_holdout")
    assert (best, worst, diff) == (0.8, 0.8, 0.0)


def test_spread_matches_minmax_oracle(demo_snapshot, demo_log):
    _, cands = oracle.read_lines(demo_log)
    for metric in ("roc_auc_holdout", "prediction_time"):
        assert metric_spread(demo_snapshot, metric) == oracle.spread(cands, metric)
    with pytest.raises(EmptySnapshot):
        metric_spread(_mini_snapshot([]), "roc_auc_holdout")
