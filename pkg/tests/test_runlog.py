from __future__ import annotations

import json

import pytest

from cpcboard.engine import SearchConfig, run_search
from cpcboard.runlog import (
    dumps_compact,
    format_number,
    read_log,
    snapshot_from_log,
    space_hash,
    write_log,
)

from .conftest import DEMO_CONFIG


def test_float_formatting_round_trips_exactly():
    for v in (0.1, 1.0 / 3.0, 1e-12, 123456.789, 0.9999999999999999, 1e22):
        assert json.loads(format_number(v)) == v
    assert format_number(0.1) == "0.10000000000000001"


def test_dumps_compact_shapes():
    assert dumps_compact({"a": 1, "b": True, "c": None}) == '{"a":1,"b":true,"c":null}'
    assert dumps_compact([1.5, "x"]) == '[1.5,"x"]'
    with pytest.raises(TypeError):
        dumps_compact(object())


def test_log_round_trip_rebuilds_snapshot(tmp_path, default_space, demo_snapshot):
    path = tmp_path / "run.jsonl"
    write_log(path, demo_snapshot.run_id, default_space, DEMO_CONFIG, demo_snapshot.candidates)
    rebuilt = snapshot_from_log(path, default_space)
    assert rebuilt == demo_snapshot


def test_header_fields_exact(tmp_path, default_space, demo_snapshot):
    path = tmp_path / "run.jsonl"
    write_log(path, demo_snapshot.run_id, default_space, DEMO_CONFIG, demo_snapshot.candidates)
    header, records = read_log(path)
    assert list(header) == ["run_id", "seed", "space_hash", "config"]
    assert header["seed"] == 42
    assert header["space_hash"] == space_hash(default_space)
    assert len(records) == 24
    assert list(records[0]) == ["seq", "id", "phase", "structure", "assignment", "metrics"]
    assert list(records[0]["metrics"]) == [
        "group_disparity",
        "prediction_time",
        "roc_auc_train",
        "roc_auc_holdout",
    ]


def test_every_line_prefix_is_parseable(tmp_path, default_space, demo_snapshot):
    path = tmp_path / "run.jsonl"
    write_log(path, demo_snapshot.run_id, default_space, DEMO_CONFIG, demo_snapshot.candidates)
    lines = path.read_text("utf-8").splitlines()
    for k in range(1, len(lines) + 1):
        trunc = tmp_path / "trunc.jsonl"
        trunc.write_text("\n".join(lines[:k]) + "\n", "utf-8")
        header, records = read_log(trunc)
        assert header["run_id"] == demo_snapshot.run_id
        assert len(records) == k - 1


def test_assignment_value_types_survive(tmp_path, default_space):
    config = SearchConfig(seed=9, n_structure=8, n_refine=12, top_k=2, step_scale=0.9)
    snap = run_search(default_space, config)
    path = tmp_path / "run.jsonl"
    write_log(path, snap.run_id, default_space, config, snap.candidates)
    rebuilt = snapshot_from_log(path, default_space)
    for before, after in zip(snap.candidates, rebuilt.candidates):
        for slot, vals in before.assignment.items():
            for hp, v in vals.items():
                restored = after.assignment[slot][hp]
                assert type(restored) is type(v)
                assert restored == v
