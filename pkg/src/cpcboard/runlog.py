"""Append-only JSON-Lines run log.

Line 1 is a header record {"run_id", "seed", "space_hash", "config"};
every further line is one candidate.  Floats are written with 17
significant digits so each IEEE-754 double round-trips exactly and two
identical runs produce byte-identical files.  Each line is independently
valid JSON, so a log truncated at any line boundary stays parseable.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, TextIO

from .engine import Metrics, PipelineCandidate, RunSnapshot, SearchConfig
from .space import SearchSpace, space_to_doc


def format_number(v: float) -> str:
    return format(v, ".17g")


def dumps_compact(obj: Any) -> str:
    """Compact JSON with floats at 17 significant digits."""
    parts: list[str] = []
    _write(obj, parts)
    return "".join(parts)


def _write(obj: Any, parts: list[str]) -> None:
    if obj is None:
        parts.append("null")
    elif isinstance(obj, bool):
        parts.append("true" if obj else "false")
    elif isinstance(obj, float):
        parts.append(format_number(obj))
    elif isinstance(obj, int):
        parts.append(str(obj))
    elif isinstance(obj, str):
        parts.append(json.dumps(obj))
    elif isinstance(obj, dict):
        parts.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                parts.append(",")
            parts.append(json.dumps(str(k)))
            parts.append(":")
            _write(v, parts)
        parts.append("}")
    elif isinstance(obj, (list, tuple)):
        parts.append("[")
        for i, v in enumerate(obj):
            if i:
                parts.append(",")
            _write(v, parts)
        parts.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def space_hash(space: SearchSpace) -> str:
    blob = json.dumps(space_to_doc(space), separators=(",", ":"))
    return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def config_record(config: SearchConfig) -> dict:
    return {
        "seed": config.seed,
        "n_structure": config.n_structure,
        "n_refine": config.n_refine,
        "top_k": config.top_k,
        "step_scale": float(config.step_scale),
    }


def header_record(run_id: str, space: SearchSpace, config: SearchConfig) -> dict:
    return {
        "run_id": run_id,
        "seed": config.seed,
        "space_hash": space_hash(space),
        "config": config_record(config),
    }


def candidate_record(c: PipelineCandidate) -> dict:
    return {
        "seq": c.seq,
        "id": c.id,
        "phase": c.phase,
        "structure": dict(c.structure),
        "assignment": {slot: dict(vals) for slot, vals in c.assignment.items()},
        "metrics": {
            "group_disparity": c.metrics.group_disparity,
            "prediction_time": c.metrics.prediction_time,
            "roc_auc_train": c.metrics.roc_auc_train,
            "roc_auc_holdout": c.metrics.roc_auc_holdout,
        },
    }


class LogWriter:
    """Single appender for one run log; the header goes out on open."""

    def __init__(self, path: str | Path, run_id: str, space: SearchSpace, config: SearchConfig):
        self.path = Path(path)
        self._fh: TextIO = open(self.path, "w", encoding="utf-8", newline="\n")
        self._line(header_record(run_id, space, config))

    def _line(self, record: dict) -> None:
        self._fh.write(dumps_compact(record))
        self._fh.write("\n")
        self._fh.flush()

    def append(self, candidate: PipelineCandidate) -> None:
        self._line(candidate_record(candidate))

    def close(self) -> None:
        self._fh.close()

    def __enter__(self) -> "LogWriter":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def write_log(
    path: str | Path,
    run_id: str,
    space: SearchSpace,
    config: SearchConfig,
    candidates,
) -> None:
    with LogWriter(path, run_id, space, config) as writer:
        for cand in candidates:
            writer.append(cand)


def _coerce_assignment(space: SearchSpace, structure: dict, assignment: dict) -> dict:
    """Restore value types the text round-trip may have widened or narrowed."""
    out: dict[str, dict[str, Any]] = {}
    for slot in space.slots:
        comp = slot.component(structure[slot.name])
        vals = assignment.get(slot.name, {})
        coerced: dict[str, Any] = {}
        for hp in comp.hyperparameters:
            v = vals[hp.name]
            if hp.kind == "integer":
                coerced[hp.name] = int(v)
            elif hp.kind == "real":
                coerced[hp.name] = float(v)
            elif hp.kind == "boolean":
                coerced[hp.name] = bool(v)
            else:
                coerced[hp.name] = str(v)
        out[slot.name] = coerced
    return out


def candidate_from_record(record: dict, space: SearchSpace) -> PipelineCandidate:
    metrics = record["metrics"]
    structure = dict(record["structure"])
    return PipelineCandidate(
        id=record["id"],
        structure=structure,
        assignment=_coerce_assignment(space, structure, record["assignment"]),
        metrics=Metrics(
            group_disparity=float(metrics["group_disparity"]),
            prediction_time=float(metrics["prediction_time"]),
            roc_auc_train=float(metrics["roc_auc_train"]),
            roc_auc_holdout=float(metrics["roc_auc_holdout"]),
        ),
        phase=record["phase"],
        seq=int(record["seq"]),
    )


def read_log(path: str | Path) -> tuple[dict, list[dict]]:
    """Raw header and candidate records, one parsed JSON object per line."""
    header: dict | None = None
    records: list[dict] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            record = json.loads(line)
            if header is None:
                header = record
            else:
                records.append(record)
    if header is None:
        raise ValueError(f"{path}: empty run log")
    return header, records


def snapshot_from_log(path: str | Path, space: SearchSpace, status: str = "completed") -> RunSnapshot:
    """Rebuild a snapshot from a log file plus the space it was run against."""
    header, records = read_log(path)
    cfg = header["config"]
    config = SearchConfig(
        seed=int(cfg["seed"]),
        n_structure=int(cfg["n_structure"]),
        n_refine=int(cfg["n_refine"]),
        top_k=int(cfg["top_k"]),
        step_scale=float(cfg["step_scale"]),
    )
    candidates = tuple(candidate_from_record(r, space) for r in records)
    return RunSnapshot(
        run_id=header["run_id"],
        space=space,
        config=config,
        candidates=candidates,
        status=status,
    )
