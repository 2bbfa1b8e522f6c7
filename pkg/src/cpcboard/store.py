"""Run registry: starts search workers, appends run logs, fans out ordered
events, and serves immutable snapshots.

One writer per run (the worker thread); every reader gets copies.  Events
carry the candidate seq; the closing run_completed event takes seq n+1 so
each run's event stream is gap-free and strictly increasing.  A paced run
sleeps between emissions without changing content.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from pathlib import Path
from queue import SimpleQueue
from typing import Any, Iterator

from .engine import (
    PipelineCandidate,
    RunSnapshot,
    SearchConfig,
    config_violations,
    run_search,
)
from .errors import UnknownRun, ValidationError
from .runlog import LogWriter, candidate_record, snapshot_from_log, space_hash
from .space import SearchSpace, Violation, parse_space, serialize_space, validate_space

EVENT_PIPELINE_ADDED = "pipeline_added"
EVENT_RUN_COMPLETED = "run_completed"


@dataclass(frozen=True)
class Event:
    run_id: str
    seq: int
    kind: str
    payload: Any  # PipelineCandidate for pipeline_added, summary dict otherwise


@dataclass
class RunRecord:
    run_id: str
    space: SearchSpace
    config: SearchConfig
    status: str
    log_path: Path
    created: float


class _RunState:
    def __init__(self, record: RunRecord):
        self.record = record
        self.candidates: list[PipelineCandidate] = []
        self.events: list[Event] = []
        self.subscribers: list[SimpleQueue] = []
        self.lock = threading.Lock()
        self.thread: threading.Thread | None = None

    def publish(self, event: Event) -> None:
        with self.lock:
            self.events.append(event)
            queues = list(self.subscribers)
        for q in queues:
            q.put(event)


def _completion_summary(run_id: str, candidates: list[PipelineCandidate]) -> dict:
    best = None
    for c in candidates:
        if best is None or c.metrics.roc_auc_holdout > best.metrics.roc_auc_holdout:
            best = c
    return {
        "run_id": run_id,
        "status": "completed",
        "n_candidates": len(candidates),
        "best_id": best.id if best else None,
        "best_roc_auc_holdout": best.metrics.roc_auc_holdout if best else None,
    }


class RunStore:
    """All runs under one data directory; thread-safe at desk scale."""

    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._runs: dict[str, _RunState] = {}
        self._lock = threading.Lock()
        self._load_existing()

    # -- persistence --------------------------------------------------------

    def _load_existing(self) -> None:
        for log_path in sorted(self.data_dir.glob("*.jsonl")):
            space_path = Path(str(log_path) + ".space.json")
            if not space_path.exists():
                continue
            space = parse_space(space_path.read_text("utf-8"))
            snapshot = snapshot_from_log(log_path, space)
            record = RunRecord(
                run_id=snapshot.run_id,
                space=space,
                config=snapshot.config,
                status="completed",
                log_path=log_path,
                created=log_path.stat().st_mtime,
            )
            state = _RunState(record)
            state.candidates = list(snapshot.candidates)
            state.events = [
                Event(snapshot.run_id, c.seq, EVENT_PIPELINE_ADDED, c)
                for c in state.candidates
            ]
            state.events.append(
                Event(
                    snapshot.run_id,
                    len(state.candidates) + 1,
                    EVENT_RUN_COMPLETED,
                    _completion_summary(snapshot.run_id, state.candidates),
                )
            )
            self._runs[snapshot.run_id] = state

    def _next_run_id(self) -> str:
        n = 1
        while True:
            run_id = f"r{n:04d}"
            if run_id not in self._runs and not (self.data_dir / f"{run_id}.jsonl").exists():
                return run_id
            n += 1

    # -- lifecycle ----------------------------------------------------------

    def start_run(
        self,
        space: SearchSpace,
        config: SearchConfig,
        pacing: float | str = "unpaced",
    ) -> str:
        violations = validate_space(space) + config_violations(config)
        if pacing != "unpaced" and not (
            isinstance(pacing, (int, float))
            and not isinstance(pacing, bool)
            and pacing > 0
        ):
            violations.append(
                Violation("pacing", 'must be a positive rate or "unpaced"')
            )
        if violations:
            raise ValidationError(violations)

        with self._lock:
            run_id = self._next_run_id()
            log_path = self.data_dir / f"{run_id}.jsonl"
            record = RunRecord(
                run_id=run_id,
                space=space,
                config=config,
                status="running",
                log_path=log_path,
                created=time.time(),
            )
            state = _RunState(record)
            self._runs[run_id] = state

        Path(str(log_path) + ".space.json").write_text(
            serialize_space(space) + "\n", "utf-8"
        )
        delay = 0.0 if pacing == "unpaced" else 1.0 / float(pacing)
        state.thread = threading.Thread(
            target=self._work, args=(state, delay), daemon=True
        )
        state.thread.start()
        return run_id

    def _work(self, state: _RunState, delay: float) -> None:
        record = state.record
        writer = LogWriter(record.log_path, record.run_id, record.space, record.config)
        try:

            def sink(candidate: PipelineCandidate) -> None:
                if delay and candidate.seq > 1:
                    time.sleep(delay)
                with state.lock:
                    writer.append(candidate)
                    state.candidates.append(candidate)
                state.publish(
                    Event(record.run_id, candidate.seq, EVENT_PIPELINE_ADDED, candidate)
                )

            run_search(record.space, record.config, sink=sink, run_id=record.run_id)
        finally:
            writer.close()
        with state.lock:
            record.status = "completed"
            n = len(state.candidates)
        state.publish(
            Event(
                record.run_id,
                n + 1,
                EVENT_RUN_COMPLETED,
                _completion_summary(record.run_id, state.candidates),
            )
        )

    def wait(self, run_id: str, timeout: float | None = None) -> None:
        state = self._state(run_id)
        if state.thread is not None:
            state.thread.join(timeout)

    # -- reads ---------------------------------------------------------------

    def _state(self, run_id: str) -> _RunState:
        try:
            return self._runs[run_id]
        except KeyError:
            raise UnknownRun(run_id) from None

    def run_ids(self) -> list[str]:
        return sorted(self._runs)

    def summaries(self) -> list[dict]:
        out = []
        for run_id in self.run_ids():
            state = self._runs[run_id]
            with state.lock:
                record = state.record
                out.append(
                    {
                        "run_id": run_id,
                        "status": record.status,
                        "created": record.created,
                        "n_candidates": len(state.candidates),
                        "n_total": record.config.n_structure + record.config.n_refine,
                        "space_hash": space_hash(record.space),
                        "seed": record.config.seed,
                    }
                )
        return out

    def record(self, run_id: str) -> RunRecord:
        return self._state(run_id).record

    def snapshot(self, run_id: str, since: int = 0) -> RunSnapshot:
        """Consistent view; with ``since`` > 0 only candidates with seq > since."""
        state = self._state(run_id)
        with state.lock:
            candidates = tuple(c for c in state.candidates if c.seq > since)
            return RunSnapshot(
                run_id=run_id,
                space=state.record.space,
                config=state.record.config,
                candidates=candidates,
                status=state.record.status,
            )

    def subscribe(self, run_id: str, from_seq: int = 0) -> Iterator[Event]:
        """Replay stored events past ``from_seq``, then live ones, ending
        with run_completed; no gaps, no duplicates."""
        state = self._state(run_id)
        queue: SimpleQueue = SimpleQueue()
        with state.lock:
            backlog = [e for e in state.events if e.seq > from_seq]
            done = any(e.kind == EVENT_RUN_COMPLETED for e in backlog)
            if not done and state.record.status == "completed":
                # subscribed past the end of a finished run
                done = True
            if not done:
                state.subscribers.append(queue)
        try:
            last = from_seq
            for event in backlog:
                yield event
                last = event.seq
                if event.kind == EVENT_RUN_COMPLETED:
                    return
            if done:
                return
            while True:
                event = queue.get()
                if event.seq <= last:
                    continue
                yield event
                last = event.seq
                if event.kind == EVENT_RUN_COMPLETED:
                    return
        finally:
            with state.lock:
                if queue in state.subscribers:
                    state.subscribers.remove(queue)


def event_wire_payload(event: Event) -> dict:
    """JSON-ready payload for the SSE stream and tests."""
    if event.kind == EVENT_PIPELINE_ADDED:
        return candidate_record(event.payload)
    return dict(event.payload)
