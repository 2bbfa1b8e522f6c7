"""HTTP surface over a RunStore: run lifecycle, snapshots, layouts,
leaderboard, analytics queries, SSE event stream, SVG export.

The wire protocol is snapshot-then-subscribe: clients fetch a snapshot at
seq s, then subscribe to events from s, so nothing is lost or duplicated
between the two calls.  Layout geometry is computed server-side; the
expansion state is client-owned and passed per request.
"""

from __future__ import annotations

from typing import Any

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import Response, StreamingResponse

from . import analytics
from .engine import SearchConfig
from .errors import (
    CpcboardError,
    QueryError,
    UnknownComponent,
    UnknownExpansion,
    UnknownPipeline,
    UnknownRun,
    UnknownSlot,
    ValidationError,
)
from .layout import ExpansionState, compute_layout, serialize_layout
from .runlog import candidate_record, dumps_compact
from .space import ConstraintSpec, space_from_doc
from .store import EVENT_RUN_COMPLETED, RunStore, event_wire_payload
from .svg import export_svg

_NOT_FOUND = (UnknownRun, UnknownPipeline, UnknownSlot, UnknownComponent)


def parse_expansion(raw: str | None) -> ExpansionState:
    """Decode "slot:component(,slot:component)*" into an ExpansionState."""
    if not raw:
        return ExpansionState()
    pairs = set()
    for part in raw.split(","):
        if ":" not in part:
            raise UnknownExpansion(f"malformed expansion {part!r}, want slot:component")
        slot, component = part.split(":", 1)
        pairs.add((slot, component))
    try:
        return ExpansionState(frozenset(pairs))
    except ValueError as exc:
        raise UnknownExpansion(str(exc)) from exc


def _config_from_doc(doc: Any) -> SearchConfig:
    if not isinstance(doc, dict):
        raise HTTPException(400, "config must be an object")
    try:
        return SearchConfig(
            seed=int(doc["seed"]),
            n_structure=int(doc["n_structure"]),
            n_refine=int(doc.get("n_refine", 0)),
            top_k=int(doc.get("top_k", 1)),
            step_scale=float(doc.get("step_scale", 0.15)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise HTTPException(400, f"bad config: {exc}") from exc


def create_app(store: RunStore) -> FastAPI:
    app = FastAPI(title="cpcboard", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(CpcboardError)
    async def _cpcboard_error(request: Request, exc: CpcboardError):
        from fastapi.responses import JSONResponse

        status = 404 if isinstance(exc, _NOT_FOUND) else 400
        detail: Any = str(exc)
        if isinstance(exc, ValidationError):
            detail = [str(v) for v in exc.violations]
        return JSONResponse(status_code=status, content={"detail": detail})

    @app.post("/runs")
    async def create_run(body: dict):
        space = space_from_doc(body.get("space"))
        config = _config_from_doc(body.get("config"))
        pacing = body.get("pacing", "unpaced")
        run_id = store.start_run(space, config, pacing=pacing)
        return {"run_id": run_id}

    @app.get("/runs")
    async def list_runs():
        return {"runs": store.summaries()}

    @app.get("/runs/{run_id}/snapshot")
    async def get_snapshot(run_id: str, since: int = 0):
        snap = store.snapshot(run_id, since=since)
        # clients must resume subscriptions from the last seq they actually saw
        last_seq = max((c.seq for c in snap.candidates), default=since)
        return {
            "run_id": snap.run_id,
            "status": snap.status,
            "since": since,
            "last_seq": last_seq,
            "candidates": [candidate_record(c) for c in snap.candidates],
        }

    @app.get("/runs/{run_id}/layout")
    async def get_layout(run_id: str, expanded: str | None = None):
        snap = store.snapshot(run_id)
        layout = compute_layout(snap, parse_expansion(expanded))
        return serialize_layout(layout)

    @app.get("/runs/{run_id}/leaderboard")
    async def get_leaderboard(run_id: str):
        rows = analytics.leaderboard(store.snapshot(run_id))
        return {
            "rows": [
                {
                    "rank": r.rank,
                    "id": r.id,
                    "roc_auc_holdout": r.roc_auc_holdout,
                    "group_disparity": r.group_disparity,
                    "prediction_time": r.prediction_time,
                    "structure": r.structure,
                    "color_index": r.color_index,
                }
                for r in rows
            ]
        }

    @app.get("/runs/{run_id}/query/{name}")
    async def query(
        run_id: str,
        name: str,
        slot: str | None = None,
        id: str | None = None,
        metric: str | None = None,
        component: str | None = None,
        role: str | None = None,
        aggregate: str = "max",
        group_disparity: float | None = None,
        prediction_time: float | None = None,
    ):
        snap = store.snapshot(run_id)
        result = run_query(
            snap,
            name,
            slot=slot,
            pipeline_id=id,
            metric=metric,
            component=component,
            role=role,
            aggregate=aggregate,
            group_disparity=group_disparity,
            prediction_time=prediction_time,
        )
        return {"query": name, "result": result}

    @app.get("/runs/{run_id}/events")
    async def events(run_id: str, from_seq: int = Query(0, alias="from")):
        store.record(run_id)  # 404 before the stream starts

        def stream():
            for event in store.subscribe(run_id, from_seq=from_seq):
                payload = dumps_compact(event_wire_payload(event))
                yield f"event: {event.kind}\ndata: {payload}\n\n"
                if event.kind == EVENT_RUN_COMPLETED:
                    return

        return StreamingResponse(stream(), media_type="text/event-stream")

    @app.get("/runs/{run_id}/export.svg")
    async def export(
        run_id: str,
        expanded: str | None = None,
        w: int = 1200,
        h: int = 600,
    ):
        snap = store.snapshot(run_id)
        svg = export_svg(snap, parse_expansion(expanded), width=w, height=h)
        return Response(content=svg, media_type="image/svg+xml")

    return app


def run_query(snapshot, name: str, **params) -> Any:
    """Shared query dispatch for the HTTP endpoint and the CLI."""
    slot = params.get("slot")
    pipeline_id = params.get("pipeline_id")
    metric = params.get("metric")
    component = params.get("component")
    role = params.get("role")
    aggregate = params.get("aggregate") or "max"

    def need(value, label):
        if value is None:
            raise QueryError(f"query {name!r} requires parameter {label!r}")
        return value

    try:
        if name == "count_pipelines":
            return analytics.count_pipelines(snapshot)
        if name == "count_steps":
            return analytics.count_steps(snapshot.space)
        if name == "distinct_components":
            return analytics.distinct_components(snapshot, need(slot, "slot"))
        if name == "metric_of":
            return analytics.metric_of(
                snapshot, need(pipeline_id, "id"), need(metric, "metric")
            )
        if name == "best_estimator":
            return analytics.best_estimator(
                snapshot, need(metric, "metric"), aggregate=aggregate
            )
        if name == "constrained":
            constraints = list(snapshot.space.constraints)
            overrides = []
            if params.get("group_disparity") is not None:
                overrides.append(
                    ConstraintSpec("group_disparity", float(params["group_disparity"]))
                )
            if params.get("prediction_time") is not None:
                overrides.append(
                    ConstraintSpec("prediction_time", float(params["prediction_time"]))
                )
            if overrides:
                constraints = overrides
            return analytics.constrained_pipelines(snapshot, constraints)
        if name == "frequency":
            return [
                [comp, count]
                for comp, count in analytics.component_frequency(snapshot, need(role, "role"))
            ]
        if name == "hp_count":
            return analytics.hyperparameter_count(snapshot.space, need(component, "component"))
        if name == "influence":
            report = analytics.influence(
                snapshot, need(component, "component"), need(metric, "metric")
            )
            return {"scores": report.scores, "winner": report.winner}
        if name == "spread":
            best, worst, diff = analytics.metric_spread(snapshot, need(metric, "metric"))
            return {"best": best, "worst": worst, "difference": diff}
    except ValueError as exc:
        raise QueryError(str(exc)) from exc
    raise QueryError(f"unknown query {name!r}")
