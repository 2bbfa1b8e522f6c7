"""Command line interface.

Exit codes: 0 ok, 2 validation/usage error, 3 I/O error.  `run` writes the
deterministic JSONL log plus a `<log>.space.json` sidecar so `query` and
`render` can recover the space without extra flags.
"""

from __future__ import annotations

import functools
import json
import os
import sys
import time
from pathlib import Path

import click

from .api import run_query
from .engine import SearchConfig, run_search
from .errors import CpcboardError
from .layout import ExpansionState
from .runlog import snapshot_from_log, write_log
from .space import parse_space, serialize_space
from .svg import export_svg

EXIT_VALIDATION = 2
EXIT_IO = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _guard(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CpcboardError as exc:
            _fail(EXIT_VALIDATION, str(exc))
        except OSError as exc:
            _fail(EXIT_IO, str(exc))

    return wrapper


def _load_space(path: str):
    try:
        text = Path(path).read_text("utf-8")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    return parse_space(text)


def _sidecar(log: str) -> Path:
    return Path(str(log) + ".space.json")


def _space_for_log(log: str, space: str | None):
    if space is not None:
        return _load_space(space)
    sidecar = _sidecar(log)
    if sidecar.exists():
        return _load_space(str(sidecar))
    _fail(
        EXIT_VALIDATION,
        f"no space file: pass --space or keep the {sidecar.name} sidecar next to the log",
    )


def _parse_expanded(raw: str | None) -> ExpansionState:
    from .api import parse_expansion

    return parse_expansion(raw)


@click.group()
def main():
    """Pipeline search with a conditional parallel coordinates board."""


@main.command()
@click.option("--space", "space_path", required=True, help="Space file (JSON).")
@click.option("--seed", type=int, default=42, show_default=True)
@click.option("--n-structure", type=int, default=16, show_default=True)
@click.option("--n-refine", type=int, default=8, show_default=True)
@click.option("--top-k", type=int, default=3, show_default=True)
@click.option("--step-scale", type=float, default=0.15, show_default=True)
@click.option("--out", "out_path", required=True, help="Run log to write (JSONL).")
@click.option("--pace", type=float, default=None, help="Emissions per second.")
@_guard
def run(space_path, seed, n_structure, n_refine, top_k, step_scale, out_path, pace):
    """Execute a seeded search and write its log."""
    space = _load_space(space_path)
    config = SearchConfig(
        seed=seed,
        n_structure=n_structure,
        n_refine=n_refine,
        top_k=top_k,
        step_scale=step_scale,
    )
    if pace is not None and pace <= 0:
        _fail(EXIT_VALIDATION, "--pace must be positive")

    delay = 1.0 / pace if pace else 0.0

    def sink(candidate):
        if delay and candidate.seq > 1:
            time.sleep(delay)

    snapshot = run_search(space, config, sink=sink)
    write_log(out_path, snapshot.run_id, space, config, snapshot.candidates)
    _sidecar(out_path).write_text(serialize_space(space) + "\n", "utf-8")
    click.echo(f"{snapshot.run_id}: wrote {len(snapshot.candidates)} candidates to {out_path}")


@main.command()
@click.option("--space", "space_path", required=True)
@_guard
def validate(space_path):
    """Check a space file; exit 2 with one line per violation if invalid."""
    try:
        text = Path(space_path).read_text("utf-8")
    except OSError as exc:
        _fail(EXIT_IO, str(exc))
    from .errors import ValidationError

    try:
        parse_space(text)
    except ValidationError as exc:
        for v in exc.violations:
            click.echo(str(v), err=True)
        sys.exit(EXIT_VALIDATION)
    click.echo("ok")


@main.command()
@click.argument("name")
@click.option("--log", "log_path", required=True)
@click.option("--space", "space_path", default=None, help="Space file; defaults to the log sidecar.")
@click.option("--slot", default=None)
@click.option("--id", "pipeline_id", default=None)
@click.option("--metric", default=None)
@click.option("--component", default=None)
@click.option("--role", default=None)
@click.option("--aggregate", default="max", show_default=True)
@click.option("--group-disparity", type=float, default=None)
@click.option("--prediction-time", type=float, default=None)
@_guard
def query(name, log_path, space_path, slot, pipeline_id, metric, component, role,
          aggregate, group_disparity, prediction_time):
    """Answer one analytics query against a run log; prints JSON."""
    space = _space_for_log(log_path, space_path)
    snapshot = snapshot_from_log(log_path, space)
    result = run_query(
        snapshot,
        name,
        slot=slot,
        pipeline_id=pipeline_id,
        metric=metric,
        component=component,
        role=role,
        aggregate=aggregate,
        group_disparity=group_disparity,
        prediction_time=prediction_time,
    )
    click.echo(json.dumps({"query": name, "result": result}))


@main.command()
@click.option("--log", "log_path", required=True)
@click.option("--space", "space_path", default=None, help="Space file; defaults to the log sidecar.")
@click.option("--expanded", default=None, help="slot:component(,slot:component)*")
@click.option("--out", "out_path", required=True)
@click.option("--width", type=int, default=1200, show_default=True)
@click.option("--height", type=int, default=600, show_default=True)
@_guard
def render(log_path, space_path, expanded, out_path, width, height):
    """Render a run log to a deterministic SVG."""
    space = _space_for_log(log_path, space_path)
    snapshot = snapshot_from_log(log_path, space)
    svg = export_svg(snapshot, _parse_expanded(expanded), width=width, height=height)
    Path(out_path).write_text(svg, "utf-8")
    click.echo(f"wrote {out_path}")


@main.command()
@click.option("--port", type=int, default=None, help="Defaults to $CPCBOARD_PORT or 8000.")
@click.option("--data", "data_dir", default=None, help="Defaults to $CPCBOARD_DATA_DIR or ./cpcboard_data.")
@click.option("--host", default="127.0.0.1", show_default=True)
@_guard
def serve(port, data_dir, host):
    """Serve the HTTP API (snapshots, layouts, queries, SSE, SVG export)."""
    import uvicorn

    from .api import create_app
    from .store import RunStore

    if port is None:
        port = int(os.environ.get("CPCBOARD_PORT", "8000"))
    if data_dir is None:
        data_dir = os.environ.get("CPCBOARD_DATA_DIR", "cpcboard_data")
    store = RunStore(data_dir)
    uvicorn.run(create_app(store), host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
