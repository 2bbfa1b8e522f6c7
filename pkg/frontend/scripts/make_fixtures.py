"""Regenerate the frontend test fixtures from the backend.

Every payload is captured through the real HTTP endpoints (TestClient on
the FastAPI app) against data dirs built from the run-log file format, so
the fixtures are exactly what a browser would receive.  Prefix states of
the small live-run fixture come from truncating its log at line
boundaries, which the backend accepts by design.

Run from the repository root:  PYTHONPATH=src python frontend/scripts/make_fixtures.py
"""

from __future__ import annotations

import json
import shutil
import tempfile
from pathlib import Path

from fastapi.testclient import TestClient

from cpcboard.api import create_app
from cpcboard.engine import SearchConfig, run_search
from cpcboard.runlog import write_log
from cpcboard.space import load_default_space, serialize_space
from cpcboard.store import RunStore

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "tests" / "fixtures"

DEMO = SearchConfig(seed=42, n_structure=16, n_refine=8, top_k=3, step_scale=0.15)
SMALL = SearchConfig(seed=7, n_structure=4, n_refine=2, top_k=2, step_scale=0.2)
EXPANDED = "Transformer 2:Sparse Random Projection"


def _client_for_log(tmp: Path, log_lines: list[str], space_text: str) -> TestClient:
    data = tmp / f"data{len(list(tmp.iterdir()))}"
    data.mkdir()
    log = data / "r0001.jsonl"
    log.write_text("\n".join(log_lines) + "\n", "utf-8")
    (data / "r0001.jsonl.space.json").write_text(space_text, "utf-8")
    return TestClient(create_app(RunStore(data)))


def _dump(path: Path, payload) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=1) + "\n", "utf-8")


def main() -> None:
    if FIXTURES.exists():
        shutil.rmtree(FIXTURES)
    space = load_default_space()
    space_text = serialize_space(space) + "\n"
    tmp = Path(tempfile.mkdtemp(prefix="cpcboard-fixtures-"))

    # 24-candidate completed run: cold-load payloads
    snap = run_search(space, DEMO, run_id="r0001")
    log = tmp / "demo.jsonl"
    write_log(log, "r0001", space, DEMO, snap.candidates)
    lines = log.read_text("utf-8").splitlines()
    client = _client_for_log(tmp, lines, space_text)
    _dump(FIXTURES / "run24" / "snapshot.json", client.get("/runs/r0001/snapshot").json())
    _dump(FIXTURES / "run24" / "layout.json", client.get("/runs/r0001/layout").json())
    _dump(
        FIXTURES / "run24" / "layout_expanded.json",
        client.get("/runs/r0001/layout", params={"expanded": EXPANDED}).json(),
    )
    _dump(FIXTURES / "run24" / "leaderboard.json", client.get("/runs/r0001/leaderboard").json())
    with client.stream("GET", "/runs/r0001/events", params={"from": 0}) as response:
        (FIXTURES / "run24" / "events.sse").write_text("".join(response.iter_text()), "utf-8")

    # 6-candidate run: full event transcript plus per-prefix payloads so a
    # test can serve the backend state as of any seq
    snap = run_search(space, SMALL, run_id="r0001")
    log = tmp / "small.jsonl"
    write_log(log, "r0001", space, SMALL, snap.candidates)
    lines = log.read_text("utf-8").splitlines()
    client = _client_for_log(tmp, lines, space_text)
    (FIXTURES / "run6").mkdir(parents=True, exist_ok=True)
    with client.stream("GET", "/runs/r0001/events", params={"from": 0}) as response:
        (FIXTURES / "run6" / "events.sse").write_text("".join(response.iter_text()), "utf-8")
    for k in range(1, len(snap.candidates) + 1):
        prefix_client = _client_for_log(tmp, lines[: 1 + k], space_text)
        base = FIXTURES / "run6" / f"k{k}"
        _dump(base / "snapshot.json", prefix_client.get("/runs/r0001/snapshot").json())
        _dump(base / "layout.json", prefix_client.get("/runs/r0001/layout").json())
        _dump(base / "leaderboard.json", prefix_client.get("/runs/r0001/leaderboard").json())

    shutil.rmtree(tmp)
    print(f"fixtures written under {FIXTURES}")


if __name__ == "__main__":
    main()
