from __future__ import annotations

import pytest

from cpcboard import SearchConfig, load_default_space, run_search

# the demo configuration pinned throughout the suite: 24 candidates on the
# bundled space, covering every component of every slot on this seed
DEMO_SEED = 42
DEMO_CONFIG = SearchConfig(
    seed=DEMO_SEED, n_structure=16, n_refine=8, top_k=3, step_scale=0.15
)


@pytest.fixture(scope="session")
def default_space():
    return load_default_space()


@pytest.fixture(scope="session")
def demo_snapshot(default_space):
    return run_search(default_space, DEMO_CONFIG)


@pytest.fixture(scope="session")
def demo_log(tmp_path_factory, default_space, demo_snapshot):
    """Demo run persisted in the wire format, plus its space sidecar."""
    from cpcboard.runlog import write_log
    from cpcboard.space import serialize_space

    path = tmp_path_factory.mktemp("logs") / "demo.jsonl"
    write_log(path, demo_snapshot.run_id, default_space, DEMO_CONFIG, demo_snapshot.candidates)
    path.with_name(path.name + ".space.json").write_text(
        serialize_space(default_space) + "\n", "utf-8"
    )
    return path


def pytest_runtest_logreport(report):
    # one visible pass/fail line per acceptance criterion
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    status = "PASS" if report.passed else "FAIL"
    print(f"\n[ACCEPTANCE] {name}: {status}", flush=True)
