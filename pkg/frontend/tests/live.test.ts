import { afterEach, describe, expect, it } from "vitest";

import { BoardController } from "../src/controller.js";
import {
  FakeStreamFactory,
  apiFor,
  fixtureText,
  mount,
  parseSse,
  run6Fetch,
} from "./helpers.js";

afterEach(() => {
  document.body.textContent = "";
});

const TRANSCRIPT = parseSse(fixtureText("run6/events.sse"));

async function coldLoadAt(k: number) {
  const world = { k };
  const factory = new FakeStreamFactory();
  const root = mount();
  const controller = new BoardController({
    root,
    api: apiFor(run6Fetch(world)),
    streams: factory.factory,
    coalesceMs: 0,
    reconnectMs: 0,
  });
  await controller.load("r0001");
  return { world, factory, root, controller };
}

describe("live consumption", () => {
  it("replaying a run event by event converges to the cold load of the finished run", async () => {
    const finished = await coldLoadAt(6);
    const finalScene = finished.root.innerHTML;
    finished.root.remove();

    const live = await coldLoadAt(1);
    expect(live.controller.view().live).toBe(true);
    expect(live.factory.calls).toEqual([1]);

    for (const event of TRANSCRIPT) {
      if (event.kind === "pipeline_added") {
        live.world.k = Math.max(live.world.k, event.payload.seq);
      }
      live.factory.latest().emit(event);
    }
    await live.controller.idle();

    expect(live.controller.view().live).toBe(false);
    expect(live.controller.view().lastSeq).toBe(6);
    expect(live.root.innerHTML).toBe(finalScene);
    expect(live.root.querySelectorAll("#cpc path.pipeline")).toHaveLength(6);
  });

  it("duplicate delivery is idempotent via the seq guard", async () => {
    const live = await coldLoadAt(1);
    live.world.k = 3;
    const added = TRANSCRIPT.filter((e) => e.kind === "pipeline_added").slice(0, 3);
    for (const event of [...added, ...added, ...added]) {
      live.factory.latest().emit(event);
    }
    await live.controller.idle();
    expect(live.controller.view().lastSeq).toBe(3);
    expect(live.root.querySelectorAll("#cpc path.pipeline")).toHaveLength(3);
    expect(live.controller.view().live).toBe(true);
    live.controller.stop();
  });

  it("a dropped stream resubscribes from the last seen seq and converges", async () => {
    const finished = await coldLoadAt(6);
    const finalScene = finished.root.innerHTML;
    finished.root.remove();

    const live = await coldLoadAt(1);
    const first = live.factory.latest();
    for (const event of TRANSCRIPT.slice(1, 3)) {
      live.world.k = Math.max(live.world.k, event.payload.seq);
      first.emit(event);
    }
    first.fail();
    await new Promise((resolve) => setTimeout(resolve, 30));
    expect(live.factory.calls).toEqual([1, 3]);

    const second = live.factory.latest();
    for (const event of TRANSCRIPT.filter(
      (e) => e.kind === "run_completed" || e.payload.seq > 3,
    )) {
      if (event.kind === "pipeline_added") {
        live.world.k = Math.max(live.world.k, event.payload.seq);
      }
      second.emit(event);
    }
    await live.controller.idle();
    expect(live.root.innerHTML).toBe(finalScene);
  });

  it("run_completed closes the stream and is applied once", async () => {
    const live = await coldLoadAt(1);
    live.world.k = 6;
    for (const event of TRANSCRIPT) live.factory.latest().emit(event);
    const completion = TRANSCRIPT[TRANSCRIPT.length - 1];
    live.factory.streams[0].emit(completion);
    await live.controller.idle();
    expect(live.factory.streams[0].closed).toBe(true);
    expect(live.controller.view().live).toBe(false);
  });
});
