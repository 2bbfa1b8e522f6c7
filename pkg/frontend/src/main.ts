import { ApiClient } from "./api.js";
import { BoardController } from "./controller.js";
import { eventSourceFactory } from "./live.js";

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base = params.get("api") ?? "http://127.0.0.1:8000";
  const api = new ApiClient(base);
  const root = document.getElementById("board");
  if (!root) throw new Error("missing #board element");

  let runId = params.get("run");
  if (!runId) {
    const { runs } = await api.runs();
    if (!runs.length) {
      root.textContent = "no runs yet - start one with `cpcboard run` or POST /runs";
      return;
    }
    runId = runs[runs.length - 1].run_id;
  }

  const controller = new BoardController({
    root,
    api,
    streams: eventSourceFactory((id, from) => api.eventsUrl(id, from)),
  });
  await controller.load(runId);
}

boot().catch((error) => {
  const root = document.getElementById("board");
  if (root) root.textContent = String(error);
});
