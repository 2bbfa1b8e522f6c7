import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import { ApiClient, type FetchLike } from "../src/api.js";
import type { EventStream, StreamFactory } from "../src/live.js";
import type { CandidateRecord, CompletionSummary } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");

export function fixture<T = unknown>(relative: string): T {
  return JSON.parse(readFileSync(join(FIXTURES, relative), "utf-8")) as T;
}

export function fixtureText(relative: string): string {
  return readFileSync(join(FIXTURES, relative), "utf-8");
}

export interface SseEvent {
  kind: "pipeline_added" | "run_completed";
  payload: CandidateRecord & CompletionSummary;
}

/** Parse the raw SSE wire text captured from the backend. */
export function parseSse(text: string): SseEvent[] {
  return text
    .trim()
    .split("\n\n")
    .map((block) => {
      const lines = block.split("\n");
      return {
        kind: lines[0].replace(/^event: /, ""),
        payload: JSON.parse(lines[1].replace(/^data: /, "")),
      } as SseEvent;
    });
}

const EXPANDED_SRP = "Transformer 2:Sparse Random Projection";

function jsonResponse(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

/** Serve the 24-candidate completed-run fixtures. */
export function run24Fetch(): FetchLike {
  return async (url) => {
    const u = new URL(url);
    if (u.pathname.endsWith("/snapshot")) return jsonResponse(fixture("run24/snapshot.json"));
    if (u.pathname.endsWith("/leaderboard")) return jsonResponse(fixture("run24/leaderboard.json"));
    if (u.pathname.endsWith("/layout")) {
      const expanded = u.searchParams.get("expanded");
      if (!expanded) return jsonResponse(fixture("run24/layout.json"));
      if (expanded === EXPANDED_SRP) return jsonResponse(fixture("run24/layout_expanded.json"));
      return jsonResponse({ detail: `unknown expansion ${expanded}` }, 400);
    }
    return jsonResponse({ detail: "not found" }, 404);
  };
}

/** Serve the 6-candidate run as of `world.k` candidates, the way a live
 *  backend's state advances while events stream out. */
export function run6Fetch(world: { k: number }): FetchLike {
  return async (url) => {
    const u = new URL(url);
    const base = `run6/k${world.k}`;
    if (u.pathname.endsWith("/snapshot")) {
      const snap = fixture<{ status: string }>(`${base}/snapshot.json`);
      // a prefix of a paced run is still running from the client's view
      if (world.k < 6) snap.status = "running";
      return jsonResponse(snap);
    }
    if (u.pathname.endsWith("/leaderboard")) return jsonResponse(fixture(`${base}/leaderboard.json`));
    if (u.pathname.endsWith("/layout")) {
      if (u.searchParams.get("expanded")) return jsonResponse({ detail: "bad" }, 400);
      return jsonResponse(fixture(`${base}/layout.json`));
    }
    return jsonResponse({ detail: "not found" }, 404);
  };
}

export function apiFor(fetchImpl: FetchLike): ApiClient {
  return new ApiClient("http://backend.test", fetchImpl);
}

type Handler = (data: never) => void;

export class FakeStream implements EventStream {
  handlers = new Map<string, Handler>();
  errorHandler: (() => void) | null = null;
  closed = false;

  on(type: string, handler: Handler): void {
    this.handlers.set(type, handler);
  }

  onError(handler: () => void): void {
    this.errorHandler = handler;
  }

  close(): void {
    this.closed = true;
  }

  emit(event: SseEvent): void {
    const handler = this.handlers.get(event.kind);
    if (handler && !this.closed) handler(event.payload as never);
  }

  fail(): void {
    if (this.errorHandler && !this.closed) this.errorHandler();
  }
}

/** Records every subscription and hands the test a scriptable stream. */
export class FakeStreamFactory {
  calls: number[] = [];
  streams: FakeStream[] = [];

  factory: StreamFactory = (_runId, fromSeq) => {
    this.calls.push(fromSeq);
    const stream = new FakeStream();
    this.streams.push(stream);
    return stream;
  };

  latest(): FakeStream {
    return this.streams[this.streams.length - 1];
  }
}

export function mount(): HTMLElement {
  const root = document.createElement("div");
  root.id = "board";
  document.body.appendChild(root);
  return root;
}
