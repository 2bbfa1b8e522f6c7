import { ApiClient } from "./api.js";
import type { EventStream, StreamFactory } from "./live.js";
import { initialState, shouldApply, toggleExpansion, type ViewState } from "./state.js";
import { renderError, renderView, renderWaiting } from "./view.js";

export interface ControllerOptions {
  root: HTMLElement;
  api: ApiClient;
  streams: StreamFactory;
  /** refresh coalescing window; events arriving inside it share one refetch */
  coalesceMs?: number;
  /** delay before resubscribing after a dropped stream */
  reconnectMs?: number;
}

/** Orchestrates one view: cold load, click-to-expand, live consumption.
 *  Holds no geometry logic; the server computes every layout. */
export class BoardController {
  private state: ViewState;
  private stream: EventStream | null = null;
  private refreshTimer: ReturnType<typeof setTimeout> | null = null;
  private pending: Promise<void> = Promise.resolve();
  private completed = false;
  private readonly coalesceMs: number;
  private readonly reconnectMs: number;

  constructor(private readonly opts: ControllerOptions) {
    this.state = initialState("");
    this.coalesceMs = opts.coalesceMs ?? 250;
    this.reconnectMs = opts.reconnectMs ?? 1000;
  }

  view(): ViewState {
    return { ...this.state, expansion: [...this.state.expansion] };
  }

  /** Cold load: snapshot first (for seq bookkeeping), then layout+board. */
  async load(runId: string): Promise<void> {
    this.state = initialState(runId);
    const snapshot = await this.opts.api.snapshot(runId);
    this.state.lastSeq = snapshot.last_seq;
    this.state.live = snapshot.status === "running";
    this.completed = snapshot.status === "completed";
    await this.refresh();
    if (this.state.live) {
      this.subscribe();
    }
  }

  /** Toggle semantics identical to the server's; invalid clicks surface as
   *  an error banner from the failed layout fetch and keep the old state. */
  async onStepClick(slot: string, component: string): Promise<void> {
    const previous = this.state.expansion;
    this.state.expansion = toggleExpansion(previous, slot, component);
    try {
      await this.refresh();
    } catch (error) {
      this.state.expansion = previous;
      throw error;
    }
  }

  setHovered(pipelineId: string | null): void {
    if (this.state.hovered === pipelineId) return;
    this.state.hovered = pipelineId;
    void this.refresh();
  }

  /** Apply live events: each pipeline_added bumps lastSeq exactly once and
   *  schedules a coalesced refetch; run_completed flips the indicator. */
  private subscribe(): void {
    const stream = this.opts.streams(this.state.runId, this.state.lastSeq);
    this.stream = stream;
    stream.on("pipeline_added", (candidate) => {
      if (!shouldApply(this.state, candidate.seq)) return;
      this.state.lastSeq = candidate.seq;
      this.scheduleRefresh();
    });
    stream.on("run_completed", () => {
      if (this.completed) return;
      this.completed = true;
      this.state.live = false;
      stream.close();
      this.stream = null;
      this.scheduleRefresh();
    });
    stream.onError(() => {
      stream.close();
      if (this.stream !== stream || this.completed) return;
      this.stream = null;
      setTimeout(() => {
        if (!this.completed && this.stream === null) {
          this.subscribe();
        }
      }, this.reconnectMs);
    });
  }

  stop(): void {
    this.stream?.close();
    this.stream = null;
    if (this.refreshTimer !== null) {
      clearTimeout(this.refreshTimer);
      this.refreshTimer = null;
    }
  }

  /** Resolves once every scheduled refresh has landed (test hook). */
  async idle(): Promise<void> {
    while (this.refreshTimer !== null) {
      await new Promise((resolve) => setTimeout(resolve, this.coalesceMs + 5));
    }
    await this.pending;
  }

  private scheduleRefresh(): void {
    if (this.refreshTimer !== null) return;
    this.refreshTimer = setTimeout(() => {
      this.refreshTimer = null;
      this.pending = this.pending.then(() => this.refresh()).catch(() => undefined);
    }, this.coalesceMs);
  }

  private async refresh(): Promise<void> {
    const { api, root } = this.opts;
    const runId = this.state.runId;
    try {
      if (this.state.lastSeq === 0) {
        renderWaiting(root, this.state);
        return;
      }
      const [layout, board] = await Promise.all([
        api.layout(runId, this.state.expansion),
        api.leaderboard(runId),
      ]);
      renderView(root, layout, board.rows, this.state, {
        onStepClick: (slot, component) => void this.onStepClick(slot, component),
        onHover: (id) => this.setHovered(id),
      });
    } catch (error) {
      renderError(root, `fetch failed: ${String(error)}`);
      throw error;
    }
  }
}
