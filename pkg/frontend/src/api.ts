import { expansionParam } from "./state.js";
import type {
  ExpansionPair,
  LayoutResponse,
  LeaderboardRow,
  RunSummary,
  SnapshotResponse,
} from "./types.js";

export type FetchLike = (url: string) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly url: string,
    readonly status: number,
    detail: string,
  ) {
    super(`${status} from ${url}: ${detail}`);
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (url) => fetch(url),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const url = this.baseUrl + path;
    const response = await this.fetchImpl(url);
    if (!response.ok) {
      const detail = await response.text().catch(() => "");
      throw new ApiError(url, response.status, detail);
    }
    return (await response.json()) as T;
  }

  runs(): Promise<{ runs: RunSummary[] }> {
    return this.get("/runs");
  }

  snapshot(runId: string, since = 0): Promise<SnapshotResponse> {
    return this.get(`/runs/${encodeURIComponent(runId)}/snapshot?since=${since}`);
  }

  layout(runId: string, expansion: ExpansionPair[]): Promise<LayoutResponse> {
    const param = expansionParam(expansion);
    const query = param ? `?expanded=${encodeURIComponent(param)}` : "";
    return this.get(`/runs/${encodeURIComponent(runId)}/layout${query}`);
  }

  leaderboard(runId: string): Promise<{ rows: LeaderboardRow[] }> {
    return this.get(`/runs/${encodeURIComponent(runId)}/leaderboard`);
  }

  eventsUrl(runId: string, fromSeq: number): string {
    return `${this.baseUrl}/runs/${encodeURIComponent(runId)}/events?from=${fromSeq}`;
  }
}
