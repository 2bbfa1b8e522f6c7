import type { CandidateRecord, CompletionSummary } from "./types.js";

// Minimal event-stream surface so tests can script delivery and drops.
export interface EventStream {
  on(type: "pipeline_added", handler: (data: CandidateRecord) => void): void;
  on(type: "run_completed", handler: (data: CompletionSummary) => void): void;
  onError(handler: () => void): void;
  close(): void;
}

export type StreamFactory = (runId: string, fromSeq: number) => EventStream;

/** Browser implementation on top of EventSource; the SSE frames carry the
 *  event kind in the `event:` field and a JSON payload in `data:`. */
export function eventSourceFactory(
  urlFor: (runId: string, fromSeq: number) => string,
): StreamFactory {
  return (runId, fromSeq) => {
    const source = new EventSource(urlFor(runId, fromSeq));
    const on = (type: string, handler: (data: unknown) => void): void => {
      source.addEventListener(type, (event) => {
        handler(JSON.parse((event as MessageEvent).data));
      });
    };
    return {
      on: on as EventStream["on"],
      onError(handler: () => void): void {
        source.onerror = () => handler();
      },
      close(): void {
        source.close();
      },
    };
  };
}
