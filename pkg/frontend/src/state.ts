import type { ExpansionPair } from "./types.js";

// Client-owned view state; the expansion obeys the one-component-per-slot
// rule before any request goes out.
export interface ViewState {
  runId: string;
  expansion: ExpansionPair[];
  hovered: string | null;
  live: boolean;
  lastSeq: number;
}

export function initialState(runId: string): ViewState {
  return { runId, expansion: [], hovered: null, live: false, lastSeq: 0 };
}

/** Click semantics mirroring the server's toggle: re-click collapses,
 *  clicking a sibling component replaces it on that slot. */
export function toggleExpansion(
  expansion: ExpansionPair[],
  slot: string,
  component: string,
): ExpansionPair[] {
  const had = expansion.some(([s, c]) => s === slot && c === component);
  const rest = expansion.filter(([s]) => s !== slot);
  if (had) {
    return rest;
  }
  return [...rest, [slot, component]];
}

export function expansionParam(expansion: ExpansionPair[]): string {
  return expansion.map(([s, c]) => `${s}:${c}`).join(",");
}

/** Seq bookkeeping: an event is applied at most once, in order. */
export function shouldApply(state: ViewState, seq: number): boolean {
  return seq > state.lastSeq;
}
