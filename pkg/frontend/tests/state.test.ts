import { describe, expect, it } from "vitest";

import { expansionParam, initialState, shouldApply, toggleExpansion } from "../src/state.js";

describe("toggleExpansion", () => {
  it("is an involution on the same pair", () => {
    const once = toggleExpansion([], "Transformer 2", "PCA");
    expect(once).toEqual([["Transformer 2", "PCA"]]);
    expect(toggleExpansion(once, "Transformer 2", "PCA")).toEqual([]);
  });

  it("replaces a sibling on the same slot", () => {
    const a = toggleExpansion([], "Transformer 2", "PCA");
    const b = toggleExpansion(a, "Transformer 2", "Normalizer");
    expect(b).toEqual([["Transformer 2", "Normalizer"]]);
  });

  it("allows one expansion per slot across different slots", () => {
    let state = toggleExpansion([], "Transformer 1", "PCA");
    state = toggleExpansion(state, "Transformer 2", "Normalizer");
    expect(state).toHaveLength(2);
    const slots = state.map(([slot]) => slot);
    expect(new Set(slots).size).toBe(2);
  });

  it("serializes to the server's query format", () => {
    const state = toggleExpansion([], "Transformer 2", "Sparse Random Projection");
    expect(expansionParam(state)).toBe("Transformer 2:Sparse Random Projection");
    expect(expansionParam([])).toBe("");
  });
});

describe("seq bookkeeping", () => {
  it("applies each seq at most once and in order", () => {
    const state = initialState("r0001");
    state.lastSeq = 3;
    expect(shouldApply(state, 3)).toBe(false);
    expect(shouldApply(state, 2)).toBe(false);
    expect(shouldApply(state, 4)).toBe(true);
  });
});
