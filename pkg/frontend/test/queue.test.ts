import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { QueueState } from "../src/queue.js";
import type { Candidate } from "../src/types.js";

function candidate(id: number, support: number): Candidate {
  return {
    id,
    kind: "phrase_pattern",
    payload: { features: [], core_word_index: null, pos_tag: "NN" },
    support,
    confidence: null,
    evidence: ["e"],
    status: "pending",
    created_at: 1,
  };
}

function mockApi(handlers: Record<string, (init?: RequestInit) => unknown>): ApiClient {
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    const path = input.split("?")[0]!;
    const handler = handlers[path];
    if (!handler) {
      return new Response(JSON.stringify({ error: "not found" }), { status: 404 });
    }
    try {
      return new Response(JSON.stringify(handler(init)), { status: 200 });
    } catch (err) {
      return new Response(JSON.stringify({ error: String(err) }), { status: 400 });
    }
  };
  return new ApiClient("", fetchFn);
}

describe("candidate queue", () => {
  it("loads pending candidates and tracks a cursor", async () => {
    const api = mockApi({
      "/candidates": () => ({ items: [candidate(1, 9), candidate(2, 5)], page: 1, per_page: 100, total: 2 }),
    });
    const queue = new QueueState(api);
    await queue.load();
    expect(queue.items.map((c) => c.id)).toEqual([1, 2]);
    queue.move(1);
    expect(queue.current()?.id).toBe(2);
    queue.move(5);
    expect(queue.current()?.id).toBe(2); // clamped
  });

  it("commits an accepted row only on a 2xx response", async () => {
    const api = mockApi({
      "/candidates": () => ({ items: [candidate(1, 9)], page: 1, per_page: 100, total: 1 }),
      "/candidates/1/decision": () => ({ applied: true, candidate: { ...candidate(1, 9), status: "accepted" } }),
    });
    const queue = new QueueState(api);
    await queue.load();
    expect(await queue.decide(1, "accept")).toBe(true);
    expect(queue.items).toHaveLength(0);
    expect(queue.banner).toBeNull();
  });

  it("rolls the row back when the API call fails", async () => {
    const api = mockApi({
      "/candidates": () => ({ items: [candidate(1, 9), candidate(2, 5)], page: 1, per_page: 100, total: 2 }),
      // no decision handler: POST will 404
    });
    const queue = new QueueState(api);
    await queue.load();
    expect(await queue.decide(1, "accept")).toBe(false);
    expect(queue.items.map((c) => c.id)).toEqual([1, 2]); // restored in place
    expect(queue.banner).toMatch(/not found/);
  });

  it("restores the row with the server's error note when the decision is refused", async () => {
    const refused = {
      ...candidate(1, 9),
      kind: "subsentence_pattern" as const,
      error_note: "meaning required at accept time",
    };
    const api = mockApi({
      "/candidates": () => ({ items: [candidate(1, 9)], page: 1, per_page: 100, total: 1 }),
      "/candidates/1/decision": () => ({ applied: false, candidate: refused }),
    });
    const queue = new QueueState(api);
    await queue.load();
    expect(await queue.decide(1, "accept")).toBe(false);
    expect(queue.items[0]?.error_note).toMatch(/meaning/);
    expect(queue.banner).toMatch(/meaning/);
  });

  it("shows a banner instead of losing state when the service is unreachable", async () => {
    const api = new ApiClient("", async () => {
      throw new Error("connection refused");
    });
    const queue = new QueueState(api);
    queue.items = [candidate(1, 9)];
    await queue.load();
    expect(queue.banner).toMatch(/unreachable/);
    expect(queue.items).toHaveLength(1); // stale but not cleared
  });
});
