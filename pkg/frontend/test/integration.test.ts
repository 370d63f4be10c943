// Scripted end-to-end review-session test against the real service: load
// the pending queue, accept a phrase-pattern candidate, supply a meaning
// string through the editor for a subsentence candidate, trigger an
// iteration, and watch a previously unparsed playground sentence flip to
// parsed. No browser is available here, so the UI's state, api, and
// editor modules are driven headlessly, exactly as main.ts wires them.

import { ChildProcess, spawn } from "node:child_process";
import { cpSync, mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { MeaningEditor } from "../src/editor.js";
import { parseMeaningString } from "../src/meaning.js";
import { QueueState } from "../src/queue.js";

const FIXTURES = join(__dirname, "..", "..", "tests", "fixtures");

const CANDIDATES = [
  {
    id: 1,
    kind: "phrase_pattern",
    payload: {
      features: [
        { kind: "word", value: "footy" },
        { kind: "word", value: "game" },
      ],
      core_word_index: 1,
      pos_tag: "NN",
    },
    support: 4,
    confidence: null,
    evidence: ["footy game"],
    status: "pending",
    created_at: 1,
  },
  {
    id: 2,
    kind: "subsentence_pattern",
    payload: { parse_str: "NN|VV|AD", ss_type: "sentence", ss_type2: "d", meaning: "" },
    support: 1,
    confidence: null,
    evidence: ["green ideas sleep furiously"],
    status: "pending",
    created_at: 1,
  },
];

let server: ChildProcess;
let api: ApiClient;

async function waitForService(base: string): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${base}/stats`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error("service did not come up");
}

beforeAll(async () => {
  const dir = mkdtempSync(join(tmpdir(), "semkit-ui-"));
  cpSync(join(FIXTURES, "kb_toy"), join(dir, "kb"), { recursive: true });
  cpSync(join(FIXTURES, "grammar_seed"), join(dir, "grammar"), { recursive: true });
  cpSync(join(FIXTURES, "corpus_unlock.jsonl"), join(dir, "corpus.jsonl"));
  writeFileSync(
    join(dir, "candidates.jsonl"),
    CANDIDATES.map((c) => JSON.stringify(c)).join("\n") + "\n",
  );

  server = spawn(
    "python3",
    [
      "-m", "semkit.cli", "serve",
      "--kb", join(dir, "kb"),
      "--grammar", join(dir, "grammar"),
      "--candidates", join(dir, "candidates.jsonl"),
      "--corpus", join(dir, "corpus.jsonl"),
      "--bind", "127.0.0.1:0",
    ],
    { stdio: ["ignore", "ignore", "pipe"] },
  );
  const port = await new Promise<number>((resolve, reject) => {
    let buffer = "";
    const timer = setTimeout(() => reject(new Error(`no bind line in: ${buffer}`)), 15000);
    server.stderr!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const m = buffer.match(/review service on http:\/\/127\.0\.0\.1:(\d+)/);
      if (m) {
        clearTimeout(timer);
        resolve(Number(m[1]));
      }
    });
    server.on("exit", (code) => reject(new Error(`service exited early (${code}): ${buffer}`)));
  });
  const base = `http://127.0.0.1:${port}`;
  await waitForService(base);
  api = new ApiClient(base);
}, 30000);

afterAll(() => {
  server?.kill();
});

describe("review session against the live service", () => {
  it("walks the full accept/meaning/iterate/playground loop", async () => {
    const queue = new QueueState(api);
    await queue.load();
    expect(queue.banner).toBeNull();
    expect(queue.items.map((c) => c.id)).toEqual([1, 2]); // support-descending

    // the playground sentence is unparsed before any decision
    const before = await api.parse("footy game.");
    expect(before.subsentences[0]?.status).toBe("unparsed");
    expect(before.subsentences[0]?.parse_str).toBe("NN|NN");

    // accept the phrase-pattern candidate straight from the queue
    expect(await queue.decide(1, "accept")).toBe(true);
    expect(queue.items.map((c) => c.id)).toEqual([2]);
    const accepted = await api.candidate(1);
    expect(accepted.status).toBe("accepted");

    // the subsentence candidate needs a meaning string built in the editor
    const pending = queue.current()!;
    expect(pending.kind).toBe("subsentence_pattern");
    const editor = new MeaningEditor(String(pending.payload.parse_str));
    expect(editor.slotLabels()).toEqual(["0:NN", "1:VV", "2:AD"]);
    expect(editor.addRelation("nsubj", 0, 3)).toMatch(/out of range/); // unconstructible
    expect(editor.addRelation("nsubj", 0, 1)).toBeNull();
    expect(editor.preview(pending.evidence[0]!.split(" "))).toEqual([
      { relType: "nsubj", head: "green", tail: "ideas" },
    ]);
    const meaning = editor.buildMeaning();
    expect(parseMeaningString(meaning)).toEqual([{ relType: "nsubj", headIndex: 0, tailIndex: 1 }]);
    expect(await queue.decide(2, "accept", meaning)).toBe(true);
    expect(queue.items).toHaveLength(0);

    // trigger an iteration; the accepted structure unlocks one corpus line
    const { reports } = await api.iterate(1);
    expect(reports[0]!.sentences_total).toBe(10);
    expect(reports[0]!.subsentence_coverage).toBeCloseTo(0.7, 10);

    // and the playground parse has flipped to parsed
    const after = await api.parse("footy game.");
    expect(after.subsentences[0]?.status).toBe("parsed");
    expect(after.subsentences[0]?.parse_str).toBe("NN");
    expect(after.subsentences[0]?.elements[0]?.core_word).toBe("game");
    expect(after.coverage).toBe(1.0);
  }, 30000);

  it("rejects a second decision on an already-decided candidate", async () => {
    await expect(api.decide(2, "accept")).rejects.toMatchObject({ status: 400 });
  });
});
