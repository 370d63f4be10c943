// DOM wiring: the only module that touches document. Keyboard-driven
// queue (j/k move, a accept, r reject, s skip), meaning editor dialog for
// subsentence candidates, iterate button, and the parse playground.

import { ApiClient } from "./api.js";
import { MeaningEditor } from "./editor.js";
import { QueueState } from "./queue.js";
import { renderEditor, renderEvidence, renderParseResult, renderQueue, esc } from "./render.js";
import type { Candidate, CandidateKind } from "./types.js";

const api = new ApiClient("");
const queue = new QueueState(api);

const $ = (id: string) => document.getElementById(id)!;

let editor: MeaningEditor | null = null;
let editorCandidate: Candidate | null = null;

function redrawQueue(): void {
  $("queue-pane").innerHTML = renderQueue(queue.items, queue.cursor, queue.banner);
  const current = queue.current();
  $("detail-pane").innerHTML = current
    ? `<h3>#${current.id} ${esc(current.kind)}</h3>${renderEvidence(current)}`
    : "";
  document.querySelector("#retry")?.addEventListener("click", () => void reload());
  for (const row of document.querySelectorAll<HTMLElement>(".queue .row")) {
    row.addEventListener("click", () => {
      queue.cursor = queue.items.findIndex((c) => c.id === Number(row.dataset.id));
      redrawQueue();
    });
  }
}

async function reload(): Promise<void> {
  await queue.load();
  redrawQueue();
  await refreshStats();
}

async function refreshStats(): Promise<void> {
  try {
    const stats = await api.stats();
    $("stats").textContent =
      `pending ${stats.candidates.pending ?? 0} · accepted ${stats.candidates.accepted ?? 0} · ` +
      `rejected ${stats.candidates.rejected ?? 0} · phrase patterns ${stats.grammar.phrase_patterns ?? 0} · ` +
      `subsentence patterns ${stats.grammar.subsentence_patterns ?? 0}`;
  } catch {
    $("stats").textContent = "";
  }
}

function openEditor(candidate: Candidate): void {
  editorCandidate = candidate;
  editor = new MeaningEditor(String(candidate.payload.parse_str));
  const dialog = $("editor-dialog") as HTMLDialogElement;
  redrawEditor();
  dialog.showModal();
}

function redrawEditor(): void {
  if (!editor || !editorCandidate) return;
  const tokens = editorCandidate.evidence[0]?.split(" ") ?? null;
  $("editor-body").innerHTML = renderEditor(editor, tokens);
  const count = editor.components.length;
  const options = (sel: string) =>
    Array.from({ length: count }, (_, i) => `<option value="${i}">${i}:${esc(editor!.components[i])}</option>`)
      .join("");
  $("editor-controls").innerHTML = `
    <select id="rel-type">${MeaningEditor.relTypes()
      .map((t) => `<option>${t}</option>`)
      .join("")}</select>
    <select id="rel-head">${options("head")}</select>
    <select id="rel-tail">${options("tail")}</select>
    <button id="add-spec">add relation</button>
    <span id="editor-problem" class="problem"></span>
  `;
  $("add-spec").addEventListener("click", () => {
    const relType = ($("rel-type") as HTMLSelectElement).value as "nsubj" | "dobj";
    const head = Number(($("rel-head") as HTMLSelectElement).value);
    const tail = Number(($("rel-tail") as HTMLSelectElement).value);
    const problem = editor!.addRelation(relType, head, tail);
    if (problem) {
      $("editor-problem").textContent = problem;
    } else {
      redrawEditor();
    }
  });
  for (const btn of document.querySelectorAll<HTMLElement>(".remove-spec")) {
    btn.addEventListener("click", () => {
      editor!.removeRelation(Number(btn.dataset.index));
      redrawEditor();
    });
  }
  ($("editor-accept") as HTMLButtonElement).disabled = !editor.isValid();
}

async function decideCurrent(decision: "accept" | "reject"): Promise<void> {
  const current = queue.current();
  if (!current) return;
  if (decision === "accept" && current.kind === "subsentence_pattern") {
    openEditor(current);
    return;
  }
  await queue.decide(current.id, decision);
  redrawQueue();
  await refreshStats();
}

function wireEditorDialog(): void {
  $("editor-accept").addEventListener("click", async () => {
    if (!editor || !editorCandidate || !editor.isValid()) return;
    const meaning = editor.buildMeaning();
    ($("editor-dialog") as HTMLDialogElement).close();
    await queue.decide(editorCandidate.id, "accept", meaning);
    redrawQueue();
    await refreshStats();
  });
  $("editor-cancel").addEventListener("click", () => {
    ($("editor-dialog") as HTMLDialogElement).close();
  });
}

function wirePlayground(): void {
  const run = async () => {
    const text = ($("play-text") as HTMLInputElement).value;
    if (!text.trim()) {
      $("play-result").innerHTML = "";
      return;
    }
    try {
      const result = await api.parse(text);
      $("play-result").innerHTML = renderParseResult(result);
    } catch (err) {
      $("play-result").innerHTML = `<div class="banner">⚠ ${esc(String(err))}</div>`;
    }
  };
  $("play-run").addEventListener("click", () => void run());
  $("play-text").addEventListener("keydown", (ev) => {
    if ((ev as KeyboardEvent).key === "Enter") void run();
  });
}

function wireKeyboard(): void {
  document.addEventListener("keydown", (ev) => {
    if (ev.target instanceof HTMLInputElement || ev.target instanceof HTMLSelectElement) return;
    if (($("editor-dialog") as HTMLDialogElement).open) return;
    switch (ev.key) {
      case "j":
        queue.move(1);
        redrawQueue();
        break;
      case "k":
        queue.move(-1);
        redrawQueue();
        break;
      case "s":
        queue.skip();
        redrawQueue();
        break;
      case "a":
        void decideCurrent("accept");
        break;
      case "r":
        void decideCurrent("reject");
        break;
    }
  });
}

function wireToolbar(): void {
  $("reload").addEventListener("click", () => void reload());
  $("kind-filter").addEventListener("change", () => {
    const value = ($("kind-filter") as HTMLSelectElement).value;
    queue.filters.kind = value ? (value as CandidateKind) : undefined;
    void reload();
  });
  $("iterate").addEventListener("click", async () => {
    $("iterate-result").textContent = "running…";
    try {
      const { reports } = await api.iterate(1);
      const r = reports[0];
      $("iterate-result").textContent = r
        ? `round ${r.iteration}: coverage ${r.subsentence_coverage.toFixed(3)} over ${r.sentences_total} sentences`
        : "no rounds run";
      await reload();
    } catch (err) {
      $("iterate-result").textContent = `⚠ ${String(err)}`;
    }
  });
}

async function boot(): Promise<void> {
  wireToolbar();
  wireEditorDialog();
  wirePlayground();
  wireKeyboard();
  await reload();
}

void boot();
