// Pure HTML-string renderers: no DOM access here, so every view is unit
// testable. Evidence snippets arrive from the API already windowed to the
// matched span; we highlight them whole rather than re-tokenizing.

import type { Candidate, ParseResult, ParsedSubsentence } from "./types.js";
import type { MeaningEditor } from "./editor.js";

export function esc(s: unknown): string {
  return String(s)
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

export function describePayload(c: Candidate): string {
  const p = c.payload;
  switch (c.kind) {
    case "concept_rule":
      return `${p.position} "${p.chars}" → concept ${p.concept_id} (coverage ${p.coverage_ratio}, precision ${p.precision_ratio})`;
    case "new_concept":
      return `new concept "${p.surface}"`;
    case "concept_feature": {
      const members = (p.members as string[]).join(", ");
      return p.side === "before"
        ? `[{${members}}] + "${p.anchor}"`
        : `"${p.anchor}" + [{${members}}]`;
    }
    case "phrase_pattern": {
      const features = (p.features as { kind: string; value: unknown }[])
        .map((f) => `${f.kind}:${f.value}`)
        .join(" | ");
      return `pattern [${features}] → ${p.pos_tag}`;
    }
    case "subsentence_pattern":
      return `structure ${p.parse_str} (${p.ss_type}/${p.ss_type2})`;
  }
}

export function renderCandidateRow(c: Candidate, selected: boolean): string {
  const related = c.related_ids?.length
    ? `<span class="related">↔ ${c.related_ids.map((id) => `#${id}`).join(" ")}</span>`
    : "";
  const confidence = c.confidence === null ? "" : ` · conf ${c.confidence.toFixed(2)}`;
  return `<li class="row ${selected ? "selected" : ""}" data-id="${c.id}">
    <span class="kind kind-${c.kind}">${esc(c.kind)}</span>
    <span class="desc">${esc(describePayload(c))}</span>
    <span class="support">support ${c.support}${confidence}</span>
    ${related}
  </li>`;
}

export function renderEvidence(c: Candidate): string {
  const snippets = c.evidence
    .map((e) => `<li><mark>${esc(e)}</mark></li>`)
    .join("");
  return `<ul class="evidence">${snippets}</ul>`;
}

export function renderQueue(items: Candidate[], cursor: number, banner: string | null): string {
  const bannerHtml = banner
    ? `<div class="banner">⚠ ${esc(banner)} <button id="retry">retry</button></div>`
    : "";
  if (items.length === 0) {
    return `${bannerHtml}<p class="empty">No pending candidates.</p>`;
  }
  const rows = items.map((c, i) => renderCandidateRow(c, i === cursor)).join("\n");
  return `${bannerHtml}<ul class="queue">${rows}</ul>`;
}

function renderElementTree(sub: ParsedSubsentence): string {
  const cells = sub.elements
    .map(
      (e, i) => `<span class="element" title="element ${i}">
        <span class="pos">${esc(e.pos)}</span>
        <span class="value">${esc(e.value)}</span>
        <span class="core">core: <mark>${esc(e.core_word)}</mark></span>
      </span>`,
    )
    .join("");
  return `<div class="elements">${cells}</div>`;
}

function renderRelations(sub: ParsedSubsentence): string {
  if (sub.relations.length === 0) return "";
  const arcs = sub.relations
    .map(
      (r) =>
        `<li class="arc"><b>${esc(r.type)}</b>(${esc(r.head)}<sub>${r.head_index}</sub> → ${esc(r.tail)}<sub>${r.tail_index}</sub>)</li>`,
    )
    .join("");
  return `<ul class="relations">${arcs}</ul>`;
}

export function renderParseResult(result: ParseResult): string {
  const subs = result.subsentences
    .map((sub) => {
      const badge =
        sub.status === "parsed"
          ? `<span class="badge parsed">${esc(sub.parse_str)} · ${esc(sub.ss_type)}/${esc(sub.ss_type2)}</span>`
          : `<span class="badge unparsed">${esc(sub.parse_str)} · no matching subsentence pattern</span>`;
      return `<div class="subsentence ${sub.status}">${badge}${renderElementTree(sub)}${renderRelations(sub)}</div>`;
    })
    .join("");
  return `<div class="parse-result">${subs}<div class="coverage">coverage ${result.coverage.toFixed(2)}</div></div>`;
}

export function renderEditor(editor: MeaningEditor, previewTokens: string[] | null): string {
  const slots = editor
    .slotLabels()
    .map((label) => `<span class="slot">${esc(label)}</span>`)
    .join(" | ");
  const chosen = editor.specs
    .map(
      (s, i) =>
        `<li>${esc(s.relType)}:${s.headIndex}:${s.tailIndex} <button class="remove-spec" data-index="${i}">×</button></li>`,
    )
    .join("");
  const preview =
    previewTokens === null
      ? ""
      : `<ul class="preview">${editor
          .preview(previewTokens)
          .map((r) => `<li>${esc(r.relType)}(${esc(r.head)} → ${esc(r.tail)})</li>`)
          .join("")}</ul>`;
  const meaning = editor.isValid() ? esc(editor.buildMeaning()) : "<i>select at least one relation</i>";
  return `<div class="editor">
    <div class="slots">${slots}</div>
    <ul class="chosen">${chosen}</ul>
    ${preview}
    <div class="meaning">meaning: <code>${meaning}</code></div>
  </div>`;
}
