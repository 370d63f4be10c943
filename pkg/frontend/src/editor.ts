// Meaning editor model for subsentence candidates: the parse_str
// components become labeled slots, the reviewer assembles relations from
// dropdown picks, and only index-valid selections are constructible, so
// no invalid meaning string can ever reach the POST.

import { REL_TYPES, RelationSpec, RelType, serializeMeaning, validateSpec } from "./meaning.js";

export class MeaningEditor {
  readonly components: string[];
  specs: RelationSpec[] = [];

  constructor(parseStr: string) {
    this.components = parseStr.split("|");
  }

  slotLabels(): string[] {
    return this.components.map((pos, i) => `${i}:${pos}`);
  }

  /** Add a relation; returns null on success or a message describing why
   * the selection is invalid (nothing is added then). */
  addRelation(relType: RelType, headIndex: number, tailIndex: number): string | null {
    const spec: RelationSpec = { relType, headIndex, tailIndex };
    const problem = validateSpec(spec, this.components.length);
    if (problem) return problem;
    this.specs.push(spec);
    return null;
  }

  removeRelation(index: number): void {
    this.specs.splice(index, 1);
  }

  isValid(): boolean {
    return (
      this.specs.length > 0 &&
      this.specs.every((s) => validateSpec(s, this.components.length) === null)
    );
  }

  buildMeaning(): string {
    if (!this.isValid()) {
      throw new Error("meaning editor: no valid relations selected");
    }
    return serializeMeaning(this.specs);
  }

  /** The relations an evidence token sequence would yield under the current
   * selection; used for the live preview. */
  preview(tokens: string[]): { relType: RelType; head: string; tail: string }[] {
    return this.specs.map((s) => ({
      relType: s.relType,
      head: tokens[s.headIndex] ?? `<${s.headIndex}>`,
      tail: tokens[s.tailIndex] ?? `<${s.tailIndex}>`,
    }));
  }

  static relTypes(): readonly RelType[] {
    return REL_TYPES;
  }
}
