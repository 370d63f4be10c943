// Meaning strings: comma-separated "type:head:tail" relation specs, e.g.
// "nsubj:0:1,dobj:1:2". This mirrors the server's format exactly so every
// string the editor emits round-trips through the engine's parser.

export const REL_TYPES = ["nsubj", "dobj"] as const;
export type RelType = (typeof REL_TYPES)[number];

export interface RelationSpec {
  relType: RelType;
  headIndex: number;
  tailIndex: number;
}

export function parseMeaningString(s: string): RelationSpec[] {
  if (s === "") return [];
  return s.split(",").map((item) => {
    const parts = item.split(":");
    if (parts.length !== 3) {
      throw new Error(`meaning item ${JSON.stringify(item)}: expected 3 colon-separated fields`);
    }
    const [relType, headRaw, tailRaw] = parts as [string, string, string];
    if (!(REL_TYPES as readonly string[]).includes(relType)) {
      throw new Error(`meaning item ${JSON.stringify(item)}: unsupported relation type`);
    }
    const head = Number(headRaw);
    const tail = Number(tailRaw);
    if (!Number.isInteger(head) || !Number.isInteger(tail) || headRaw.trim() !== headRaw || tailRaw.trim() !== tailRaw) {
      throw new Error(`meaning item ${JSON.stringify(item)}: indices must be integers`);
    }
    if (head < 0 || tail < 0) {
      throw new Error(`meaning item ${JSON.stringify(item)}: negative index`);
    }
    if (head === tail) {
      throw new Error(`meaning item ${JSON.stringify(item)}: head and tail must differ`);
    }
    return { relType: relType as RelType, headIndex: head, tailIndex: tail };
  });
}

export function serializeMeaning(specs: RelationSpec[]): string {
  return specs.map((r) => `${r.relType}:${r.headIndex}:${r.tailIndex}`).join(",");
}

export function validateSpec(spec: RelationSpec, componentCount: number): string | null {
  if (!(REL_TYPES as readonly string[]).includes(spec.relType)) return "unsupported relation type";
  if (!Number.isInteger(spec.headIndex) || !Number.isInteger(spec.tailIndex)) return "indices must be integers";
  if (spec.headIndex < 0 || spec.tailIndex < 0) return "negative index";
  if (spec.headIndex >= componentCount || spec.tailIndex >= componentCount) {
    return `index out of range for ${componentCount} components`;
  }
  if (spec.headIndex === spec.tailIndex) return "head and tail must differ";
  return null;
}
