// Payload shapes served by the review API. The UI displays exactly these
// fields; support/confidence are never derived client-side.

export type CandidateKind =
  | "concept_rule"
  | "new_concept"
  | "concept_feature"
  | "phrase_pattern"
  | "subsentence_pattern";

export type CandidateStatus = "pending" | "accepted" | "rejected";

export interface Candidate {
  id: number;
  kind: CandidateKind;
  payload: Record<string, unknown>;
  support: number;
  confidence: number | null;
  evidence: string[];
  status: CandidateStatus;
  created_at: number;
  error_note?: string;
  related_ids?: number[];
}

export interface CandidatePage {
  items: Candidate[];
  page: number;
  per_page: number;
  total: number;
}

export interface ParsedElement {
  value: string;
  pos: string;
  core_word: string;
}

export interface ParsedRelation {
  type: string;
  head: string;
  tail: string;
  head_index: number;
  tail_index: number;
}

export interface ParsedSubsentence {
  parse_str: string;
  status: "parsed" | "unparsed";
  ss_type: string | null;
  ss_type2: string | null;
  elements: ParsedElement[];
  relations: ParsedRelation[];
}

export interface ParseResult {
  text: string;
  subsentences: ParsedSubsentence[];
  coverage: number;
}

export interface DecisionResult {
  applied: boolean;
  candidate: Candidate;
}

export interface IterationReport {
  iteration: number;
  sentences_total: number;
  sentences_parsed: number;
  subsentence_coverage: number;
  candidates_emitted: Record<string, number>;
  wall_time_seconds: number;
}

export interface Stats {
  knowledge_base: Record<string, number>;
  grammar: Record<string, number>;
  candidates: Record<string, number>;
}
