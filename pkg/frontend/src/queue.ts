// Candidate queue state: support-descending pending list with keyboard
// cursor and optimistic accept/reject that rolls back when the API call
// fails. A row only stays "committed" if the server said 2xx.

import { ApiClient, ApiError } from "./api.js";
import type { Candidate, CandidateKind } from "./types.js";

export interface QueueFilters {
  kind?: CandidateKind;
}

export class QueueState {
  items: Candidate[] = [];
  cursor = 0;
  banner: string | null = null;
  filters: QueueFilters = {};

  constructor(private api: ApiClient) {}

  async load(page = 1, perPage = 100): Promise<void> {
    try {
      const result = await this.api.candidates("pending", this.filters.kind, page, perPage);
      this.items = result.items;
      this.cursor = Math.min(this.cursor, Math.max(0, this.items.length - 1));
      this.banner = null;
    } catch (err) {
      this.banner = err instanceof ApiError ? err.message : String(err);
    }
  }

  current(): Candidate | undefined {
    return this.items[this.cursor];
  }

  move(delta: number): void {
    if (this.items.length === 0) return;
    this.cursor = Math.min(this.items.length - 1, Math.max(0, this.cursor + delta));
  }

  skip(): void {
    this.move(1);
  }

  /** Optimistically remove the row, then confirm with the server; the row
   * comes back (with an error banner) on any failure, and also when the
   * server refused the decision (applied=false, e.g. missing meaning). */
  async decide(id: number, decision: "accept" | "reject", meaning?: string): Promise<boolean> {
    const index = this.items.findIndex((c) => c.id === id);
    if (index < 0) return false;
    const removed = this.items[index]!;
    this.items.splice(index, 1);
    this.cursor = Math.min(this.cursor, Math.max(0, this.items.length - 1));
    try {
      const result = await this.api.decide(id, decision, meaning);
      if (!result.applied) {
        this.items.splice(index, 0, result.candidate);
        this.banner = result.candidate.error_note ?? "decision not applied";
        return false;
      }
      this.banner = null;
      return true;
    } catch (err) {
      this.items.splice(index, 0, removed);
      this.banner = err instanceof ApiError ? err.message : String(err);
      return false;
    }
  }
}
