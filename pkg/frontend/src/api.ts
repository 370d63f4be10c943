// Thin client for the review service. All state mutation goes through
// decide() and iterate(); everything else is read-only.

import type {
  Candidate,
  CandidatePage,
  CandidateStatus,
  DecisionResult,
  IterationReport,
  ParseResult,
  Stats,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private base: string = "",
    private fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchFn(this.base + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    const body = await resp.text();
    if (!resp.ok) {
      let message = body;
      try {
        message = (JSON.parse(body) as { error?: string }).error ?? body;
      } catch {
        // non-JSON error body; keep raw text
      }
      throw new ApiError(resp.status, message);
    }
    return JSON.parse(body) as T;
  }

  stats(): Promise<Stats> {
    return this.request<Stats>("/stats");
  }

  candidates(
    status?: CandidateStatus,
    kind?: string,
    page = 1,
    perPage = 50,
  ): Promise<CandidatePage> {
    const params = new URLSearchParams();
    if (status) params.set("status", status);
    if (kind) params.set("kind", kind);
    params.set("page", String(page));
    params.set("per_page", String(perPage));
    return this.request<CandidatePage>(`/candidates?${params.toString()}`);
  }

  candidate(id: number): Promise<Candidate> {
    return this.request<Candidate>(`/candidates/${id}`);
  }

  decide(id: number, decision: "accept" | "reject", meaning?: string): Promise<DecisionResult> {
    const body: Record<string, string> = { decision };
    if (meaning !== undefined) body.meaning = meaning;
    return this.request<DecisionResult>(`/candidates/${id}/decision`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  iterate(rounds: number): Promise<{ reports: IterationReport[] }> {
    return this.request<{ reports: IterationReport[] }>("/iterate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ rounds }),
    });
  }

  parse(text: string, mode: "fast" | "exhaustive" = "fast"): Promise<ParseResult> {
    const params = new URLSearchParams({ text, mode });
    return this.request<ParseResult>(`/parse?${params.toString()}`);
  }
}
