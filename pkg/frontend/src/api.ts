// Thin client over the review HTTP/JSON API. All errors surface as
// ApiError with enough structure for the UI to distinguish claim
// conflicts and stale revisions from plain failures.

import type { Decision, QueueFilter, QueueResponse, ReportDoc, ReviewItem } from "./types.js";
import type { ConflictKind } from "./types.js";

export class ApiError extends Error {
  status: number;
  detail: string;
  conflict: ConflictKind | null;

  constructor(status: number, detail: string) {
    super(`API ${status}: ${detail}`);
    this.status = status;
    this.detail = detail;
    this.conflict = classifyConflict(status, detail);
  }
}

function classifyConflict(status: number, detail: string): ConflictKind | null {
  const text = detail.toLowerCase();
  if (status === 409 && text.includes("stale revision")) return "stale_revision";
  if (status === 409) return "already_claimed";
  if (status === 403) return "not_claimant";
  return null;
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    private token: string,
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init: RequestInit = {}): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, {
      ...init,
      headers: {
        Authorization: `Bearer ${this.token}`,
        "Content-Type": "application/json",
        ...(init.headers ?? {}),
      },
    });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = await response.json();
        if (body && typeof body.detail === "string") detail = body.detail;
      } catch {
        // non-JSON error body: keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listRuns(): Promise<{ runs: string[] }> {
    return this.request("/api/v1/runs");
  }

  queue(runId: string, filter: QueueFilter = {}): Promise<QueueResponse> {
    const params = new URLSearchParams();
    if (filter.kind) params.set("kind", filter.kind);
    if (filter.state) params.set("state", filter.state);
    if (filter.paper) params.set("paper", filter.paper);
    const qs = params.toString();
    return this.request(`/api/v1/runs/${encodeURIComponent(runId)}/queue${qs ? `?${qs}` : ""}`);
  }

  claim(itemId: string): Promise<{ item: ReviewItem }> {
    return this.request(`/api/v1/items/${encodeURIComponent(itemId)}/claim`, { method: "POST" });
  }

  resolve(itemId: string, decision: Decision): Promise<{ item: ReviewItem }> {
    return this.request(`/api/v1/items/${encodeURIComponent(itemId)}/resolve`, {
      method: "POST",
      body: JSON.stringify(decision),
    });
  }

  report(runId: string): Promise<ReportDoc> {
    return this.request(`/api/v1/runs/${encodeURIComponent(runId)}/report`);
  }
}
