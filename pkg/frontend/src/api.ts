// Typed client for the recoin HTTP API. All numbers the UI displays come out
// of these response bodies; nothing is recomputed client-side.

export interface Recommendation {
  property_id: string;
  count: number;
  class_size: number;
  relevance: number;
  display: string;
  class_id: string;
}

export interface CompletenessReport {
  level: number;
  level_label: string;
  score: number;
  score_display: string;
  avg_top5_missing: number;
  avg_top5_display: string;
  missing: Recommendation[];
  classes_used: string[];
  fingerprint: string;
}

export interface EntityResponse {
  id: string;
  claims: Record<string, string[]>;
  fingerprint: string;
}

export interface SessionInfo {
  session_id: string;
  condition: string;
  ui_variant: string;
  item_id: string;
  start: string;
  limit_seconds: number;
  before: CompletenessReport;
  fingerprint: string;
}

export interface EditAck {
  session_id: string;
  edit_count: number;
  usage: number;
  remaining_seconds: number;
}

export interface TaskResult {
  session_id: string;
  relevance: number;
  grade: string;
  usage: number;
  edit_count: number;
  before_score: number;
  after_score: number;
  fingerprint: string;
}

export interface SelfReportBody {
  comprehension: number;
  fairness: number;
  accuracy: number;
  trust: number;
  free_text: Record<string, string>;
}

export interface WhatIfBody {
  deselected: string[];
  min_count: number | null;
  max_count: number | null;
}

export class ApiError extends Error {
  constructor(public status: number, detail: string) {
    super(detail);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  const body = await response.json().catch(() => ({}));
  if (!response.ok) {
    throw new ApiError(response.status, String((body as any).detail ?? response.status));
  }
  return body as T;
}

function post(body: unknown): RequestInit {
  return {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify(body),
  };
}

export class ApiClient {
  constructor(private base: string = "") {}

  entity(itemId: string): Promise<EntityResponse> {
    return request(`${this.base}/api/entity/${encodeURIComponent(itemId)}`);
  }

  completeness(itemId: string): Promise<CompletenessReport> {
    return request(`${this.base}/api/entity/${encodeURIComponent(itemId)}/completeness`);
  }

  whatIf(itemId: string, body: WhatIfBody): Promise<CompletenessReport> {
    return request(
      `${this.base}/api/entity/${encodeURIComponent(itemId)}/whatif`, post(body));
  }

  createSession(itemId: string, condition?: string): Promise<SessionInfo> {
    return request(`${this.base}/api/session`,
      post(condition ? { item_id: itemId, condition } : { item_id: itemId }));
  }

  edit(sessionId: string, property: string, value: string,
       viaRecoin: boolean): Promise<EditAck> {
    return request(`${this.base}/api/session/${sessionId}/edit`,
      post({ property, value, via_recoin: viaRecoin }));
  }

  finalize(sessionId: string): Promise<TaskResult> {
    return request(`${this.base}/api/session/${sessionId}/finalize`, post({}));
  }

  submitReport(sessionId: string, body: SelfReportBody):
      Promise<{ session_id: string; stored: boolean; superseded: boolean }> {
    return request(`${this.base}/api/session/${sessionId}/report`, post(body));
  }
}
