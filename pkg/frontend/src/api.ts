/** Typed client for the knowledge-base service.
 *
 * Every method maps to exactly one documented endpoint; nothing else in
 * the console performs network I/O, which is what makes the endpoint
 * contract testable with a replaying mock.
 */

import type {
  ApiErrorBody,
  AssessmentResponse,
  DecisionValue,
  DefectDetail,
  SearchBody,
  SearchResponse,
  Session,
  Suggestion,
  Measurement,
} from "./types.js";

export type FetchFn = (url: string, init?: RequestInit) => Promise<Response>;

export interface ClientConfig {
  baseUrl: string;
  bearerToken?: string;
  fetchFn?: FetchFn;
}

export class ApiError extends Error {
  readonly status: number;
  readonly errorType: string;

  constructor(status: number, body: ApiErrorBody) {
    super(body.detail || body.error);
    this.status = status;
    this.errorType = body.error;
  }

  get isStepMismatch(): boolean {
    return this.errorType === "IllegalTransition";
  }
}

async function toError(response: Response): Promise<ApiError> {
  let body: ApiErrorBody = { error: `HTTP${response.status}`, detail: response.statusText };
  try {
    const parsed = await response.json();
    if (parsed && typeof parsed.error === "string") {
      body = parsed as ApiErrorBody;
    } else if (parsed && parsed.detail) {
      body = { error: `HTTP${response.status}`, detail: JSON.stringify(parsed.detail) };
    }
  } catch {
    /* non-JSON error body; keep the status fallback */
  }
  return new ApiError(response.status, body);
}

export class OakClient {
  private readonly baseUrl: string;
  private readonly bearerToken?: string;
  private readonly fetchFn: FetchFn;

  constructor(config: ClientConfig) {
    this.baseUrl = config.baseUrl.replace(/\/+$/, "");
    this.bearerToken = config.bearerToken;
    this.fetchFn = config.fetchFn ?? ((url, init) => fetch(url, init));
  }

  private headers(contentType?: string): Record<string, string> {
    const headers: Record<string, string> = {};
    if (contentType) headers["Content-Type"] = contentType;
    if (this.bearerToken) headers["Authorization"] = `Bearer ${this.bearerToken}`;
    return headers;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const response = await this.fetchFn(this.baseUrl + path, {
      method,
      headers: this.headers(body === undefined ? undefined : "application/json"),
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) throw await toError(response);
    return (await response.json()) as T;
  }

  // --- media ---------------------------------------------------------------

  async uploadMedia(data: ArrayBuffer | Uint8Array, mime: string): Promise<string> {
    const payload = data instanceof Uint8Array
      ? data.slice().buffer
      : data;
    const response = await this.fetchFn(`${this.baseUrl}/media`, {
      method: "POST",
      headers: this.headers(mime),
      body: payload,
    });
    if (!response.ok) throw await toError(response);
    const body = (await response.json()) as { media_id: string };
    return body.media_id;
  }

  /** URL for <img src> / <audio src>; the browser issues the GET itself. */
  mediaUrl(mediaId: string): string {
    return `${this.baseUrl}/media/${mediaId}`;
  }

  // --- search ---------------------------------------------------------------

  search(body: SearchBody): Promise<SearchResponse> {
    return this.request<SearchResponse>("POST", "/search", body);
  }

  // --- workflow ---------------------------------------------------------------

  startSession(productId: string, operatorId: string): Promise<Session> {
    return this.request<Session>("POST", "/sessions", {
      product_id: productId,
      operator_id: operatorId,
    });
  }

  getSession(sessionId: string): Promise<Session> {
    return this.request<Session>("GET", `/sessions/${sessionId}`);
  }

  attachDefect(sessionId: string, defectId: string): Promise<Session> {
    return this.request<Session>("POST", `/sessions/${sessionId}/defect`, {
      defect_id: defectId,
    });
  }

  markAssessed(sessionId: string): Promise<AssessmentResponse> {
    return this.request<AssessmentResponse>("POST", `/sessions/${sessionId}/assessed`);
  }

  logMeasurement(
    sessionId: string,
    metric: string,
    value: number,
    unit: string,
    commentaryMediaId?: string,
  ): Promise<Measurement> {
    return this.request<Measurement>("POST", `/sessions/${sessionId}/measurements`, {
      metric,
      value,
      unit,
      commentary_media_id: commentaryMediaId ?? null,
    });
  }

  requestSuggestion(sessionId: string): Promise<Suggestion> {
    return this.request<Suggestion>("POST", `/sessions/${sessionId}/suggestion`);
  }

  recordDecision(
    sessionId: string,
    decision: DecisionValue,
    overrideComment?: string,
  ): Promise<Session> {
    return this.request<Session>("POST", `/sessions/${sessionId}/decision`, {
      decision,
      override_comment: overrideComment ?? null,
    });
  }

  // --- reads ------------------------------------------------------------------

  defectDetail(nodeId: string): Promise<DefectDetail> {
    return this.request<DefectDetail>("GET", `/defects/${nodeId}`);
  }
}
