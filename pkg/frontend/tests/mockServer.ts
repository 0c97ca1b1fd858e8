/** Mock service that replays recorded API fixtures.
 *
 * It implements just enough of the documented HTTP surface to drive the
 * console: every call is logged, anything outside the documented
 * endpoint list is rejected and remembered, and GET /sessions/{id}
 * always returns the last session state a replayed mutation produced —
 * exactly how the real server behaves.
 */

import fixturesJson from "./fixtures.json";
import type { FetchFn } from "../src/api.js";
import type {
  AssessmentResponse,
  DefectDetail,
  Measurement,
  SearchBody,
  SearchResponse,
  Session,
  Suggestion,
} from "../src/types.js";

export interface Fixtures {
  searches: { body: SearchBody; response: SearchResponse }[];
  commentary: { bytes_b64: string; mime: string; media_id: string };
  workflow: {
    defect_id: string;
    start: { body: { product_id: string; operator_id: string }; response: Session };
    attach: Session;
    assessed: AssessmentResponse;
    measurement: { body: Record<string, unknown>; response: Measurement };
    session_after_measurement: Session;
    suggestion: Suggestion;
    session_after_suggestion: Session;
    decision: { body: Record<string, unknown>; response: Session };
  };
  defect_detail: DefectDetail;
}

export interface RecordedCall {
  method: string;
  path: string;
  body: unknown;
  headers: Record<string, string>;
}

interface Intercept {
  method: string;
  pathPattern: RegExp;
  status: number;
  body: unknown;
}

const DOCUMENTED: [string, RegExp][] = [
  ["POST", /^\/media$/],
  ["GET", /^\/media\/[0-9a-f]{64}$/],
  ["POST", /^\/catalog$/],
  ["POST", /^\/documents$/],
  ["POST", /^\/triplets$/],
  ["POST", /^\/search$/],
  ["POST", /^\/sessions$/],
  ["GET", /^\/sessions\/[^/]+$/],
  ["POST", /^\/sessions\/[^/]+\/defect$/],
  ["POST", /^\/sessions\/[^/]+\/assessed$/],
  ["POST", /^\/sessions\/[^/]+\/measurements$/],
  ["POST", /^\/sessions\/[^/]+\/suggestion$/],
  ["POST", /^\/sessions\/[^/]+\/decision$/],
  ["POST", /^\/ratings$/],
  ["GET", /^\/defects\/[^/]+$/],
  ["GET", /^\/health$/],
  ["POST", /^\/bench\/run$/],
];

export function loadFixtures(): Fixtures {
  return structuredClone(fixturesJson) as unknown as Fixtures;
}

function isDocumented(method: string, path: string): boolean {
  return DOCUMENTED.some(([m, re]) => m === method && re.test(path));
}

function json(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function sortKeys(value: unknown): unknown {
  if (Array.isArray(value)) return value.map(sortKeys);
  if (value && typeof value === "object") {
    const record = value as Record<string, unknown>;
    return Object.fromEntries(Object.keys(record).sort().map((k) => [k, sortKeys(record[k])]));
  }
  return value;
}

function sameBody(a: unknown, b: unknown): boolean {
  return JSON.stringify(sortKeys(a)) === JSON.stringify(sortKeys(b));
}

export class MockServer {
  readonly fixtures: Fixtures;
  readonly calls: RecordedCall[] = [];
  readonly undocumented: RecordedCall[] = [];
  private currentSession: Session | null = null;
  private intercepts: Intercept[] = [];

  constructor(fixtures: Fixtures = loadFixtures()) {
    this.fixtures = fixtures;
  }

  /** Endpoint → path list, for asserting exact call order in tests. */
  get callSequence(): string[] {
    return this.calls.map((c) => `${c.method} ${c.path}`);
  }

  /** Make the next matching request fail with the given error payload. */
  failOnce(method: string, pathPattern: RegExp, status: number, body: unknown): void {
    this.intercepts.push({ method, pathPattern, status, body });
  }

  /** Pretend a session already exists server-side (resume scenarios). */
  seedSession(session: Session): void {
    this.currentSession = session;
  }

  get fetchFn(): FetchFn {
    return (url, init) => this.handle(url, init);
  }

  private async handle(url: string, init?: RequestInit): Promise<Response> {
    const method = (init?.method ?? "GET").toUpperCase();
    const path = new URL(url).pathname;
    const headers = (init?.headers ?? {}) as Record<string, string>;
    const rawBody = init?.body;
    let body: unknown = null;
    if (typeof rawBody === "string") {
      body = JSON.parse(rawBody);
    } else if (rawBody instanceof ArrayBuffer) {
      body = { byte_length: rawBody.byteLength };
    }
    const call: RecordedCall = { method, path, body, headers };
    this.calls.push(call);

    if (!isDocumented(method, path)) {
      this.undocumented.push(call);
      return json(404, { error: "MissingEndpoint", detail: `${method} ${path}` });
    }

    const interceptIndex = this.intercepts.findIndex(
      (i) => i.method === method && i.pathPattern.test(path));
    if (interceptIndex >= 0) {
      const intercept = this.intercepts.splice(interceptIndex, 1)[0]!;
      return json(intercept.status, intercept.body);
    }

    return this.route(method, path, body);
  }

  private route(method: string, path: string, body: unknown): Response {
    const wf = this.fixtures.workflow;

    if (method === "POST" && path === "/media") {
      return json(200, { media_id: this.fixtures.commentary.media_id });
    }
    if (method === "GET" && path.startsWith("/media/")) {
      const bytes = Uint8Array.from(atob(this.fixtures.commentary.bytes_b64),
        (ch) => ch.charCodeAt(0));
      return new Response(bytes, {
        status: 200, headers: { "Content-Type": this.fixtures.commentary.mime },
      });
    }

    if (method === "POST" && path === "/search") {
      const match = this.fixtures.searches.find((s) => sameBody(s.body, body));
      if (!match) {
        return json(400, { error: "ValueError", detail: "no fixture for this search body" });
      }
      return json(200, match.response);
    }

    if (method === "POST" && path === "/sessions") {
      if (!sameBody(body, wf.start.body)) {
        return json(400, { error: "ValueError", detail: "unexpected session body" });
      }
      this.currentSession = wf.start.response;
      return json(200, wf.start.response);
    }

    const sessionMatch = path.match(/^\/sessions\/([^/]+)(?:\/(\w+))?$/);
    if (sessionMatch) {
      const sessionId = sessionMatch[1];
      const action = sessionMatch[2];
      if (!this.currentSession || sessionId !== this.currentSession.session_id) {
        return json(404, { error: "UnknownSession", detail: `no session ${sessionId}` });
      }
      if (method === "GET" && !action) {
        return json(200, this.currentSession);
      }
      switch (action) {
        case "defect":
          this.currentSession = wf.attach;
          return json(200, wf.attach);
        case "assessed":
          this.currentSession = wf.assessed.session;
          return json(200, wf.assessed);
        case "measurements":
          this.currentSession = wf.session_after_measurement;
          return json(200, wf.measurement.response);
        case "suggestion":
          this.currentSession = wf.session_after_suggestion;
          return json(200, wf.suggestion);
        case "decision":
          this.currentSession = wf.decision.response;
          return json(200, wf.decision.response);
      }
    }

    if (method === "GET" && path.startsWith("/defects/")) {
      const nodeId = decodeURIComponent(path.slice("/defects/".length));
      if (nodeId !== this.fixtures.defect_detail.node.id) {
        return json(404, { error: "UnknownNode", detail: `no node ${nodeId}` });
      }
      return json(200, this.fixtures.defect_detail);
    }

    if (method === "GET" && path === "/health") {
      return json(200, { status: "ok", counts: {} });
    }

    return json(404, { error: "MissingEndpoint", detail: `${method} ${path}` });
  }
}
