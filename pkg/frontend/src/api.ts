// HTTP transport for the session API.  Every method sends exactly what it
// was given and hands back the parsed server payload.  Legality is entirely
// the server's business: a 409 here is a rule decision to display, not a
// transport fault to retry.

import type {
  CreateSessionRequest,
  CreateSessionResponse,
  EngineStepResponse,
  ErrorBody,
  MoveResponse,
  SessionSnapshot,
} from "./protocol.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly detail: string,
  ) {
    super(`${status} ${code}: ${detail}`);
    this.name = "ApiError";
  }
}

export class SessionApi {
  private fetchFn: FetchLike;

  constructor(private baseUrl: string, fetchFn?: FetchLike) {
    this.fetchFn = fetchFn ?? ((url, init) => fetch(url, init));
  }

  createSession(req: CreateSessionRequest): Promise<CreateSessionResponse> {
    return this.request("POST", "/api/sessions", req);
  }

  getSession(id: string): Promise<SessionSnapshot> {
    return this.request("GET", `/api/sessions/${id}`);
  }

  pick(id: string, stone: number): Promise<MoveResponse> {
    return this.request("POST", `/api/sessions/${id}/pick`, { stone });
  }

  partition(id: string, group0: number[]): Promise<MoveResponse> {
    return this.request("POST", `/api/sessions/${id}/partition`, { group0 });
  }

  engineStep(id: string): Promise<EngineStepResponse> {
    return this.request("POST", `/api/sessions/${id}/engine-step`);
  }

  deleteSession(id: string): Promise<void> {
    return this.request("DELETE", `/api/sessions/${id}`);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await this.fetchFn(this.baseUrl + path, init);
    if (res.status === 204) return undefined as T;
    if (res.ok) return (await res.json()) as T;

    let code = `http_${res.status}`;
    let detail = res.statusText;
    try {
      const parsed = (await res.json()) as ErrorBody;
      code = parsed.error.code;
      detail = parsed.error.detail;
    } catch {
      // non-JSON error body; keep the status-line fallback
    }
    throw new ApiError(res.status, code, detail);
  }
}
