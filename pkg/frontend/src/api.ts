/**
 * Typed client for the session service.
 *
 * All responses are validated with the zod schemas from types.ts.  The two
 * failure modes callers care about get their own error classes: a 409 from
 * a stale model_version becomes VersionConflictError (the label flow
 * recovers by re-fetching), everything else becomes ApiError.
 */

import {
  LabelRequest,
  ResetRequest,
  StateView,
  SurfaceView,
  stateViewSchema,
  surfaceViewSchema,
} from "./types.js";

export class ApiError extends Error {
  readonly status: number;

  constructor(status: number, message: string) {
    super(message);
    this.name = "ApiError";
    this.status = status;
  }
}

/** The server rejected a mutation because another client got there first. */
export class VersionConflictError extends ApiError {
  constructor(message: string) {
    super(409, message);
    this.name = "VersionConflictError";
  }
}

/** The response body did not match the documented payload shape. */
export class PayloadError extends Error {
  constructor(message: string) {
    super(message);
    this.name = "PayloadError";
  }
}

async function detailOf(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { detail?: unknown };
    if (typeof body.detail === "string") return body.detail;
    return JSON.stringify(body.detail ?? body);
  } catch {
    return response.statusText || `HTTP ${response.status}`;
  }
}

async function parseBody<T>(
  response: Response,
  schema: { parse(value: unknown): T },
): Promise<T> {
  let raw: unknown;
  try {
    raw = await response.json();
  } catch (err) {
    throw new PayloadError(`response is not JSON: ${String(err)}`);
  }
  try {
    return schema.parse(raw);
  } catch (err) {
    throw new PayloadError(`unexpected payload shape: ${String(err)}`);
  }
}

export class ApiClient {
  private readonly base: string;
  private readonly fetchFn: typeof fetch;

  constructor(base = "", fetchFn: typeof fetch = fetch) {
    this.base = base.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async request(path: string, init?: RequestInit): Promise<Response> {
    const response = await this.fetchFn(`${this.base}${path}`, init);
    if (response.status === 409) {
      throw new VersionConflictError(await detailOf(response));
    }
    if (!response.ok) {
      throw new ApiError(response.status, await detailOf(response));
    }
    return response;
  }

  async getState(): Promise<StateView> {
    const response = await this.request("/state");
    return parseBody(response, stateViewSchema);
  }

  async getSurface(resolution?: number): Promise<SurfaceView> {
    const query = resolution === undefined ? "" : `?resolution=${resolution}`;
    const response = await this.request(`/surface${query}`);
    return parseBody(response, surfaceViewSchema);
  }

  async postLabel(body: LabelRequest): Promise<StateView> {
    const response = await this.request("/label", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return parseBody(response, stateViewSchema);
  }

  async postReset(body: ResetRequest = {}): Promise<StateView> {
    const response = await this.request("/reset", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
    return parseBody(response, stateViewSchema);
  }
}
