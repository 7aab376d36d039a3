/**
 * Service client plus the debounce used during drags.
 *
 * Rapid edits collapse into one request ~100 ms after the last edit, and at
 * most one response is ever applied per sequence number: a response that
 * comes back after a newer schedule() call is dropped, never rendered.
 */

import type {
  EpvRequest,
  EpvResponse,
  EvaluateRequest,
  EvaluateResponse,
  MapsResponse,
} from "./types.js";

export interface ResponseLike {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}

export type FetchLike = (url: string, init?: {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}) => Promise<ResponseLike>;

export class ServiceError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function parseError(res: ResponseLike): Promise<ServiceError> {
  let detail = `service error (${res.status})`;
  try {
    const body = (await res.json()) as { detail?: unknown };
    if (typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body: keep the status-based message
  }
  return new ServiceError(detail, res.status);
}

export class ServiceClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async post<T>(path: string, payload: unknown): Promise<T> {
    const res = await this.fetchFn(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  async evaluate(request: EvaluateRequest): Promise<EvaluateResponse> {
    return this.post<EvaluateResponse>("/api/evaluate", request);
  }

  async epvCombine(request: EpvRequest): Promise<EpvResponse> {
    return this.post<EpvResponse>("/api/epv-combine", request);
  }

  async maps(): Promise<string[]> {
    const res = await this.fetchFn(`${this.baseUrl}/api/maps`);
    if (!res.ok) throw await parseError(res);
    return ((await res.json()) as MapsResponse).maps;
  }
}

export const DEBOUNCE_MS = 100;

/**
 * Latest-wins debounce around an async send. schedule() restarts the timer;
 * when a send resolves, its result is applied only if no newer schedule()
 * happened in the meantime.
 */
export class DebouncedEvaluator<Req, Res> {
  private seq = 0;
  private timer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    private readonly send: (request: Req) => Promise<Res>,
    private readonly apply: (response: Res, seq: number) => void,
    private readonly fail: (error: Error, seq: number) => void,
    private readonly delayMs: number = DEBOUNCE_MS,
  ) {}

  /** Queue a request; returns its sequence number. */
  schedule(request: Req): number {
    const seq = ++this.seq;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.fire(request, seq);
    }, this.delayMs);
    return seq;
  }

  /** Send immediately, bypassing the timer (initial load, tests). */
  flush(request: Req): number {
    const seq = ++this.seq;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
    void this.fire(request, seq);
    return seq;
  }

  private async fire(request: Req, seq: number): Promise<void> {
    try {
      const response = await this.send(request);
      if (seq === this.seq) this.apply(response, seq);
    } catch (error) {
      if (seq === this.seq) this.fail(error as Error, seq);
    }
  }
}
