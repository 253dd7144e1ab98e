/** Thin client for the control service API. */

import { NdjsonDecoder } from "./model.js";
import type { ServiceErrorDoc, StateDoc } from "./types.js";

export type ApiResult<T> =
  | { ok: true; value: T }
  | { ok: false; error: ServiceErrorDoc };

async function toResult<T>(response: Response): Promise<ApiResult<T>> {
  const body = (await response.json()) as unknown;
  if (response.ok) {
    return { ok: true, value: body as T };
  }
  const error = body as Partial<ServiceErrorDoc>;
  return {
    ok: false,
    error: {
      code: error.code ?? `http-${response.status}`,
      message: error.message ?? response.statusText,
      details: error.details ?? [],
    },
  };
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  state(): Promise<StateDoc> {
    return fetch(this.url("/state")).then((r) => r.json() as Promise<StateDoc>);
  }

  startRun(config: unknown): Promise<ApiResult<{ run_id: string }>> {
    return fetch(this.url("/runs"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: config === undefined ? "" : JSON.stringify(config),
    }).then((r) => toResult(r));
  }

  setSetpoint(value: number): Promise<ApiResult<{ setpoint: number }>> {
    return fetch(this.url("/runs/current/setpoint"), {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ value }),
    }).then((r) => toResult(r));
  }

  stopRun(): Promise<ApiResult<{ run_id: string; record: string }>> {
    return fetch(this.url("/runs/current/stop"), { method: "POST" }).then((r) => toResult(r));
  }

  /**
   * Yield raw ndjson lines from /telemetry until the peer closes or the
   * signal aborts. Keepalive blanks are filtered by the decoder.
   */
  async *telemetryLines(signal: AbortSignal): AsyncGenerator<string> {
    const response = await fetch(this.url("/telemetry"), { signal });
    if (!response.ok || response.body === null) {
      throw new Error(`telemetry stream failed: ${response.status}`);
    }
    const reader = response.body.getReader();
    const utf8 = new TextDecoder();
    const decoder = new NdjsonDecoder();
    try {
      for (;;) {
        const { value, done } = await reader.read();
        if (done) {
          return;
        }
        for (const line of decoder.feed(utf8.decode(value, { stream: true }))) {
          yield line;
        }
      }
    } finally {
      reader.releaseLock();
    }
  }
}
