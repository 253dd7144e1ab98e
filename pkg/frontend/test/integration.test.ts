/**
 * Live round-trip against the real control service: start it as a child
 * process, run the dashboard model off its telemetry stream, change the
 * setpoint, drop the connection and come back. Requires the Python
 * package to be installed (pip install -e ..).
 */

import { spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { createServer } from "node:net";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { DashboardModel, membershipCurves } from "../src/model.js";
import type { FrameDoc } from "../src/types.js";

const PYTHON = process.env.PYTHON ?? "python3";

function freePort(): Promise<number> {
  return new Promise((resolve, reject) => {
    const srv = createServer();
    srv.on("error", reject);
    srv.listen(0, "127.0.0.1", () => {
      const address = srv.address();
      if (address === null || typeof address === "string") {
        reject(new Error("no port"));
        return;
      }
      srv.close(() => resolve(address.port));
    });
  });
}

async function waitForService(client: ServiceClient, ms: number): Promise<void> {
  const deadline = Date.now() + ms;
  for (;;) {
    try {
      await client.state();
      return;
    } catch {
      if (Date.now() > deadline) {
        throw new Error("service did not come up");
      }
      await new Promise((r) => setTimeout(r, 100));
    }
  }
}

/** Pump stream lines into the model until `done` says stop. */
async function pump(
  client: ServiceClient,
  model: DashboardModel,
  collected: FrameDoc[],
  done: (frames: FrameDoc[]) => boolean,
  timeoutMs = 20_000,
): Promise<AbortController> {
  const abort = new AbortController();
  const timer = setTimeout(() => abort.abort(), timeoutMs);
  try {
    for await (const line of client.telemetryLines(abort.signal)) {
      const frame = model.applyStreamLine(line);
      if (frame) {
        collected.push(frame);
        if (done(collected)) {
          break;
        }
      }
    }
  } finally {
    clearTimeout(timer);
  }
  return abort;
}

describe("dashboard against a live service", () => {
  let proc: ChildProcess;
  let client: ServiceClient;

  beforeAll(async () => {
    const port = await freePort();
    const cwd = mkdtempSync(join(tmpdir(), "fuzzytherm-ui-"));
    proc = spawn(
      PYTHON,
      ["-m", "fuzzytherm.cli", "serve", "--listen", `127.0.0.1:${port}`],
      { cwd, stdio: "ignore" },
    );
    client = new ServiceClient(`http://127.0.0.1:${port}`);
    await waitForService(client, 20_000);
  }, 30_000);

  afterAll(() => {
    proc.kill("SIGINT");
  });

  it("streams frames, reflects a setpoint within one frame, and survives reconnects", async () => {
    const model = new DashboardModel();

    const started = await client.startRun({
      loop: { setpoint: 40.0, sample_period: 0.05, duration: 300.0, initial_temp: 25.0 },
      plant: { sensor_noise_std: 0.0, seed: 0 },
    });
    expect(started.ok).toBe(true);

    // Phase 1: watch a few frames arrive in order.
    const firstBatch: FrameDoc[] = [];
    await pump(client, model, firstBatch, (frames) => frames.length >= 4);
    expect(firstBatch.length).toBeGreaterThanOrEqual(4);
    const ts = firstBatch.map((f) => f.t);
    expect([...ts].sort((a, b) => a - b)).toEqual(ts);
    expect(firstBatch.every((f) => f.setpoint === 40.0)).toBe(true);

    // Gauges echo the frame's duties verbatim.
    const gauges = model.gauges();
    expect(gauges.fan).toBe(model.lastFrame?.fan_duty);
    expect(gauges.heater).toBe(model.lastFrame?.heater_duty);
    expect(gauges.sumOk).toBe(true);

    // Membership curves come from the /state controller spec.
    model.applyState(await client.state());
    expect(model.controller).not.toBeNull();
    const curves = membershipCurves(model.controller!);
    expect(curves.map((c) => c.term)).toEqual(["NEG", "SNEG", "ZERO", "SPOZ", "POZ"]);

    // Phase 2: submit a setpoint; it must appear within one frame of the
    // acknowledgment (the frame in flight may still carry the old value).
    const tAtAck = model.lastFrame!.t;
    const ack = await client.setSetpoint(45.0);
    expect(ack.ok && ack.value.setpoint === 45.0).toBe(true);

    const afterChange: FrameDoc[] = [];
    await pump(client, model, afterChange, (frames) =>
      frames.some((f) => f.setpoint === 45.0) && frames.length >= 2,
    );
    const firstNew = afterChange.find((f) => f.setpoint === 45.0);
    expect(firstNew).toBeDefined();
    expect(firstNew!.t).toBeLessThanOrEqual(tAtAck + 3 * 0.05 + 1e-9);
    // The rendered setpoint trace (buffer) now steps to 45 and stays there.
    const buffered = model.buffer.frames();
    const stepIndex = buffered.findIndex((f) => f.setpoint === 45.0);
    expect(stepIndex).toBeGreaterThan(0);
    expect(buffered.slice(stepIndex).every((f) => f.setpoint === 45.0)).toBe(true);

    // Phase 3: drop the stream and reconnect; same run, no lost session,
    // and no replay of frames already seen.
    const runIdBefore = model.runId;
    const lastSeenT = model.lastFrame!.t;
    const reconnectBatch: FrameDoc[] = [];
    await pump(client, model, reconnectBatch, (frames) => frames.length >= 2);
    expect(reconnectBatch[0]!.run_id).toBe(runIdBefore);
    expect(reconnectBatch[0]!.t).toBeGreaterThan(lastSeenT);
    const state = await client.state();
    expect(state.phase).toBe("running");
    expect(state.run_id).toBe(runIdBefore);

    // Out-of-range setpoints surface the service's message verbatim.
    const rejected = await client.setSetpoint(-10.0);
    expect(rejected.ok).toBe(false);
    if (!rejected.ok) {
      expect(rejected.error.code).toBe("out-of-range");
      expect(rejected.error.details[0]?.message).toContain("[0.0, 120.0]");
    }

    const stopped = await client.stopRun();
    expect(stopped.ok).toBe(true);
  }, 60_000);

  it("reports conflicts when no run is active", async () => {
    await client.stopRun(); // independent of the previous test's outcome
    const result = await client.setSetpoint(45.0);
    expect(result.ok).toBe(false);
    if (!result.ok) {
      expect(result.error.code).toBe("conflict");
    }
  });
});
