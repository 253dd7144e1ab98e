/** Operator console wiring: connect, stream, render, command. */

import { ServiceClient } from "./api.js";
import { drawGauges, drawMembership, drawRuleBars, drawStripChart } from "./charts.js";
import { DashboardModel, backoffDelayMs, membershipCurves } from "./model.js";
import type { CurveView } from "./model.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el as T;
};

const model = new DashboardModel();
let client = new ServiceClient("http://127.0.0.1:8700");
let streamAbort: AbortController | null = null;
let generation = 0;
let curves: CurveView[] = [];
let universe: [number, number] | null = null;

const ctx = (id: string) => ($(id) as unknown as HTMLCanvasElement).getContext("2d")!;

let renderQueued = false;
function scheduleRender(): void {
  // Collapse bursts of frames into one paint per animation frame.
  if (renderQueued) {
    return;
  }
  renderQueued = true;
  requestAnimationFrame(() => {
    renderQueued = false;
    render();
  });
}

function render(): void {
  const banner = $("banner");
  banner.textContent =
    model.connection === "live"
      ? `connected (${model.phase}${model.runId ? ", run " + model.runId : ""})`
      : model.connection === "connecting"
        ? "connecting..."
        : "disconnected, retrying...";
  banner.className = model.connection;
  $("notice").textContent = model.notice;

  drawStripChart(ctx("strip"), model.buffer.frames());
  drawGauges(ctx("gauges"), model.gauges());
  drawRuleBars(ctx("rules"), model.ruleBars());
  drawMembership(ctx("membership"), curves, universe, model.errorMarker());
}

async function streamLoop(myGeneration: number): Promise<void> {
  let attempt = 0;
  while (myGeneration === generation) {
    model.connection = "connecting";
    scheduleRender();
    try {
      const state = await client.state();
      model.applyState(state);
      if (model.controller) {
        curves = membershipCurves(model.controller);
        universe = model.controller.inputs[0]?.universe ?? null;
      }
      streamAbort = new AbortController();
      for await (const line of client.telemetryLines(streamAbort.signal)) {
        if (myGeneration !== generation) {
          return;
        }
        attempt = 0;
        model.connection = "live";
        if (!model.controller) {
          // Run started after we fetched /state; fetch the controller doc now.
          client.state().then((doc) => {
            model.applyState(doc);
            if (model.controller) {
              curves = membershipCurves(model.controller);
              universe = model.controller.inputs[0]?.universe ?? null;
            }
          }).catch(() => undefined);
        }
        model.applyStreamLine(line);
        scheduleRender();
      }
    } catch {
      // fall through to backoff
    }
    if (myGeneration !== generation) {
      return;
    }
    model.connection = "disconnected";
    scheduleRender();
    await new Promise((resolve) => setTimeout(resolve, backoffDelayMs(attempt)));
    attempt += 1;
  }
}

function reconnect(): void {
  generation += 1;
  streamAbort?.abort();
  client = new ServiceClient(($("address") as HTMLInputElement).value.trim());
  void streamLoop(generation);
}

function flashNotice(text: string): void {
  model.notice = text;
  scheduleRender();
}

window.addEventListener("DOMContentLoaded", () => {
  $("connect").addEventListener("click", reconnect);

  $("setpoint-form").addEventListener("submit", (event) => {
    event.preventDefault();
    const input = $("setpoint") as HTMLInputElement;
    const value = Number(input.value);
    if (!Number.isFinite(value)) {
      flashNotice("setpoint must be a number");
      return;
    }
    client.setSetpoint(value).then((result) => {
      flashNotice(result.ok ? `setpoint acknowledged: ${result.value.setpoint}` : result.error.message);
    });
  });

  $("start").addEventListener("click", () => {
    client.startRun(undefined).then((result) => {
      flashNotice(result.ok ? `run ${result.value.run_id} started` : result.error.message);
    });
  });

  $("stop").addEventListener("click", () => {
    client.stopRun().then((result) => {
      flashNotice(result.ok ? `stopped; record at ${result.value.record}` : result.error.message);
    });
  });

  reconnect();
});
