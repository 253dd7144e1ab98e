/**
 * Dashboard state and stream plumbing, kept free of DOM so it is unit
 * testable. The model never computes control outputs of its own: every
 * number it exposes came from a service frame or the controller spec
 * fetched from /state.
 */

import type { ControllerDoc, FrameDoc, StateDoc } from "./types.js";

export type ConnectionState = "connecting" | "live" | "disconnected";

/** Reassemble newline-delimited JSON from arbitrary chunk boundaries. */
export class NdjsonDecoder {
  private tail = "";

  feed(chunk: string): string[] {
    this.tail += chunk;
    const parts = this.tail.split("\n");
    this.tail = parts.pop() ?? "";
    return parts.filter((line) => line.trim().length > 0);
  }
}

/** Exponential reconnect backoff, capped. */
export function backoffDelayMs(attempt: number): number {
  return Math.min(500 * 2 ** Math.max(attempt, 0), 10_000);
}

/**
 * Bounded, time-ordered frame history. Frames that would go backwards in
 * time are dropped so the chart can never render out of order; a new
 * run id resets the buffer.
 */
export class FrameBuffer {
  private items: FrameDoc[] = [];
  private runId: string | undefined;

  constructor(readonly capacity = 3600) {}

  push(frame: FrameDoc): boolean {
    if (frame.run_id !== this.runId) {
      this.items = [];
      this.runId = frame.run_id;
    }
    const last = this.items[this.items.length - 1];
    if (last !== undefined && frame.t <= last.t) {
      return false;
    }
    this.items.push(frame);
    if (this.items.length > this.capacity) {
      this.items.splice(0, this.items.length - this.capacity);
    }
    return true;
  }

  frames(): readonly FrameDoc[] {
    return this.items;
  }

  get last(): FrameDoc | undefined {
    return this.items[this.items.length - 1];
  }

  get length(): number {
    return this.items.length;
  }
}

export interface GaugeView {
  fan: number | null;
  heater: number | null;
  /** False when the frame violates fan + heater = 1; rendered as a fault
   * flag, never papered over by normalizing. */
  sumOk: boolean;
}

export interface RuleBarView {
  ruleId: number;
  weight: number;
  peak: number;
}

export class DashboardModel {
  connection: ConnectionState = "connecting";
  buffer: FrameBuffer;
  phase: StateDoc["phase"] | "unknown" = "unknown";
  runId: string | undefined;
  controller: ControllerDoc | null = null;
  /** Operator-facing banner text; empty when all is well. */
  notice = "";

  constructor(capacity = 3600) {
    this.buffer = new FrameBuffer(capacity);
  }

  /** Fold in a GET /state document (connect and reconnect path). */
  applyState(doc: StateDoc): void {
    this.phase = doc.phase;
    this.runId = doc.run_id;
    const controller = doc.config?.controller;
    if (controller) {
      this.controller = controller;
    }
    if (doc.frame) {
      this.buffer.push(doc.frame);
    }
  }

  /** Fold in one raw telemetry line. Returns the frame if it advanced the
   * buffer. Malformed lines are counted in the banner, never thrown. */
  applyStreamLine(line: string): FrameDoc | null {
    let frame: FrameDoc;
    try {
      frame = JSON.parse(line) as FrameDoc;
    } catch {
      this.notice = "received an unparseable telemetry message";
      return null;
    }
    if (typeof frame.t !== "number") {
      this.notice = "telemetry message missing sample time";
      return null;
    }
    if (frame.run_id !== undefined) {
      this.runId = frame.run_id;
    }
    this.phase = "running";
    return this.buffer.push(frame) ? frame : null;
  }

  get lastFrame(): FrameDoc | undefined {
    return this.buffer.last;
  }

  /** Duty gauges, verbatim from the frame. */
  gauges(): GaugeView {
    const frame = this.lastFrame;
    if (!frame) {
      return { fan: null, heater: null, sumOk: true };
    }
    return {
      fan: frame.fan_duty,
      heater: frame.heater_duty,
      sumOk: Math.abs(frame.fan_duty + frame.heater_duty - 1.0) <= 1e-9,
    };
  }

  /** Per-rule activation weights from the latest trace; empty when the
   * frame carries no trace (degenerate sample). */
  ruleBars(): RuleBarView[] {
    const trace = this.lastFrame?.trace;
    if (!trace) {
      return [];
    }
    return trace.activations.map((a) => ({
      ruleId: a.rule_id,
      weight: a.weight,
      peak: a.peak,
    }));
  }

  /** The crisp error to mark on the membership plot, if known. */
  errorMarker(): number | null {
    return this.lastFrame?.error ?? null;
  }
}

/**
 * Membership curves as polylines in universe coordinates, derived from
 * the controller spec served by /state (drawn client-side; frames carry
 * only degrees).
 */
export interface CurveView {
  term: string;
  points: { x: number; y: number }[];
}

export function membershipCurves(controller: ControllerDoc, variable = 0): CurveView[] {
  const doc = controller.inputs[variable];
  if (!doc) {
    return [];
  }
  const [lo, hi] = doc.universe;
  return doc.terms.map((term) => {
    const p = term.points;
    const knots =
      term.shape === "triangular"
        ? [
            { x: p[0]!, y: 0 },
            { x: p[1]!, y: 1 },
            { x: p[2]!, y: 0 },
          ]
        : [
            { x: p[0]!, y: 0 },
            { x: p[1]!, y: 1 },
            { x: p[2]!, y: 1 },
            { x: p[3]!, y: 0 },
          ];
    // Flat zero out to the universe edges; knots outside the universe are
    // left as-is and clipped by the renderer.
    const points = [...knots];
    if (knots[0]!.x > lo) {
      points.unshift({ x: lo, y: 0 });
    }
    if (knots[knots.length - 1]!.x < hi) {
      points.push({ x: hi, y: 0 });
    }
    return { term: term.name, points };
  });
}
