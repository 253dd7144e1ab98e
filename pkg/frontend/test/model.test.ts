import { describe, expect, it } from "vitest";

import {
  DashboardModel,
  FrameBuffer,
  NdjsonDecoder,
  backoffDelayMs,
  membershipCurves,
} from "../src/model.js";
import type { ControllerDoc, FrameDoc } from "../src/types.js";

function frame(t: number, extra: Partial<FrameDoc> = {}): FrameDoc {
  return {
    run_id: "r1",
    t,
    setpoint: 45,
    sensed: 25 + t,
    error: 20 - t,
    defuzz: 100,
    fan_duty: 0.4,
    heater_duty: 0.6,
    degenerate: false,
    trace: {
      inputs: { error: 20 - t },
      clamped: {},
      fuzzified: { error: { ZERO: 0.5 } },
      activations: [{ rule_id: 1, weight: 0.5, peak: 127.5 }],
      output: 100,
    },
    ...extra,
  };
}

describe("NdjsonDecoder", () => {
  it("reassembles lines across arbitrary chunk boundaries", () => {
    const decoder = new NdjsonDecoder();
    expect(decoder.feed('{"a"')).toEqual([]);
    expect(decoder.feed(': 1}\n{"b": 2}\n{"c"')).toEqual(['{"a": 1}', '{"b": 2}']);
    expect(decoder.feed(": 3}\n")).toEqual(['{"c": 3}']);
  });

  it("drops keepalive blanks", () => {
    const decoder = new NdjsonDecoder();
    expect(decoder.feed("\n\n{\"x\":1}\n\n")).toEqual(['{"x":1}']);
  });
});

describe("backoffDelayMs", () => {
  it("grows exponentially and caps at ten seconds", () => {
    expect(backoffDelayMs(0)).toBe(500);
    expect(backoffDelayMs(1)).toBe(1000);
    expect(backoffDelayMs(3)).toBe(4000);
    expect(backoffDelayMs(20)).toBe(10_000);
  });
});

describe("FrameBuffer", () => {
  it("keeps frames time-ordered and drops regressions", () => {
    const buffer = new FrameBuffer();
    expect(buffer.push(frame(0))).toBe(true);
    expect(buffer.push(frame(1))).toBe(true);
    expect(buffer.push(frame(0.5))).toBe(false);
    expect(buffer.frames().map((f) => f.t)).toEqual([0, 1]);
  });

  it("is bounded", () => {
    const buffer = new FrameBuffer(3);
    for (let t = 0; t < 10; t += 1) {
      buffer.push(frame(t));
    }
    expect(buffer.frames().map((f) => f.t)).toEqual([7, 8, 9]);
  });

  it("resets when the run id changes", () => {
    const buffer = new FrameBuffer();
    buffer.push(frame(5));
    buffer.push(frame(0, { run_id: "r2" }));
    expect(buffer.frames().map((f) => f.t)).toEqual([0]);
    expect(buffer.last?.run_id).toBe("r2");
  });
});

describe("DashboardModel", () => {
  it("echoes gauge duties verbatim and validates their sum", () => {
    const model = new DashboardModel();
    model.applyStreamLine(JSON.stringify(frame(1, { fan_duty: 0.513, heater_duty: 0.487 })));
    expect(model.gauges()).toEqual({ fan: 0.513, heater: 0.487, sumOk: true });

    model.applyStreamLine(JSON.stringify(frame(2, { fan_duty: 0.6, heater_duty: 0.6 })));
    const gauges = model.gauges();
    expect(gauges.sumOk).toBe(false);
    expect(gauges.fan).toBe(0.6); // flagged, not normalized
  });

  it("reports n/a views instead of crashing on missing trace", () => {
    const model = new DashboardModel();
    expect(model.gauges()).toEqual({ fan: null, heater: null, sumOk: true });
    model.applyStreamLine(JSON.stringify(frame(1, { trace: null, degenerate: true })));
    expect(model.ruleBars()).toEqual([]);
  });

  it("survives malformed stream lines with a banner notice", () => {
    const model = new DashboardModel();
    expect(model.applyStreamLine("{half a json")).toBeNull();
    expect(model.notice).not.toBe("");
    expect(model.applyStreamLine(JSON.stringify({ hello: 1 }))).toBeNull();
  });

  it("extracts rule bars from the latest trace", () => {
    const model = new DashboardModel();
    model.applyStreamLine(JSON.stringify(frame(1)));
    expect(model.ruleBars()).toEqual([{ ruleId: 1, weight: 0.5, peak: 127.5 }]);
    expect(model.errorMarker()).toBe(19);
  });

  it("takes controller spec and latest frame from /state", () => {
    const model = new DashboardModel();
    const controller: ControllerDoc = {
      inputs: [
        {
          name: "error",
          universe: [-50, 50],
          terms: [
            { name: "ZERO", shape: "triangular", points: [-15, 0, 15] },
            { name: "POZ", shape: "trapezoidal", points: [15, 25, 50, 50] },
          ],
        },
      ],
      output: { name: "pwm", universe: [0, 255], terms: [] },
      rules: [],
    };
    model.applyState({
      phase: "running",
      run_id: "r9",
      config: { controller },
      frame: frame(3, { run_id: "r9" }),
    });
    expect(model.phase).toBe("running");
    expect(model.lastFrame?.t).toBe(3);
    expect(model.controller?.inputs[0]?.name).toBe("error");
  });
});

describe("membershipCurves", () => {
  const controller: ControllerDoc = {
    inputs: [
      {
        name: "error",
        universe: [-50, 50],
        terms: [
          { name: "ZERO", shape: "triangular", points: [-15, 0, 15] },
          { name: "POZ", shape: "trapezoidal", points: [15, 25, 50, 50] },
        ],
      },
    ],
    output: { name: "pwm", universe: [0, 255], terms: [] },
    rules: [],
  };

  it("builds polylines padded to the universe edges", () => {
    const curves = membershipCurves(controller);
    expect(curves.map((c) => c.term)).toEqual(["ZERO", "POZ"]);
    expect(curves[0]?.points).toEqual([
      { x: -50, y: 0 },
      { x: -15, y: 0 },
      { x: 0, y: 1 },
      { x: 15, y: 0 },
      { x: 50, y: 0 },
    ]);
    // Right-edge trapezoid: plateau ends at the universe bound, no pad.
    expect(curves[1]?.points.at(-1)).toEqual({ x: 50, y: 0 });
  });

  it("is empty for an unknown variable index", () => {
    expect(membershipCurves(controller, 5)).toEqual([]);
  });
});
