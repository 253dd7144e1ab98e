/** Canvas renderers for the four dashboard views. Pure drawing: every
 * number shown comes from the model, which only echoes service data. */

import type { CurveView, GaugeView, RuleBarView } from "./model.js";
import type { FrameDoc } from "./types.js";

const COLORS = ["#2563eb", "#dc2626", "#16a34a", "#9333ea", "#ea580c"];

function clear(ctx: CanvasRenderingContext2D): void {
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
}

function placeholder(ctx: CanvasRenderingContext2D, text: string): void {
  clear(ctx);
  ctx.fillStyle = "#9ca3af";
  ctx.font = "13px sans-serif";
  ctx.textAlign = "center";
  ctx.fillText(text, ctx.canvas.width / 2, ctx.canvas.height / 2);
  ctx.textAlign = "left";
}

/** Sensed temperature and setpoint against time. Renders a decimated
 * slice so high frame rates stay cheap. */
export function drawStripChart(ctx: CanvasRenderingContext2D, frames: readonly FrameDoc[]): void {
  if (frames.length < 2) {
    placeholder(ctx, "waiting for telemetry");
    return;
  }
  clear(ctx);
  const { width, height } = ctx.canvas;
  const pad = 34;
  const t0 = frames[0]!.t;
  const t1 = frames[frames.length - 1]!.t;
  const values = frames.flatMap((f) => [f.sensed, f.setpoint]);
  let lo = Math.min(...values);
  let hi = Math.max(...values);
  const margin = Math.max((hi - lo) * 0.1, 1.0);
  lo -= margin;
  hi += margin;

  const px = (t: number) => pad + ((t - t0) / Math.max(t1 - t0, 1e-9)) * (width - pad - 8);
  const py = (v: number) => height - 18 - ((v - lo) / (hi - lo)) * (height - 26);

  // Cap the number of drawn segments; the buffer may hold thousands.
  const step = Math.max(1, Math.floor(frames.length / Math.max(width - pad, 1)));

  ctx.strokeStyle = "#e5e7eb";
  ctx.beginPath();
  ctx.moveTo(pad, py(lo));
  ctx.lineTo(pad, py(hi));
  ctx.stroke();
  ctx.fillStyle = "#6b7280";
  ctx.font = "11px sans-serif";
  ctx.fillText(hi.toFixed(1), 2, py(hi) + 8);
  ctx.fillText(lo.toFixed(1), 2, py(lo));
  ctx.fillText(`t=${t1.toFixed(1)}s`, width - 70, height - 4);

  const series: ["setpoint" | "sensed", string, number[]][] = [
    ["setpoint", "#9ca3af", []],
    ["sensed", "#2563eb", []],
  ];
  for (const [field, color] of series) {
    ctx.strokeStyle = color;
    ctx.lineWidth = field === "sensed" ? 1.8 : 1.2;
    ctx.setLineDash(field === "setpoint" ? [5, 3] : []);
    ctx.beginPath();
    for (let i = 0; i < frames.length; i += step) {
      const frame = frames[i]!;
      const x = px(frame.t);
      const y = py(frame[field]);
      if (i === 0) {
        ctx.moveTo(x, y);
      } else {
        ctx.lineTo(x, y);
      }
    }
    const last = frames[frames.length - 1]!;
    ctx.lineTo(px(last.t), py(last[field]));
    ctx.stroke();
  }
  ctx.setLineDash([]);
}

/** Fan/heater bars. A frame violating fan + heater = 1 is flagged in red
 * rather than silently normalized. */
export function drawGauges(ctx: CanvasRenderingContext2D, view: GaugeView): void {
  if (view.fan === null || view.heater === null) {
    placeholder(ctx, "n/a");
    return;
  }
  clear(ctx);
  const { width } = ctx.canvas;
  const rows: [string, number, string][] = [
    ["fan", view.fan, "#2563eb"],
    ["heater", view.heater, "#dc2626"],
  ];
  rows.forEach(([label, value, color], i) => {
    const y = 16 + i * 34;
    ctx.fillStyle = "#374151";
    ctx.font = "12px sans-serif";
    ctx.fillText(label, 4, y + 12);
    ctx.fillStyle = "#f3f4f6";
    ctx.fillRect(56, y, width - 120, 16);
    ctx.fillStyle = color;
    ctx.fillRect(56, y, (width - 120) * Math.min(Math.max(value, 0), 1), 16);
    ctx.fillStyle = "#111827";
    ctx.fillText(`${(value * 100).toFixed(1)}%`, width - 56, y + 12);
  });
  if (!view.sumOk) {
    ctx.fillStyle = "#dc2626";
    ctx.fillText("fault: duties do not sum to 100%", 4, 82);
  }
}

/** One horizontal bar per rule, scaled by its activation weight. */
export function drawRuleBars(ctx: CanvasRenderingContext2D, bars: RuleBarView[]): void {
  if (bars.length === 0) {
    placeholder(ctx, "n/a");
    return;
  }
  clear(ctx);
  const { width } = ctx.canvas;
  const rowH = Math.min(26, Math.floor((ctx.canvas.height - 8) / bars.length));
  bars.forEach((bar, i) => {
    const y = 6 + i * rowH;
    ctx.fillStyle = "#374151";
    ctx.font = "11px sans-serif";
    ctx.fillText(`rule ${bar.ruleId}`, 4, y + 11);
    ctx.fillStyle = "#f3f4f6";
    ctx.fillRect(52, y, width - 120, rowH - 10);
    ctx.fillStyle = COLORS[i % COLORS.length]!;
    ctx.fillRect(52, y, (width - 120) * Math.min(Math.max(bar.weight, 0), 1), rowH - 10);
    ctx.fillStyle = "#111827";
    ctx.fillText(bar.weight.toFixed(3), width - 60, y + 11);
  });
}

/** Input membership curves with a vertical marker at the current error. */
export function drawMembership(
  ctx: CanvasRenderingContext2D,
  curves: CurveView[],
  universe: [number, number] | null,
  marker: number | null,
): void {
  if (curves.length === 0 || universe === null) {
    placeholder(ctx, "n/a");
    return;
  }
  clear(ctx);
  const { width, height } = ctx.canvas;
  const [lo, hi] = universe;
  const px = (x: number) => 8 + ((x - lo) / (hi - lo)) * (width - 16);
  const py = (y: number) => height - 16 - y * (height - 30);

  ctx.save();
  ctx.beginPath();
  ctx.rect(0, 0, width, height);
  ctx.clip();
  curves.forEach((curve, i) => {
    ctx.strokeStyle = COLORS[i % COLORS.length]!;
    ctx.lineWidth = 1.4;
    ctx.beginPath();
    curve.points.forEach((pt, j) => {
      if (j === 0) {
        ctx.moveTo(px(pt.x), py(pt.y));
      } else {
        ctx.lineTo(px(pt.x), py(pt.y));
      }
    });
    ctx.stroke();
    ctx.fillStyle = COLORS[i % COLORS.length]!;
    ctx.font = "10px sans-serif";
    const apex = curve.points.reduce((a, b) => (b.y > a.y ? b : a));
    ctx.fillText(curve.term, px(apex.x) - 10, py(1) - 2);
  });
  if (marker !== null) {
    const clamped = Math.min(Math.max(marker, lo), hi);
    ctx.strokeStyle = "#111827";
    ctx.setLineDash([3, 3]);
    ctx.beginPath();
    ctx.moveTo(px(clamped), py(0));
    ctx.lineTo(px(clamped), py(1));
    ctx.stroke();
    ctx.setLineDash([]);
    ctx.fillStyle = "#111827";
    ctx.font = "11px sans-serif";
    ctx.fillText(`error=${marker.toFixed(2)}`, Math.min(px(clamped) + 4, width - 80), 12);
  }
  ctx.restore();
  ctx.fillStyle = "#6b7280";
  ctx.font = "10px sans-serif";
  ctx.fillText(String(lo), 8, height - 4);
  ctx.fillText(String(hi), width - 30, height - 4);
}
