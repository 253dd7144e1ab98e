/** JSON documents exchanged with the control service. */

export interface RuleActivationDoc {
  rule_id: number;
  weight: number;
  peak: number;
}

export interface TraceDoc {
  inputs: Record<string, number>;
  clamped: Record<string, number>;
  fuzzified: Record<string, Record<string, number>>;
  activations: RuleActivationDoc[];
  output: number;
}

export interface FrameDoc {
  run_id?: string;
  t: number;
  setpoint: number;
  sensed: number;
  error: number;
  defuzz: number | null;
  fan_duty: number;
  heater_duty: number;
  degenerate: boolean;
  trace: TraceDoc | null;
}

export interface TermDoc {
  name: string;
  shape: "triangular" | "trapezoidal";
  points: number[];
}

export interface VariableDoc {
  name: string;
  universe: [number, number];
  terms: TermDoc[];
}

export interface ControllerDoc {
  inputs: VariableDoc[];
  output: VariableDoc;
  rules: string[] | string;
  peaks?: Record<string, number>;
}

export interface StateDoc {
  phase: "idle" | "running" | "stopped";
  run_id?: string;
  config?: { controller?: ControllerDoc; [key: string]: unknown };
  frame?: FrameDoc;
}

export interface ServiceErrorDoc {
  code: string;
  message: string;
  details: { path: string; message: string }[];
}
