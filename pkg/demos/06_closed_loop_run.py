"""A full closed-loop run: heat a 25 degree plate to a 45 degree setpoint.

Runs the stock configuration, prints the summary metrics, writes the CSV
trace, and plots temperature tracking alongside the complementary duty
split. The trace CSV is byte-stable for a fixed seed, so it doubles as a
golden file in regression setups.

Run:  python demos/06_closed_loop_run.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from fuzzytherm import default_config, run, write_trace

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

record = run(default_config())
summary = record.summary
print(f"frames:            {summary.frames}")
print(f"settling time:     {summary.settling_time:.0f} s (into +/-{summary.settle_band} degC)")
print(f"overshoot:         {summary.overshoot:.3f} degC")
print(f"steady-state band: {summary.steady_state_band:.3f} degC")

trace_path = OUT / "closed_loop_trace.csv"
write_trace(record, "csv", trace_path)
print(f"wrote {trace_path}")

times = [f.t for f in record.frames]
fig, (top, bottom) = plt.subplots(2, 1, figsize=(9, 7), sharex=True)
top.plot(times, [f.sensed for f in record.frames], label="sensed")
top.plot(times, [f.setpoint for f in record.frames], linestyle="--", label="setpoint")
top.axvline(summary.settling_time, color="gray", linewidth=0.7)
top.set_ylabel("temperature (degC)")
top.legend()
top.set_title("Setpoint tracking from ambient")

bottom.plot(times, [f.heater_duty for f in record.frames], label="heater duty")
bottom.plot(times, [f.fan_duty for f in record.frames], label="fan duty")
bottom.set_xlabel("time (s)")
bottom.set_ylabel("duty")
bottom.set_ylim(0, 1)
bottom.legend()
bottom.set_title("Complementary actuation (always sums to 1)")

fig.tight_layout()
plot_path = OUT / "closed_loop_run.png"
fig.savefig(plot_path, dpi=120)
print(f"wrote {plot_path}")
