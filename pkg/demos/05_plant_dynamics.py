"""Open-loop behavior of the simulated heater/plate/fan rig.

Steps the plate under a few fixed duty pairs and overlays the analytic
equilibrium each pair implies. The plate is a single thermal mass, so
every curve is a clean first-order approach to its own equilibrium.

Run:  python demos/05_plant_dynamics.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from fuzzytherm import PlantParams, PlantState, equilibrium_temp, step

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

params = PlantParams()
horizon = 2500  # seconds, several time constants

fig, ax = plt.subplots(figsize=(9, 5))
for u_h, u_f in ((1.0, 0.0), (0.7, 0.3), (0.5, 0.5), (0.2, 0.8)):
    state = PlantState(plate_temp=params.ambient)
    times, temps = [0.0], [state.plate_temp]
    for _ in range(horizon):
        state = step(params, state, u_h, u_f, dt=1.0)
        times.append(state.time)
        temps.append(state.plate_temp)
    eq = equilibrium_temp(params, u_h, u_f)
    line, = ax.plot(times, temps, label=f"heater {u_h:.0%} / fan {u_f:.0%}")
    ax.axhline(eq, color=line.get_color(), linewidth=0.6, linestyle="--")
    print(f"heater {u_h:.0%} fan {u_f:.0%}: equilibrium {eq:7.2f} degC, "
          f"reached {temps[-1]:7.2f} after {horizon}s")

ax.set_xlabel("time (s)")
ax.set_ylabel("plate temperature (degC)")
ax.set_title("Fixed-duty step responses (dashed: analytic equilibria)")
ax.legend()
fig.tight_layout()
target = OUT / "plant_step_responses.png"
fig.savefig(target, dpi=120)
print(f"wrote {target}")
