"""Duty cycles as square waves.

Renders a few duties as slot sequences (the classic 80% wave among them),
shows that measuring a synthesized wave recovers the commanded duty to
within half a slot, and exports one waveform as CSV for plotting.

Run:  python demos/04_pwm_waveforms.py
"""

from pathlib import Path

from fuzzytherm import PwmCommand, duty_from_level, measure_duty, synthesize
from fuzzytherm.pwm import write_waveform_csv

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

for duty in (0.2, 0.5, 0.8, 1.0):
    wave = synthesize(PwmCommand(duty=duty, resolution=20))
    art = "".join("#" if slot else "." for slot in wave)
    print(f"duty {duty:4.0%}  |{art}|  measured {measure_duty(wave):.2f}")

# The controller's worked operating point, as an actuator would see it.
level = 130.9058
duty = duty_from_level(level)
wave = synthesize(PwmCommand(duty=duty, resolution=200))
print(f"\nPWM level {level} -> duty {duty:.4f} -> {sum(wave)} of {len(wave)} slots ON")

target = OUT / "fan_waveform.csv"
with open(target, "w", encoding="utf-8") as f:
    write_waveform_csv(wave, f)
print(f"wrote {target}")
