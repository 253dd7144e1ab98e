"""The two-input room thermostat driven from its rule matrix.

Sweeps the room temperature against a fixed 20 degree target and prints
the dominant command with its aggregate degree. The crossover zones where
two commands compete are exactly the fuzzy boundaries between terms.

Run:  python demos/07_room_thermostat.py
"""

from fuzzytherm.room import evaluate_room

target = 20.0
print(f"target fixed at {target} degC\n")
print(f"{'room':>6} | {'command':<9} | heat  cool  no-change")
for temperature in range(0, 41, 2):
    command, degrees = evaluate_room(float(temperature), target)
    print(
        f"{temperature:6.1f} | {command:<9} | "
        f"{degrees['heat']:.2f}  {degrees['cool']:.2f}  {degrees['no-change']:.2f}"
    )
