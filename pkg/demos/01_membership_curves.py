"""Linguistic variables and fuzzification.

Builds the stock error and PWM variables, tabulates how a few crisp
errors fuzzify, and plots both term families. The -1 degree error is the
interesting one: it lands on two terms at once (SNEG faintly, ZERO
strongly), which is the whole point of fuzzy boundaries.

Run:  python demos/01_membership_curves.py
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from fuzzytherm import build_error_variable, build_pwm_variable, fuzzify, membership_degree

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

error_var = build_error_variable()
pwm_var = build_pwm_variable()

# A handful of crisp errors and their degree in every term. Note how -1
# sits at 0.04 SNEG / 0.9333 ZERO, and how +-25 hit a single apex.
print(f"{'error':>8} | " + " | ".join(f"{name:>6}" for name in error_var.term_names()))
for x in (-40.0, -25.0, -1.0, 0.0, 1.0, 25.0, 40.0):
    degrees = fuzzify(error_var, x)
    print(f"{x:8.1f} | " + " | ".join(f"{degrees[n]:6.3f}" for n in error_var.term_names()))

fig, (top, bottom) = plt.subplots(2, 1, figsize=(9, 7))

xs = np.linspace(*error_var.universe, 1001)
for term in error_var.terms:
    top.plot(xs, [membership_degree(term.mf, float(x)) for x in xs], label=term.name)
top.axvline(-1.0, color="k", linestyle=":", label="error = -1")
top.set_title("Temperature error terms")
top.set_xlabel("error (degC)")
top.set_ylabel("degree")
top.legend(loc="center right", fontsize=8)

levels = np.linspace(*pwm_var.universe, 1001)
for term in pwm_var.terms:
    bottom.plot(levels, [membership_degree(term.mf, float(v)) for v in levels], label=term.name)
for term in pwm_var.terms:
    bottom.axvline(term.mf.peak, color="gray", linewidth=0.5, linestyle="--")
bottom.set_title("PWM-level terms (dashed lines mark the peaks the defuzzifier uses)")
bottom.set_xlabel("PWM level")
bottom.set_ylabel("degree")
bottom.legend(loc="center right", fontsize=8)

fig.tight_layout()
target = OUT / "membership_curves.png"
fig.savefig(target, dpi=120)
print(f"\nwrote {target}")
