"""One inference pass, dissected.

The sensed plate is 46 degrees against a 45 degree setpoint, so the error
is -1. Watch it fuzzify, weight the five rules, and collapse to a crisp
PWM level of about 130.9, which splits the actuators 51% fan / 49% heater.

Run:  python demos/03_inference_step.py
"""

from fuzzytherm import build_temperature_controller, duty_from_level, infer

controller = build_temperature_controller()
setpoint, sensed = 45.0, 46.0
error = setpoint - sensed

trace = infer(controller, {"error": error})

print(f"setpoint {setpoint}  sensed {sensed}  ->  error {error}")
print("\nfuzzified degrees:")
for term, degree in trace.fuzzified["error"].items():
    marker = "  <--" if degree > 0 else ""
    print(f"  {term:>5}: {degree:.4f}{marker}")

print("\nrule activations (weight x consequent peak):")
for activation, rule in zip(trace.activations, controller.rulebase.rules):
    print(
        f"  rule {activation.rule_id}: {rule.consequent[1]:>2}  "
        f"W={activation.weight:.4f}  P={activation.peak:7.3f}"
        + ("   <--" if activation.weight > 0 else "")
    )

fan = duty_from_level(trace.output)
print(f"\nweighted average output: {trace.output:.2f} / 255")
print(f"fan duty    {fan:6.1%}")
print(f"heater duty {1 - fan:6.1%}")
