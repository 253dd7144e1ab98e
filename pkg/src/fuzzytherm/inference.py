"""Fuzzifier, rule evaluation, and weighted-average defuzzification.

One inference pass fuzzifies every crisp input, evaluates each rule's
antecedent to a weight W (AND is min, OR is max), pairs the weight with
the peak P of the rule's consequent term, and collapses the pairs to a
crisp output:

    D = sum(P * W) / sum(W)

The peak of a triangle is its apex; for a trapezoid it is the plateau
midpoint. Every intermediate is recorded in an :class:`InferenceTrace` so
operators can see exactly why the controller chose an output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import membership, rules as ruledsl
from .errors import DegenerateOutputError, InternalConsistencyError, InvalidInputError
from .membership import LinguisticVariable, build_error_variable, build_pwm_variable, fuzzify
from .rules import And, AntecedentExpr, Atom, RuleBase, parse_rules


@dataclass(frozen=True, slots=True)
class RuleActivation:
    """A rule's evaluated weight paired with its consequent peak."""

    rule_id: int
    weight: float
    peak: float


@dataclass(frozen=True, slots=True)
class InferenceTrace:
    """Every intermediate of one inference pass.

    ``inputs`` holds the raw crisp values as given; ``clamped`` lists only
    those variables whose value was pulled back to the universe edge,
    mapped to the value actually fuzzified.
    """

    inputs: dict[str, float]
    clamped: dict[str, float]
    fuzzified: dict[str, dict[str, float]]
    activations: tuple[RuleActivation, ...]
    output: float


@dataclass(frozen=True, slots=True)
class FuzzyController:
    """An immutable rule base plus the precomputed peak of every output term."""

    rulebase: RuleBase
    peak_table: dict[str, float]

    def __post_init__(self):
        for rule in self.rulebase.rules:
            term = rule.consequent[1]
            if term not in self.peak_table:
                raise ValueError(f"peak table is missing consequent term {term!r}")

    @property
    def input_vars(self) -> tuple[LinguisticVariable, ...]:
        return self.rulebase.input_vars

    @property
    def output_var(self) -> LinguisticVariable:
        return self.rulebase.output_var


def evaluate_antecedent(
    expr: AntecedentExpr, fuzzified: Mapping[str, Mapping[str, float]]
) -> float:
    """Reduce an antecedent tree to a single degree (min for AND, max for OR)."""
    if isinstance(expr, Atom):
        try:
            return fuzzified[expr.variable][expr.term]
        except KeyError as missing:
            raise InternalConsistencyError(
                f"antecedent references {expr.variable!r} IS {expr.term!r} "
                f"but the fuzzified context lacks {missing}"
            ) from None
    left = evaluate_antecedent(expr.left, fuzzified)
    right = evaluate_antecedent(expr.right, fuzzified)
    return min(left, right) if isinstance(expr, And) else max(left, right)


def defuzzify_weighted_average(activations: Sequence[RuleActivation]) -> float:
    """Collapse activations to sum(P*W)/sum(W).

    Raises :class:`DegenerateOutputError` when every weight is zero; the
    defuzzifier never divides by zero or invents a value.
    """
    if not activations:
        raise InvalidInputError("cannot defuzzify an empty activation list")
    total_weight = math.fsum(a.weight for a in activations)
    if total_weight == 0.0:
        raise DegenerateOutputError("all rule weights are zero")
    weighted = math.fsum(a.peak * a.weight for a in activations)
    return weighted / total_weight


def peak_table_for(var: LinguisticVariable) -> dict[str, float]:
    """Peak (apex or plateau midpoint) of every term of an output variable."""
    return {term.name: term.mf.peak for term in var.terms}


def infer(ctl: FuzzyController, inputs: Mapping[str, float]) -> InferenceTrace:
    """Run one full fuzzify / evaluate / defuzzify pass.

    ``inputs`` must provide a crisp value for every input variable of the
    rule base (matched by exact name). Inputs outside a variable's
    universe are clamped and noted in the trace.
    """
    fuzzified: dict[str, dict[str, float]] = {}
    clamped: dict[str, float] = {}
    raw: dict[str, float] = {}
    for var in ctl.input_vars:
        if var.name not in inputs:
            raise InvalidInputError(f"missing input value for variable {var.name!r}")
        x = float(inputs[var.name])
        raw[var.name] = x
        fuzzified[var.name] = fuzzify(var, x)
        cx = membership.clamp_to_universe(var, x)
        if cx != x:
            clamped[var.name] = cx

    activations = tuple(
        RuleActivation(
            rule_id=rule.id,
            weight=evaluate_antecedent(rule.antecedent, fuzzified),
            peak=ctl.peak_table[rule.consequent[1]],
        )
        for rule in ctl.rulebase.rules
    )
    output = defuzzify_weighted_average(activations)
    return InferenceTrace(
        inputs=raw,
        clamped=clamped,
        fuzzified=fuzzified,
        activations=activations,
        output=output,
    )


def build_temperature_controller() -> FuzzyController:
    """The canonical error -> PWM controller.

    Five rules, one per error term. The defuzzified level drives the fan;
    the heater gets the complement. A hot plate (negative error) therefore
    maps to a high fan level, and the worked operating point holds: an
    error of -1 degree C activates SNEG at 0.04 and ZERO at 0.9333 and
    defuzzifies to about 130.9, i.e. fan 51%, heater 49%.
    """
    error_var = build_error_variable()
    pwm_var = build_pwm_variable()
    text = "\n".join(
        [
            "IF error IS NEG THEN pwm IS VH",
            "IF error IS SNEG THEN pwm IS VH",
            "IF error IS ZERO THEN pwm IS M",
            "IF error IS SPOZ THEN pwm IS L",
            "IF error IS POZ THEN pwm IS Z",
        ]
    )
    rulebase = parse_rules(text, [error_var], pwm_var)
    return FuzzyController(rulebase=rulebase, peak_table=peak_table_for(pwm_var))


# -- document form ------------------------------------------------------------

def trace_to_dict(trace: InferenceTrace) -> dict:
    return {
        "inputs": dict(trace.inputs),
        "clamped": dict(trace.clamped),
        "fuzzified": {var: dict(deg) for var, deg in trace.fuzzified.items()},
        "activations": [
            {"rule_id": a.rule_id, "weight": a.weight, "peak": a.peak}
            for a in trace.activations
        ],
        "output": trace.output,
    }


def controller_to_dict(ctl: FuzzyController) -> dict:
    doc = {
        "inputs": [membership.variable_to_dict(v) for v in ctl.input_vars],
        "output": membership.variable_to_dict(ctl.output_var),
        "rules": ruledsl.serialize_rulebase(ctl.rulebase).splitlines(),
    }
    defaults = peak_table_for(ctl.output_var)
    overrides = {k: v for k, v in ctl.peak_table.items() if defaults.get(k) != v}
    if overrides:
        doc["peaks"] = overrides
    return doc


def controller_from_dict(doc: Mapping) -> FuzzyController:
    """Build a controller from its JSON document.

    ``rules`` may be a single text blob or a list of rule lines. The
    optional ``peaks`` map overrides individual consequent peaks.
    """
    input_vars = [membership.variable_from_dict(d) for d in doc["inputs"]]
    output_var = membership.variable_from_dict(doc["output"])
    rules_field = doc["rules"]
    text = rules_field if isinstance(rules_field, str) else "\n".join(rules_field)
    rulebase = parse_rules(text, input_vars, output_var)
    peaks = peak_table_for(output_var)
    for name, value in dict(doc.get("peaks", {})).items():
        peaks[output_var.term(name).name] = float(value)
    return FuzzyController(rulebase=rulebase, peak_table=peaks)
