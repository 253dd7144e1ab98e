"""Room-thermostat demo: two inputs, a 5x5 rule matrix, argmax command.

Classic two-input thermostat: current room temperature and a target, both
described by five terms on [0, 40] degrees C with evenly spaced triangles.
The rule matrix commands heat below the diagonal's mirror, cool above it,
and no-change on the diagonal. Output selection is by maximum aggregate
rule weight per command rather than defuzzification, because the demo
reports a discrete command.
"""

from __future__ import annotations

from .inference import evaluate_antecedent
from .membership import LinguisticTerm, LinguisticVariable, Triangular, fuzzify
from .rules import RuleBase, RuleMatrix, matrix_to_rules

ROOM_RANGE = (0.0, 40.0)

_TERM_APEXES = (("too-cold", 0.0), ("cold", 10.0), ("warm", 20.0), ("hot", 30.0), ("too-hot", 40.0))

# Deterministic tie-break order for the reported command.
COMMAND_ORDER = ("heat", "cool", "no-change")


def _five_term_variable(name: str) -> LinguisticVariable:
    terms = tuple(
        LinguisticTerm(term, Triangular(apex - 10.0, apex, apex + 10.0))
        for term, apex in _TERM_APEXES
    )
    return LinguisticVariable(name=name, universe=ROOM_RANGE, terms=terms)


def build_room_temperature_variable() -> LinguisticVariable:
    return _five_term_variable("temperature")


def build_room_target_variable() -> LinguisticVariable:
    return _five_term_variable("target")


def build_room_command_variable() -> LinguisticVariable:
    return LinguisticVariable(
        name="command",
        universe=(-1.0, 1.0),
        terms=(
            LinguisticTerm("cool", Triangular(-2.0, -1.0, 0.0)),
            LinguisticTerm("no-change", Triangular(-1.0, 0.0, 1.0)),
            LinguisticTerm("heat", Triangular(0.0, 1.0, 2.0)),
        ),
    )


def build_room_matrix() -> RuleMatrix:
    """Rows are current temperature, columns the target."""
    return RuleMatrix(
        row_var="temperature",
        col_var="target",
        out_var="command",
        row_terms=tuple(t for t, _ in _TERM_APEXES),
        col_terms=tuple(t for t, _ in _TERM_APEXES),
        cells=(
            ("no-change", "heat", "heat", "heat", "heat"),
            ("cool", "no-change", "heat", "heat", "heat"),
            ("cool", "cool", "no-change", "heat", "heat"),
            ("cool", "cool", "cool", "no-change", "heat"),
            ("cool", "cool", "cool", "cool", "no-change"),
        ),
    )


def build_room_rulebase() -> RuleBase:
    return matrix_to_rules(
        build_room_matrix(),
        [build_room_temperature_variable(), build_room_target_variable()],
        build_room_command_variable(),
    )


def evaluate_room(temperature: float, target: float) -> tuple[str, dict[str, float]]:
    """Return the dominant command and the aggregate degree per command.

    Aggregation is max over the weights of the rules concluding each
    command; ties resolve in the fixed order heat > cool > no-change.
    """
    rulebase = build_room_rulebase()
    fuzzified = {
        "temperature": fuzzify(build_room_temperature_variable(), temperature),
        "target": fuzzify(build_room_target_variable(), target),
    }
    degrees = {name: 0.0 for name in COMMAND_ORDER}
    for rule in rulebase.rules:
        weight = evaluate_antecedent(rule.antecedent, fuzzified)
        command = rule.consequent[1]
        degrees[command] = max(degrees[command], weight)
    best = max(COMMAND_ORDER, key=lambda name: (degrees[name], -COMMAND_ORDER.index(name)))
    return best, degrees
