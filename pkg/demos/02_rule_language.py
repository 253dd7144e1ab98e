"""The IF-THEN rule language and rule matrices.

Parses thermostat rules written the way people write them (shorthand OR,
mixed case), prints the canonical form, expands the 5x5 room matrix into
25 rules, and shows what the parser says when you get something wrong.

Run:  python demos/02_rule_language.py
"""

from fuzzytherm import parse_rules, serialize_rulebase
from fuzzytherm.errors import RuleSyntaxError, UnknownTermError
from fuzzytherm.room import (
    build_room_command_variable,
    build_room_matrix,
    build_room_target_variable,
    build_room_temperature_variable,
)
from fuzzytherm.rules import matrix_to_rules

inputs = [build_room_temperature_variable(), build_room_target_variable()]
output = build_room_command_variable()

# "temperature is cold OR too-cold" distributes the variable over both
# terms; the canonical form spells that out.
source = """
# wall-thermostat policy
IF (temperature is cold OR too-cold) AND (target is warm) THEN command is heat
if (TEMPERATURE is hot or too-hot) and (target is warm) then command is cool
"""
rulebase = parse_rules(source, inputs, output)
print("canonical form:")
print(serialize_rulebase(rulebase))

matrix = build_room_matrix()
expanded = matrix_to_rules(matrix, inputs, output)
print(f"matrix {len(matrix.row_terms)}x{len(matrix.col_terms)} expands to {len(expanded.rules)} rules; first three:")
for rule in expanded.rules[:3]:
    print("  " + serialize_rulebase(expanded).splitlines()[rule.id - 1])

# Errors carry line:column and a specific kind.
for bad in (
    "IF temperature warm THEN command is heat",      # missing IS
    "IF temperature is tepid THEN command is heat",  # no such term
):
    try:
        parse_rules(bad, inputs, output)
    except (RuleSyntaxError, UnknownTermError) as exc:
        print(f"\n{bad!r}\n  -> {type(exc).__name__}: {exc}")
