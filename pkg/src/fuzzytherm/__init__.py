"""Fuzzy-logic temperature control toolkit.

Linguistic variables with triangular/trapezoidal membership, an IF-THEN
rule language, min/max rule evaluation with weighted-average
defuzzification, PWM actuation helpers, a simulated thermal plant, and a
closed control loop with live telemetry.
"""

from .errors import (
    ConfigError,
    ConsequentVariableError,
    DegenerateOutputError,
    FuzzyThermError,
    InvalidInputError,
    InvalidStepError,
    NoEquilibriumError,
    RuleSyntaxError,
    UnknownTermError,
    UnknownVariableError,
)
from .inference import (
    FuzzyController,
    InferenceTrace,
    RuleActivation,
    build_temperature_controller,
    defuzzify_weighted_average,
    evaluate_antecedent,
    infer,
)
from .loop import (
    LoopConfig,
    LoopRunner,
    RunRecord,
    TelemetryFrame,
    default_config,
    loop_step,
    run,
    write_trace,
)
from .membership import (
    LinguisticTerm,
    LinguisticVariable,
    Trapezoidal,
    Triangular,
    build_error_variable,
    build_pwm_variable,
    coverage_gaps,
    fuzzify,
    membership_degree,
)
from .plant import PlantParams, PlantState, equilibrium_temp, read_sensor, step
from .pwm import PwmCommand, duty_from_level, measure_duty, synthesize
from .rules import (
    And,
    Atom,
    Or,
    Rule,
    RuleBase,
    RuleMatrix,
    matrix_to_rules,
    parse_rules,
    serialize_rulebase,
)

__version__ = "0.1.0"

__all__ = [
    "And",
    "Atom",
    "ConfigError",
    "ConsequentVariableError",
    "DegenerateOutputError",
    "FuzzyController",
    "FuzzyThermError",
    "InferenceTrace",
    "InvalidInputError",
    "InvalidStepError",
    "LinguisticTerm",
    "LinguisticVariable",
    "LoopConfig",
    "LoopRunner",
    "NoEquilibriumError",
    "Or",
    "PlantParams",
    "PlantState",
    "PwmCommand",
    "Rule",
    "RuleActivation",
    "RuleBase",
    "RuleMatrix",
    "RuleSyntaxError",
    "RunRecord",
    "TelemetryFrame",
    "Trapezoidal",
    "Triangular",
    "UnknownTermError",
    "UnknownVariableError",
    "build_error_variable",
    "build_pwm_variable",
    "build_temperature_controller",
    "coverage_gaps",
    "default_config",
    "defuzzify_weighted_average",
    "duty_from_level",
    "equilibrium_temp",
    "evaluate_antecedent",
    "fuzzify",
    "infer",
    "loop_step",
    "matrix_to_rules",
    "measure_duty",
    "membership_degree",
    "parse_rules",
    "read_sensor",
    "run",
    "serialize_rulebase",
    "step",
    "synthesize",
    "write_trace",
]
