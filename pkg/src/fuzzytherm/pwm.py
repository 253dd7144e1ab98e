"""PWM duty-cycle arithmetic and discrete waveform synthesis.

Duty cycle is the ON fraction of a square wave; the power an actuator
receives is proportional to it. Waveforms are synthesized as boolean slot
sequences with all ON slots leading, which keeps golden files stable; the
plant model consumes only the duty fraction, so alignment is not
observable downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, TextIO

from .errors import InvalidInputError


@dataclass(frozen=True, slots=True)
class PwmCommand:
    """A duty in [0, 1] over a period split into ``resolution`` slots."""

    duty: float
    period: float = 1.0
    resolution: int = 100

    def __post_init__(self):
        if not 0.0 <= self.duty <= 1.0:
            raise ValueError(f"duty must lie in [0, 1], got {self.duty}")
        if self.period <= 0.0:
            raise ValueError(f"period must be positive, got {self.period}")
        if self.resolution < 1:
            raise ValueError(f"resolution must be >= 1, got {self.resolution}")

    @property
    def on_time(self) -> float:
        return self.duty * self.period


def duty_from_level(level: float) -> float:
    """Map a PWM level on [0, 255] to a duty fraction; clamps outside."""
    return min(max(level, 0.0), 255.0) / 255.0


def synthesize(cmd: PwmCommand) -> list[bool]:
    """Leading-edge waveform: the first round(duty * resolution) slots ON.

    Rounding is half-up at the slot boundary, so the round-trip error of
    ``measure_duty`` never exceeds half a slot.
    """
    n_on = math.floor(cmd.duty * cmd.resolution + 0.5)
    return [True] * n_on + [False] * (cmd.resolution - n_on)


def measure_duty(wave: Sequence[bool]) -> float:
    """ON fraction of a waveform."""
    if len(wave) == 0:
        raise InvalidInputError("cannot measure an empty waveform")
    return sum(1 for slot in wave if slot) / len(wave)


def write_waveform_csv(wave: Sequence[bool], dest: TextIO) -> None:
    """Export a waveform as ``slot_index,state`` rows for plotting."""
    dest.write("slot_index,state\n")
    for i, slot in enumerate(wave):
        dest.write(f"{i},{1 if slot else 0}\n")
