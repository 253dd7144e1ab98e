"""Simulated heater-coil / plate / fan thermal process with a sensor model.

A single lumped thermal capacitance heated by a coil and cooled by
ambient losses plus a fan:

    C * dT/dt = P_max * u_h - (k_loss + k_fan * u_f) * (T - T_amb)

where ``u_h`` and ``u_f`` are the heater and fan duty fractions. The state
advances by explicit Euler, which is exact enough at control-loop sample
rates and carries a testable stability precondition. The sensor adds
Gaussian noise in the temperature domain and quantizes onto an ADC grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStepError, NoEquilibriumError


@dataclass(frozen=True, slots=True)
class PlantParams:
    """Physical and sensing parameters. All units SI plus degrees C.

    Defaults describe a small bench rig whose 50/50 duty equilibrium sits
    at 45 degrees C above a 25 degree ambient, so the stock controller can
    hold the stock setpoint without steady-state offset.
    """

    capacitance: float = 500.0      # J/degC
    heater_power: float = 200.0     # W at full duty
    loss_coeff: float = 1.0         # W/degC passive loss
    fan_coeff: float = 8.0          # W/degC additional at full fan
    ambient: float = 25.0           # degC
    sensor_noise_std: float = 0.0   # degC
    adc_bits: int = 12
    adc_range: tuple[float, float] = (0.0, 150.0)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "adc_range", (float(self.adc_range[0]), float(self.adc_range[1])))
        if self.capacitance <= 0:
            raise ValueError("capacitance must be positive")
        if self.heater_power <= 0:
            raise ValueError("heater_power must be positive")
        if self.loss_coeff < 0 or self.fan_coeff < 0:
            raise ValueError("loss coefficients must be nonnegative")
        if self.sensor_noise_std < 0:
            raise ValueError("sensor_noise_std must be nonnegative")
        if not 1 <= self.adc_bits <= 16:
            raise ValueError(f"adc_bits must lie in [1, 16], got {self.adc_bits}")
        if not self.adc_range[0] < self.adc_range[1]:
            raise ValueError("adc_range must satisfy lo < hi")

    @property
    def max_stable_dt(self) -> float:
        """Explicit-Euler stability bound 2C / (k_loss + k_fan)."""
        worst_loss = self.loss_coeff + self.fan_coeff
        return math.inf if worst_loss == 0 else 2.0 * self.capacitance / worst_loss


@dataclass(frozen=True, slots=True)
class PlantState:
    plate_temp: float
    time: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.plate_temp):
            raise ValueError(f"plate_temp must be finite, got {self.plate_temp}")


def step(
    params: PlantParams,
    state: PlantState,
    heater_duty: float,
    fan_duty: float,
    dt: float,
) -> PlantState:
    """Advance the plate temperature one explicit-Euler step of size ``dt``."""
    if not 0.0 <= heater_duty <= 1.0:
        raise ValueError(f"heater_duty must lie in [0, 1], got {heater_duty}")
    if not 0.0 <= fan_duty <= 1.0:
        raise ValueError(f"fan_duty must lie in [0, 1], got {fan_duty}")
    if not 0.0 < dt < params.max_stable_dt:
        raise InvalidStepError(
            f"dt={dt} outside the stable range (0, {params.max_stable_dt}) "
            f"for these plant parameters"
        )
    heat_in = params.heater_power * heater_duty
    heat_out = (params.loss_coeff + params.fan_coeff * fan_duty) * (state.plate_temp - params.ambient)
    next_temp = state.plate_temp + dt * (heat_in - heat_out) / params.capacitance
    return PlantState(plate_temp=next_temp, time=state.time + dt)


def equilibrium_temp(params: PlantParams, heater_duty: float, fan_duty: float) -> float:
    """Analytic fixed point T_amb + P_max*u_h / (k_loss + k_fan*u_f)."""
    total_loss = params.loss_coeff + params.fan_coeff * fan_duty
    if total_loss <= 0.0:
        raise NoEquilibriumError("zero total loss coefficient: temperature grows without bound")
    return params.ambient + params.heater_power * heater_duty / total_loss


def read_sensor(params: PlantParams, state: PlantState, rng: np.random.Generator) -> float:
    """Noisy, quantized temperature reading.

    Adds Gaussian noise from the caller-owned generator, then rounds onto
    the ADC grid: 2**adc_bits levels spanning ``adc_range``, clamped at the
    rails. With zero noise and a fine grid the reading tracks the plate
    within one quantum.
    """
    noisy = state.plate_temp + rng.normal(0.0, params.sensor_noise_std)
    lo, hi = params.adc_range
    levels = (1 << params.adc_bits) - 1
    quantum = (hi - lo) / levels
    level = round((noisy - lo) / quantum)
    level = min(max(level, 0), levels)
    return lo + level * quantum


def params_to_dict(params: PlantParams) -> dict:
    return {
        "capacitance": params.capacitance,
        "heater_power": params.heater_power,
        "loss_coeff": params.loss_coeff,
        "fan_coeff": params.fan_coeff,
        "ambient": params.ambient,
        "sensor_noise_std": params.sensor_noise_std,
        "adc_bits": params.adc_bits,
        "adc_range": [params.adc_range[0], params.adc_range[1]],
        "seed": params.seed,
    }


def params_from_dict(doc: dict) -> PlantParams:
    kwargs = dict(doc)
    if "adc_range" in kwargs:
        kwargs["adc_range"] = tuple(kwargs["adc_range"])
    return PlantParams(**kwargs)
