"""The closed control loop: sense, compute error, infer, actuate, log.

Each sample reads the sensor, computes error = setpoint - sensed, runs the
fuzzy controller, and splits actuation complementarily: the defuzzified
level (0..255) sets the fan duty and the heater receives the remainder, so
the two duties always sum to exactly 1. The plant then advances one sample
period under those duties.

:func:`run` executes a whole configured run synchronously and returns a
:class:`RunRecord`. :class:`LoopRunner` drives the same stepping core as a
single sequential owner of plant state that publishes finished frames to
observers and drains a command queue (setpoint changes, stop) once per
sample, which is what the network service builds on.
"""

from __future__ import annotations

import json
import queue
import threading
import time as _time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, IO, Mapping, Sequence

import numpy as np

from . import plant as plantmod
from .errors import ConfigError, DegenerateOutputError, InvalidInputError
from .inference import (
    FuzzyController,
    InferenceTrace,
    build_temperature_controller,
    controller_from_dict,
    controller_to_dict,
    infer,
    trace_to_dict,
)
from .plant import PlantParams, PlantState, params_from_dict, params_to_dict, read_sensor
from .pwm import duty_from_level


@dataclass(frozen=True, slots=True)
class LoopConfig:
    """Everything one run needs: controller, plant, timing, setpoint."""

    controller: FuzzyController
    plant: PlantParams
    setpoint: float = 45.0
    sample_period: float = 1.0
    duration: float = 600.0
    initial_temp: float = 25.0
    settle_band: float = 1.0
    setpoint_limits: tuple[float, float] = (0.0, 120.0)

    def __post_init__(self):
        object.__setattr__(self, "setpoint_limits", tuple(self.setpoint_limits))
        if self.sample_period <= 0:
            raise ValueError("sample_period must be positive")
        if self.duration < self.sample_period:
            raise ValueError("duration must be at least one sample_period")
        if self.sample_period >= self.plant.max_stable_dt:
            raise ValueError(
                f"sample_period {self.sample_period} violates the plant stability bound "
                f"{self.plant.max_stable_dt}"
            )
        if self.settle_band <= 0:
            raise ValueError("settle_band must be positive")
        lo, hi = self.setpoint_limits
        if not lo < hi:
            raise ValueError("setpoint_limits must satisfy lo < hi")
        if not lo <= self.setpoint <= hi:
            raise ValueError(f"setpoint {self.setpoint} outside limits [{lo}, {hi}]")

    @property
    def n_frames(self) -> int:
        return int(self.duration / self.sample_period + 1e-9)


@dataclass(frozen=True, slots=True)
class TelemetryFrame:
    """One closed-loop sample. ``fan_duty + heater_duty == 1`` whenever the
    frame is not degenerate; a degenerate frame held the previous duties
    because inference produced no output."""

    t: float
    setpoint: float
    sensed: float
    error: float
    defuzz: float | None
    fan_duty: float
    heater_duty: float
    trace: InferenceTrace | None
    degenerate: bool = False


@dataclass(frozen=True, slots=True)
class RunSummary:
    settling_time: float | None
    overshoot: float
    steady_state_band: float | None
    settle_band: float
    frames: int


@dataclass(frozen=True, slots=True)
class RunRecord:
    """A finished run: config snapshot, ordered frames, summary metrics."""

    config: dict
    frames: tuple[TelemetryFrame, ...]
    summary: RunSummary


def loop_step(
    config: LoopConfig,
    state: PlantState,
    rng: np.random.Generator,
    prev_frame: TelemetryFrame | None = None,
    setpoint: float | None = None,
) -> tuple[TelemetryFrame, PlantState]:
    """Produce one telemetry frame and the advanced plant state.

    If inference degenerates (every rule weight zero) the frame is flagged
    and the previous duties are held; a thermal plant under frozen
    actuation degrades gracefully, while zeroing would slam it. The first
    frame falls back to no heat, no fan.
    """
    sp = config.setpoint if setpoint is None else setpoint
    sensed = read_sensor(config.plant, state, rng)
    error = sp - sensed
    try:
        trace = infer(config.controller, {"error": error})
        defuzz: float | None = trace.output
        fan_duty = duty_from_level(trace.output)
        heater_duty = 1.0 - fan_duty
        degenerate = False
    except DegenerateOutputError:
        trace = None
        defuzz = None
        fan_duty = prev_frame.fan_duty if prev_frame is not None else 0.0
        heater_duty = prev_frame.heater_duty if prev_frame is not None else 0.0
        degenerate = True
    frame = TelemetryFrame(
        t=state.time,
        setpoint=sp,
        sensed=sensed,
        error=error,
        defuzz=defuzz,
        fan_duty=fan_duty,
        heater_duty=heater_duty,
        trace=trace,
        degenerate=degenerate,
    )
    next_state = plantmod.step(config.plant, state, heater_duty, fan_duty, config.sample_period)
    return frame, next_state


def summarize(frames: Sequence[TelemetryFrame], settle_band: float) -> RunSummary:
    """Settling time, overshoot, and post-settling error band.

    Settling time is the first sample time after which |error| stays
    within the band for the rest of the run; overshoot is
    max(sensed) - setpoint of the final frame.
    """
    settle_at: float | None = None
    for frame in reversed(frames):
        if abs(frame.error) > settle_band:
            break
        settle_at = frame.t
    overshoot = max(f.sensed for f in frames) - frames[-1].setpoint
    steady_band = None
    if settle_at is not None:
        steady_band = max(abs(f.error) for f in frames if f.t >= settle_at)
    return RunSummary(
        settling_time=settle_at,
        overshoot=overshoot,
        steady_state_band=steady_band,
        settle_band=settle_band,
        frames=len(frames),
    )


class LoopRunner:
    """Single sequential owner of one run's plant state.

    Observers receive each finished frame through ``on_frame``; setpoint
    and stop commands are queued and take effect at the next sample
    boundary, never retroactively. With ``pace`` set, the runner sleeps
    ``sample_period / speed`` wall seconds per sample so a human can watch
    the run live.
    """

    def __init__(
        self,
        config: LoopConfig,
        on_frame: Callable[[TelemetryFrame], None] | None = None,
        pace: bool = False,
        speed: float = 1.0,
    ):
        if speed <= 0:
            raise ValueError("speed must be positive")
        self.config = config
        self._on_frame = on_frame
        self._pace = pace
        self._speed = speed
        self._commands: queue.SimpleQueue = queue.SimpleQueue()
        self._stopped = threading.Event()

    def submit_setpoint(self, value: float) -> float:
        """Queue a setpoint change; applied at the next sample boundary."""
        lo, hi = self.config.setpoint_limits
        if not lo <= value <= hi:
            raise InvalidInputError(f"setpoint {value} outside limits [{lo}, {hi}]")
        self._commands.put(("setpoint", float(value)))
        return float(value)

    def request_stop(self) -> None:
        self._commands.put(("stop", None))

    def run(self) -> RunRecord:
        """Execute until the configured duration or a stop command."""
        config = self.config
        rng = np.random.default_rng(config.plant.seed)
        state = PlantState(plate_temp=config.initial_temp, time=0.0)
        setpoint = config.setpoint
        frames: list[TelemetryFrame] = []
        prev: TelemetryFrame | None = None
        stop = False
        for _ in range(config.n_frames):
            while True:
                try:
                    kind, value = self._commands.get_nowait()
                except queue.Empty:
                    break
                if kind == "setpoint":
                    setpoint = value
                elif kind == "stop":
                    stop = True
            if stop:
                break
            frame, state = loop_step(config, state, rng, prev, setpoint)
            frames.append(frame)
            prev = frame
            if self._on_frame is not None:
                self._on_frame(frame)
            if self._pace:
                _time.sleep(config.sample_period / self._speed)
        if not frames:
            # Stopped before the first sample; still a valid (empty) run.
            record = RunRecord(
                config=config_to_dict(config),
                frames=(),
                summary=RunSummary(None, 0.0, None, config.settle_band, 0),
            )
        else:
            record = RunRecord(
                config=config_to_dict(config),
                frames=tuple(frames),
                summary=summarize(frames, config.settle_band),
            )
        self._stopped.set()
        return record

    @property
    def finished(self) -> bool:
        return self._stopped.is_set()


def run(config: LoopConfig) -> RunRecord:
    """Run a whole configuration synchronously, as fast as possible."""
    return LoopRunner(config).run()


# -- trace persistence --------------------------------------------------------

def _mu_columns(config_controller: FuzzyController) -> list[tuple[str, str, str]]:
    """(column name, variable, term) triples for the per-term CSV columns."""
    input_vars = config_controller.input_vars
    cols = []
    for var in input_vars:
        for term in var.terms:
            name = f"mu_{term.name}" if len(input_vars) == 1 else f"mu_{var.name}_{term.name}"
            cols.append((name, var.name, term.name))
    return cols


def frame_to_dict(frame: TelemetryFrame) -> dict:
    return {
        "t": frame.t,
        "setpoint": frame.setpoint,
        "sensed": frame.sensed,
        "error": frame.error,
        "defuzz": frame.defuzz,
        "fan_duty": frame.fan_duty,
        "heater_duty": frame.heater_duty,
        "degenerate": frame.degenerate,
        "trace": trace_to_dict(frame.trace) if frame.trace is not None else None,
    }


def record_to_dict(record: RunRecord) -> dict:
    return {
        "config": record.config,
        "summary": {
            "settling_time": record.summary.settling_time,
            "overshoot": record.summary.overshoot,
            "steady_state_band": record.summary.steady_state_band,
            "settle_band": record.summary.settle_band,
            "frames": record.summary.frames,
        },
        "frames": [frame_to_dict(f) for f in record.frames],
    }


def write_trace(record: RunRecord, format: str, destination: str | Path | IO[str]) -> None:
    """Persist a run as CSV or JSON.

    CSV columns are exactly ``t, setpoint, sensed, error, defuzz,
    fan_duty, heater_duty`` plus one ``mu_<term>`` column per input term.
    Output is byte-stable for a fixed config and seed.
    """
    if format not in ("csv", "json"):
        raise InvalidInputError(f"unknown trace format {format!r}")
    own = isinstance(destination, (str, Path))
    try:
        out: IO[str] = open(destination, "w", encoding="utf-8") if own else destination
    except OSError as exc:
        raise OSError(f"cannot write trace to {destination}: {exc}") from exc
    try:
        if format == "json":
            json.dump(record_to_dict(record), out, indent=2)
            out.write("\n")
            return
        controller = controller_from_dict(record.config["controller"])
        mu_cols = _mu_columns(controller)
        header = ["t", "setpoint", "sensed", "error", "defuzz", "fan_duty", "heater_duty"]
        header.extend(name for name, _, _ in mu_cols)
        out.write(",".join(header) + "\n")
        for frame in record.frames:
            row = [
                repr(frame.t),
                repr(frame.setpoint),
                repr(frame.sensed),
                repr(frame.error),
                "" if frame.defuzz is None else repr(frame.defuzz),
                repr(frame.fan_duty),
                repr(frame.heater_duty),
            ]
            for _, var, term in mu_cols:
                if frame.trace is None:
                    row.append("")
                else:
                    row.append(repr(frame.trace.fuzzified[var][term]))
            out.write(",".join(row) + "\n")
    finally:
        if own:
            out.close()


# -- configuration documents --------------------------------------------------

def default_config() -> LoopConfig:
    """The stock reproducibility anchor: canonical controller, default
    plant, setpoint 45 from ambient 25, 1 s samples for 600 s."""
    return LoopConfig(
        controller=build_temperature_controller(),
        plant=PlantParams(),
    )


def config_to_dict(config: LoopConfig) -> dict:
    return {
        "controller": controller_to_dict(config.controller),
        "plant": params_to_dict(config.plant),
        "loop": {
            "setpoint": config.setpoint,
            "sample_period": config.sample_period,
            "duration": config.duration,
            "initial_temp": config.initial_temp,
            "settle_band": config.settle_band,
            "setpoint_limits": [config.setpoint_limits[0], config.setpoint_limits[1]],
        },
    }


def config_from_dict(doc: Mapping) -> LoopConfig:
    """Validate and build a LoopConfig from one JSON document.

    Problems are collected into a single :class:`ConfigError` whose
    ``details`` name the offending paths.
    """
    if not isinstance(doc, Mapping):
        raise ConfigError("configuration must be a JSON object", path="")
    problems: list[dict[str, str]] = []

    controller = None
    ctl_doc = doc.get("controller")
    if ctl_doc is None:
        controller = build_temperature_controller()
    else:
        try:
            controller = controller_from_dict(ctl_doc)
        except (KeyError, TypeError) as exc:
            problems.append({"path": "controller", "message": f"missing or malformed field: {exc}"})
        except Exception as exc:  # parse/bind/shape errors carry their own text
            problems.append({"path": "controller", "message": str(exc)})

    params = None
    plant_doc = doc.get("plant", {})
    try:
        params = params_from_dict(dict(plant_doc)) if plant_doc else PlantParams()
    except (TypeError, ValueError) as exc:
        problems.append({"path": "plant", "message": str(exc)})

    loop_doc = dict(doc.get("loop", {}))
    loop_kwargs = {}
    for key in ("setpoint", "sample_period", "duration", "initial_temp", "settle_band"):
        if key in loop_doc:
            try:
                loop_kwargs[key] = float(loop_doc.pop(key))
            except (TypeError, ValueError):
                problems.append({"path": f"loop.{key}", "message": "must be a number"})
                loop_doc.pop(key, None)
    if "setpoint_limits" in loop_doc:
        limits = loop_doc.pop("setpoint_limits")
        try:
            loop_kwargs["setpoint_limits"] = (float(limits[0]), float(limits[1]))
        except (TypeError, ValueError, IndexError):
            problems.append({"path": "loop.setpoint_limits", "message": "must be a [lo, hi] pair"})
    for stray in loop_doc:
        problems.append({"path": f"loop.{stray}", "message": "unknown key"})

    if problems:
        raise ConfigError(problems)
    try:
        return LoopConfig(controller=controller, plant=params, **loop_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc), path="loop") from exc


def load_config(path: str | Path) -> LoopConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            doc = json.load(f)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", path=str(path)) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}", path=str(path)) from exc
    return config_from_dict(doc)
