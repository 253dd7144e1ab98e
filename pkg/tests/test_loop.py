import json
import math
import threading
import pytest
from hypothesis import given, settings, strategies as st

from fuzzytherm.errors import ConfigError, InvalidInputError
from fuzzytherm.inference import FuzzyController, build_temperature_controller, peak_table_for
from fuzzytherm.loop import (
    LoopConfig,
    LoopRunner,
    config_from_dict,
    config_to_dict,
    default_config,
    frame_to_dict,
    load_config,
    loop_step,
    run,
    write_trace,
)
from fuzzytherm.membership import build_error_variable, build_pwm_variable
from fuzzytherm.plant import PlantParams, PlantState
from fuzzytherm.rules import parse_rules

import numpy as np


def wide_adc_plant(**kwargs) -> PlantParams:
    """16-bit sensor so readings track the plate to within 0.002 degrees."""
    defaults = dict(sensor_noise_std=0.0, adc_bits=16, adc_range=(-500.0, 500.0))
    defaults.update(kwargs)
    return PlantParams(**defaults)


def make_config(**kwargs) -> LoopConfig:
    defaults = dict(controller=build_temperature_controller(), plant=wide_adc_plant())
    defaults.update(kwargs)
    return LoopConfig(**defaults)


class TestLoopStep:
    def test_one_degree_hot_splits_51_49(self):
        config = make_config(setpoint=45.0, initial_temp=46.0)
        rng = np.random.default_rng(0)
        frame, _ = loop_step(config, PlantState(plate_temp=46.0), rng)
        assert frame.error == pytest.approx(-1.0, abs=0.01)
        assert frame.defuzz == pytest.approx(130.9, abs=0.1)
        assert frame.fan_duty == pytest.approx(0.51, abs=0.005)
        assert frame.heater_duty == pytest.approx(0.49, abs=0.005)

    def test_on_setpoint_splits_50_50(self):
        # The 16-bit reading sits within half a quantum (~0.008) of the plate.
        config = make_config(setpoint=45.0, initial_temp=45.0)
        frame, _ = loop_step(config, PlantState(plate_temp=45.0), np.random.default_rng(0))
        assert frame.error == pytest.approx(0.0, abs=0.01)
        assert frame.defuzz == pytest.approx(127.5, abs=0.05)
        assert frame.fan_duty == pytest.approx(0.5, abs=1e-3)

    def test_twenty_degrees_cold_heats_harder_than_it_fans(self):
        config = make_config(setpoint=45.0, initial_temp=25.0)
        frame, _ = loop_step(config, PlantState(plate_temp=25.0), np.random.default_rng(0))
        assert frame.error == pytest.approx(20.0, abs=2e-3)
        assert frame.heater_duty > frame.fan_duty

    def test_error_is_setpoint_minus_sensed_exactly(self):
        config = make_config(setpoint=45.0, initial_temp=33.3)
        frame, _ = loop_step(config, PlantState(plate_temp=33.3), np.random.default_rng(0))
        assert frame.error == frame.setpoint - frame.sensed

    def test_plant_advances_one_sample(self):
        config = make_config(sample_period=0.5)
        _, state = loop_step(config, PlantState(plate_temp=25.0, time=3.0), np.random.default_rng(0))
        assert state.time == 3.5


def partial_controller() -> FuzzyController:
    """A controller that leaves most of the error universe uncovered."""
    pwm_var = build_pwm_variable()
    rb = parse_rules("IF error IS POZ THEN pwm IS Z", [build_error_variable()], pwm_var)
    return FuzzyController(rulebase=rb, peak_table=peak_table_for(pwm_var))


class TestDegenerateHandling:
    def test_first_degenerate_frame_holds_zero_duties(self):
        config = make_config(controller=partial_controller(), setpoint=45.0, initial_temp=45.0)
        frame, _ = loop_step(config, PlantState(plate_temp=45.0), np.random.default_rng(0))
        assert frame.degenerate
        assert frame.defuzz is None
        assert frame.trace is None
        assert frame.fan_duty == 0.0 and frame.heater_duty == 0.0

    def test_later_degenerate_frames_hold_previous_duties(self):
        # Start 20 degrees cold (POZ region, rule fires), then force the
        # next step into uncovered territory by jumping the setpoint.
        config = make_config(controller=partial_controller(), setpoint=45.0, initial_temp=25.0)
        rng = np.random.default_rng(0)
        healthy, state = loop_step(config, PlantState(plate_temp=25.0), rng)
        assert not healthy.degenerate
        stuck, _ = loop_step(config, state, rng, prev_frame=healthy, setpoint=state.plate_temp)
        assert stuck.degenerate
        assert stuck.fan_duty == healthy.fan_duty
        assert stuck.heater_duty == healthy.heater_duty


class TestRun:
    def test_frame_count_and_spacing(self):
        config = make_config(sample_period=0.5, duration=10.0)
        record = run(config)
        assert len(record.frames) == 20
        times = [f.t for f in record.frames]
        assert times[0] == 0.0
        spacing = {round(b - a, 9) for a, b in zip(times, times[1:])}
        assert spacing == {0.5}

    def test_duration_shorter_than_sample_rejected(self):
        with pytest.raises(ValueError):
            make_config(sample_period=1.0, duration=0.5)

    def test_holding_at_ambient_setpoint(self):
        # Setpoint at ambient: near zero error the controller still splits
        # duties 50/50, which injects heat, so the plate drifts up until the
        # rising fan share balances it about 10 degrees above ambient.
        # Regression pin of that actuation-induced equilibrium shift.
        config = make_config(setpoint=25.0, initial_temp=25.0, duration=600.0)
        record = run(config)
        assert max(abs(f.error) for f in record.frames) <= 10.5
        assert record.frames[-1].error == pytest.approx(-10.03, abs=0.1)

    def test_default_config_settles_and_stays(self):
        record = run(default_config())
        summary = record.summary
        assert summary.frames == 600
        assert summary.settling_time is not None and summary.settling_time <= 600.0
        assert summary.steady_state_band is not None and summary.steady_state_band <= 1.0
        assert summary.overshoot <= 3.0

    def test_complementary_duties_everywhere(self):
        record = run(make_config(duration=120.0))
        for frame in record.frames:
            assert frame.fan_duty + frame.heater_duty == 1.0

    def test_sign_sanity_bands(self):
        # Far too hot: the fan side saturates at the VH peak, 210.375/255.
        # Far too cold: the heater side is bounded by the L peak, giving at
        # least 1 - 89/255 = 0.651 of heater duty.
        hot = make_config(setpoint=25.0, initial_temp=60.0, duration=60.0)
        for frame in run(hot).frames:
            if frame.error < -15.0:
                assert frame.fan_duty > 0.7
        cold = make_config(setpoint=80.0, initial_temp=25.0, duration=60.0)
        for frame in run(cold).frames:
            if frame.error > 15.0:
                assert frame.heater_duty >= 0.65

    def test_summary_of_never_settling_run(self):
        config = make_config(setpoint=100.0, initial_temp=25.0, duration=5.0)
        record = run(config)
        assert record.summary.settling_time is None
        assert record.summary.steady_state_band is None

    @settings(max_examples=10, deadline=None)
    @given(
        st.floats(10.0, 110.0),
        st.floats(0.0, 140.0),
        st.floats(0.0, 1.5),
        st.integers(0, 2**31),
    )
    def test_no_nan_or_inf_in_any_frame(self, setpoint, initial, noise, seed):
        config = make_config(
            setpoint=setpoint,
            initial_temp=initial,
            duration=20.0,
            plant=wide_adc_plant(sensor_noise_std=noise, seed=seed),
        )
        for frame in run(config).frames:
            for value in (frame.t, frame.setpoint, frame.sensed, frame.error,
                          frame.fan_duty, frame.heater_duty):
                assert math.isfinite(value)
            assert frame.defuzz is None or math.isfinite(frame.defuzz)


class TestRunner:
    def test_setpoint_applies_at_next_sample_boundary(self):
        config = make_config(duration=30.0)
        seen = []
        runner = LoopRunner(config, on_frame=seen.append)
        changed = threading.Event()

        def chase():
            while len(seen) < 5:
                pass
            runner.submit_setpoint(52.0)
            changed.set()

        # Fast non-paced run with a racing setpoint command: every frame
        # before the command carries 45, and once one frame shows 52 every
        # later frame does too (no retroactive edits, no flapping).
        t = threading.Thread(target=chase)
        t.start()
        record = runner.run()
        t.join()
        assert changed.is_set()
        setpoints = [f.setpoint for f in record.frames]
        assert setpoints[0] == 45.0
        flips = sum(1 for a, b in zip(setpoints, setpoints[1:]) if a != b)
        assert flips <= 1
        if 52.0 in setpoints:
            first = setpoints.index(52.0)
            assert all(sp == 52.0 for sp in setpoints[first:])

    def test_setpoint_outside_limits_rejected(self):
        runner = LoopRunner(make_config())
        with pytest.raises(InvalidInputError):
            runner.submit_setpoint(-10.0)
        with pytest.raises(InvalidInputError):
            runner.submit_setpoint(121.0)

    def test_stop_halts_at_next_sample(self):
        config = make_config(duration=600.0)
        runner = LoopRunner(config)
        runner.submit_setpoint(50.0)
        runner.request_stop()
        record = runner.run()
        assert record.frames == ()
        assert runner.finished

    def test_stop_after_some_frames(self):
        config = make_config(duration=600.0)
        holder: dict = {}

        def stop_soon(frame):
            if frame.t >= 5.0:
                holder["runner"].request_stop()

        runner = LoopRunner(config, on_frame=stop_soon)
        holder["runner"] = runner
        record = runner.run()
        assert 0 < len(record.frames) <= 8


class TestTracePersistence:
    def test_csv_header_contract(self, tmp_path):
        record = run(make_config(duration=5.0))
        out = tmp_path / "trace.csv"
        write_trace(record, "csv", out)
        header = out.read_text().splitlines()[0]
        assert header == (
            "t,setpoint,sensed,error,defuzz,fan_duty,heater_duty,"
            "mu_NEG,mu_SNEG,mu_ZERO,mu_SPOZ,mu_POZ"
        )

    def test_csv_is_byte_stable_across_reruns(self, tmp_path):
        config = make_config(duration=30.0, plant=wide_adc_plant(sensor_noise_std=0.4, seed=11))
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_trace(run(config), "csv", a)
        write_trace(run(config), "csv", b)
        assert a.read_bytes() == b.read_bytes()

    def test_json_embeds_full_traces_and_seed(self, tmp_path):
        record = run(make_config(duration=3.0))
        out = tmp_path / "trace.json"
        write_trace(record, "json", out)
        doc = json.loads(out.read_text())
        assert doc["config"]["plant"]["seed"] == 0
        assert len(doc["frames"]) == 3
        assert doc["frames"][0]["trace"]["fuzzified"]["error"]
        assert doc["summary"]["frames"] == 3

    def test_crossing_fixture_fan_duty(self):
        # Cooling from 50 toward a 45 setpoint passes through 46 sensed;
        # the frame nearest that crossing runs the fan at 51% +/- 1pp.
        config = make_config(initial_temp=50.0, duration=300.0)
        record = run(config)
        crossing = next(f for f in record.frames if f.sensed <= 46.0)
        assert crossing.fan_duty == pytest.approx(0.51, abs=0.01)

    def test_unwritable_destination_raises_oserror(self, tmp_path):
        record = run(make_config(duration=3.0))
        with pytest.raises(OSError):
            write_trace(record, "csv", tmp_path / "missing" / "trace.csv")

    def test_unknown_format_rejected(self, tmp_path):
        record = run(make_config(duration=3.0))
        with pytest.raises(InvalidInputError):
            write_trace(record, "xml", tmp_path / "trace.xml")

    def test_frame_document_shape(self):
        record = run(make_config(duration=3.0))
        doc = frame_to_dict(record.frames[0])
        assert set(doc) == {
            "t", "setpoint", "sensed", "error", "defuzz",
            "fan_duty", "heater_duty", "degenerate", "trace",
        }


class TestConfigDocuments:
    def test_round_trip(self):
        config = default_config()
        doc = config_to_dict(config)
        rebuilt = config_from_dict(doc)
        assert config_to_dict(rebuilt) == doc

    def test_defaults_fill_missing_sections(self):
        config = config_from_dict({})
        assert config.setpoint == 45.0
        assert config.plant == PlantParams()

    def test_field_level_errors_carry_paths(self):
        doc = {
            "plant": {"capacitance": -5.0},
            "loop": {"sample_period": "fast", "mystery": 1},
        }
        with pytest.raises(ConfigError) as exc:
            config_from_dict(doc)
        paths = {d["path"] for d in exc.value.details}
        assert "plant" in paths
        assert "loop.sample_period" in paths
        assert "loop.mystery" in paths

    def test_loop_invariant_violations_reported(self):
        with pytest.raises(ConfigError):
            config_from_dict({"loop": {"sample_period": 2.0, "duration": 1.0}})

    def test_sample_period_against_stability_bound(self):
        with pytest.raises(ConfigError):
            config_from_dict({"loop": {"sample_period": 400.0, "duration": 4000.0}})

    def test_load_config_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.json")

    def test_load_config_bad_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(ConfigError):
            load_config(path)


class TestSummarize:
    def test_settling_time_is_first_permanent_entry(self):
        config = make_config(duration=400.0)
        record = run(config)
        settle = record.summary.settling_time
        for frame in record.frames:
            if frame.t < settle:
                continue
            assert abs(frame.error) <= 1.0
        before = [f for f in record.frames if f.t < settle]
        assert before and abs(before[-1].error) > 1.0

    def test_overshoot_definition(self):
        record = run(make_config(duration=60.0))
        expected = max(f.sensed for f in record.frames) - record.frames[-1].setpoint
        assert record.summary.overshoot == expected
