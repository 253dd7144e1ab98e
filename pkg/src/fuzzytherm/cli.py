"""Command-line front end.

Subcommands: simulate, step, compile-rules, serve, default-config,
demo-room. Success output on stdout is always a single JSON object (or a
file written where --out says); human-readable errors go to stderr. Exit
codes: 0 success, 1 runtime failure, 2 usage or validation failure.
"""

from __future__ import annotations

import argparse
import json
import socket
import sys
from dataclasses import replace
from pathlib import Path

from . import loop as loopmod
from .errors import ConfigError, FuzzyThermError
from .inference import infer, trace_to_dict
from .loop import config_to_dict, default_config, load_config, run, write_trace
from .pwm import duty_from_level
from .room import ROOM_RANGE, evaluate_room
from .rules import matrix_from_dict, matrix_to_rules, parse_rules, serialize_rulebase


def _fail(message: str, code: int) -> int:
    print(f"fuzzytherm: {message}", file=sys.stderr)
    return code


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2))


def _cmd_simulate(args: argparse.Namespace) -> int:
    try:
        config = load_config(args.config)
    except ConfigError as exc:
        return _fail(str(exc), 2)
    if args.seed is not None:
        config = replace(config, plant=replace(config.plant, seed=args.seed))
    try:
        record = run(config)
        write_trace(record, args.format, args.out)
    except OSError as exc:
        return _fail(str(exc), 1)
    summary = record.summary
    _emit(
        {
            "out": str(args.out),
            "format": args.format,
            "frames": summary.frames,
            "settling_time": summary.settling_time,
            "overshoot": summary.overshoot,
            "steady_state_band": summary.steady_state_band,
        }
    )
    return 0


def _cmd_step(args: argparse.Namespace) -> int:
    try:
        doc = json.loads(Path(args.controller).read_text(encoding="utf-8"))
        # Accept either a bare controller document or a full run config.
        ctl_doc = doc.get("controller", doc) if isinstance(doc, dict) else doc
        config = loopmod.config_from_dict({"controller": ctl_doc})
    except OSError as exc:
        return _fail(f"cannot read controller spec: {exc}", 2)
    except (json.JSONDecodeError, ConfigError) as exc:
        return _fail(f"invalid controller spec: {exc}", 2)
    try:
        trace = infer(config.controller, {"error": args.error})
    except FuzzyThermError as exc:
        return _fail(str(exc), 1)
    fan = duty_from_level(trace.output)
    _emit(
        {
            "error": args.error,
            "trace": trace_to_dict(trace),
            "defuzz": trace.output,
            "fan_duty": fan,
            "heater_duty": 1.0 - fan,
        }
    )
    return 0


def _cmd_compile_rules(args: argparse.Namespace) -> int:
    try:
        vocab_doc = json.loads(Path(args.vocab).read_text(encoding="utf-8"))
        from .membership import variable_from_dict

        input_vars = [variable_from_dict(d) for d in vocab_doc["inputs"]]
        output_var = variable_from_dict(vocab_doc["output"])
    except OSError as exc:
        return _fail(f"cannot read vocabulary: {exc}", 2)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        return _fail(f"invalid vocabulary: {exc}", 2)
    rules_path = Path(args.rules)
    try:
        raw = rules_path.read_text(encoding="utf-8")
    except OSError as exc:
        return _fail(f"cannot read rules: {exc}", 2)
    try:
        if rules_path.suffix.lower() == ".json":
            rulebase = matrix_to_rules(matrix_from_dict(json.loads(raw)), input_vars, output_var)
        else:
            rulebase = parse_rules(raw, input_vars, output_var)
    except (json.JSONDecodeError, ValueError, FuzzyThermError) as exc:
        return _fail(str(exc), 2)
    canon = serialize_rulebase(rulebase)
    try:
        Path(args.out).write_text(canon, encoding="utf-8")
    except OSError as exc:
        return _fail(str(exc), 1)
    _emit({"out": str(args.out), "rules": len(rulebase.rules)})
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    host, sep, port_text = args.listen.rpartition(":")
    if not sep or not host:
        return _fail(f"--listen must be host:port, got {args.listen!r}", 2)
    try:
        port = int(port_text)
        if not 0 <= port <= 65535:
            raise ValueError
    except ValueError:
        return _fail(f"invalid port in --listen: {port_text!r}", 2)
    base_doc = None
    if args.config is not None:
        try:
            base_doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
            loopmod.config_from_dict({k: v for k, v in base_doc.items() if k != "speed"})
        except (OSError, json.JSONDecodeError, ConfigError) as exc:
            return _fail(f"invalid config: {exc}", 2)
    # Fail fast with exit 1 if the port is taken, before uvicorn owns the tty.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        return _fail(f"cannot listen on {args.listen}: {exc}", 1)
    finally:
        probe.close()

    import uvicorn

    from .service import create_app

    app = create_app(base_config=base_doc)
    uvicorn.run(app, host=host, port=port, log_level="warning")
    return 0


def _cmd_default_config(args: argparse.Namespace) -> int:
    doc = config_to_dict(default_config())
    try:
        Path(args.out).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        return _fail(str(exc), 1)
    _emit({"out": str(args.out)})
    return 0


def _cmd_demo_room(args: argparse.Namespace) -> int:
    lo, hi = ROOM_RANGE
    for label, value in (("temperature", args.temperature), ("target", args.target)):
        if not lo <= value <= hi:
            return _fail(f"--{label} must lie in [{lo}, {hi}], got {value}", 2)
    command, degrees = evaluate_room(args.temperature, args.target)
    _emit({"command": command, "degrees": degrees})
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzytherm",
        description="Fuzzy-logic temperature control toolkit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a closed-loop simulation and write its trace")
    p.add_argument("--config", required=True, help="run configuration JSON")
    p.add_argument("--out", required=True, help="trace output path")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--seed", type=int, default=None, help="override the plant seed")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("step", help="evaluate the controller once at a given error")
    p.add_argument("--controller", required=True, help="controller spec JSON (or full run config)")
    p.add_argument("--error", type=float, required=True)
    p.set_defaults(func=_cmd_step)

    p = sub.add_parser("compile-rules", help="parse rules (or a matrix) and write the canonical form")
    p.add_argument("--rules", required=True, help=".frl rule text, or .json rule matrix")
    p.add_argument("--vocab", required=True, help="vocabulary JSON: {inputs: [...], output: {...}}")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_compile_rules)

    p = sub.add_parser("serve", help="start the operator HTTP service")
    p.add_argument("--config", default=None, help="base config used for runs started with an empty body")
    p.add_argument("--listen", default="127.0.0.1:8700")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("default-config", help="write the canonical run configuration")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_default_config)

    p = sub.add_parser("demo-room", help="evaluate the room-thermostat rule matrix once")
    p.add_argument("--temperature", type=float, required=True)
    p.add_argument("--target", type=float, required=True)
    p.set_defaults(func=_cmd_demo_room)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FuzzyThermError as exc:
        return _fail(str(exc), 1)


if __name__ == "__main__":
    sys.exit(main())
