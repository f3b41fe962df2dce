"""Command line front end: simulate, sweep, mac, check.

Configs are JSON with unit-suffixed keys (x_max_s, i_bias_a, c_f, ...).
Results land as CSV with '.' decimal separators, 9-significant-digit
scientific notation and LF line endings, written atomically next to the
target path. Everything is deterministic; the seed is recorded in the
output header so reruns can be compared byte for byte.

Exit codes: 0 success, 2 validation error, 3 constraint violation,
4 numeric failure.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile

import numpy as np

from .analytics import mac_pipeline, sweep_ibias, sweep_input, sweep_n
from .devices import (
    CapacitorSpec,
    CurrentSourceSpec,
    DriveMode,
    PwmDrive,
    SenseModel,
    SenseSpec,
    ResistancePair,
)
from .engine import Topology, WeightColumn, simulate
from .errors import (
    ConfigError,
    ConstraintError,
    MatchingViolated,
    NumericError,
    ValidationError,
)
from .mapping import InputCodec, WeightCodec, check_matching, input_to_pulse, weight_to_pair


def _load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path!r}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a JSON object")
    return raw


def _section(cfg: dict, key: str, required: bool = True) -> dict:
    sec = cfg.get(key)
    if sec is None:
        if required:
            raise ConfigError(f"config is missing the {key!r} section")
        return {}
    if not isinstance(sec, dict):
        raise ConfigError(f"config section {key!r} must be an object")
    return sec


def _number(sec: dict, key: str, ctx: str, default=None) -> float:
    if key not in sec:
        if default is None:
            raise ConfigError(f"{ctx} is missing {key!r}")
        return default
    value = sec[key]
    if value == "inf":
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{ctx}.{key} must be a number, got {value!r}")
    return float(value)


def _weight_codec(sec: dict | None) -> WeightCodec:
    if not sec:
        return WeightCodec()
    return WeightCodec(
        g_total=_number(sec, "g_total_s", "codec", 10.1e-6),
        r_min=_number(sec, "r_min_ohm", "codec", 100e3),
        r_max=_number(sec, "r_max_ohm", "codec", 10e6),
    )


def _input_codec(sec: dict) -> InputCodec:
    bits = sec.get("resolution_bits")
    if bits is not None and (isinstance(bits, bool) or not isinstance(bits, int)):
        raise ConfigError(f"input codec resolution_bits must be an integer, got {bits!r}")
    return InputCodec(x_max=_number(sec, "x_max_s", "input codec"), resolution_bits=bits)


def _build_rows(cfg: dict) -> tuple[ResistancePair, ...]:
    sec = _section(cfg, "rows")
    if "resistances_ohm" in sec:
        pairs = sec["resistances_ohm"]
        if not isinstance(pairs, list) or not pairs:
            raise ConfigError("rows.resistances_ohm must be a non-empty list of [r_p, r_n]")
        rows = []
        for j, item in enumerate(pairs):
            if not isinstance(item, list) or len(item) != 2:
                raise ConfigError(f"rows.resistances_ohm[{j}] must be a [r_p, r_n] pair")
            rows.append(ResistancePair(float(item[0]), float(item[1])))
        return tuple(rows)
    if "weights" in sec:
        codec = _weight_codec(sec.get("codec"))
        weights = sec["weights"]
        if not isinstance(weights, list) or not weights:
            raise ConfigError("rows.weights must be a non-empty list")
        return tuple(weight_to_pair(float(w), codec) for w in weights)
    raise ConfigError("rows section needs either resistances_ohm or weights")


def _build_drive(cfg: dict) -> PwmDrive:
    sec = _section(cfg, "drive")
    mode = DriveMode(sec.get("mode", "complementary"))
    if "x_s" in sec:
        x = sec["x_s"]
        if not isinstance(x, list) or not x:
            raise ConfigError("drive.x_s must be a non-empty list of seconds")
        x_max = _number(sec, "x_max_s", "drive")
        return PwmDrive(np.array([float(v) for v in x]), x_max, mode)
    if "inputs" in sec:
        codec = _input_codec(_section(sec, "codec"))
        inputs = sec["inputs"]
        if not isinstance(inputs, list) or not inputs:
            raise ConfigError("drive.inputs must be a non-empty list")
        x = np.array([input_to_pulse(float(s), codec) for s in inputs])
        return PwmDrive(x, codec.x_max, mode)
    raise ConfigError("drive section needs either x_s (+ x_max_s) or inputs (+ codec)")


def _build_source(cfg: dict) -> CurrentSourceSpec:
    sec = _section(cfg, "source")
    return CurrentSourceSpec(
        i_bias=_number(sec, "i_bias_a", "source"),
        r_out=_number(sec, "r_out_ohm", "source", math.inf),
        v_supply=_number(sec, "v_supply_v", "source", 0.8),
    )


def _build_sense(cfg: dict) -> SenseSpec:
    sec = _section(cfg, "sense", required=False)
    if not sec:
        return SenseSpec.ideal()
    model = SenseModel(sec.get("model", "ideal"))
    if model is SenseModel.IDEAL:
        return SenseSpec.ideal()
    if model is SenseModel.CONSTANT_R:
        return SenseSpec.constant_r(_number(sec, "r_s_ohm", "sense"))
    return SenseSpec.gm_scaled(_number(sec, "k_a_per_v2", "sense"))


def _build_cap(cfg: dict) -> CapacitorSpec:
    sec = _section(cfg, "cap")
    return CapacitorSpec(
        c=_number(sec, "c_f", "cap"),
        v_init=_number(sec, "v_init_v", "cap", 0.0),
    )


def _build_topology(cfg: dict) -> Topology:
    return Topology(cfg.get("topology", "current_limited"))


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    return format(float(value), ".9e")


def _header_lines(cfg: dict) -> list[str]:
    lines = ["config: " + json.dumps(cfg, sort_keys=True, separators=(",", ":"))]
    if "seed" in cfg:
        lines.append(f"seed: {int(cfg['seed'])}")
    return lines


def _render_csv(meta: list[str], names: list[str], rows) -> str:
    buf = io.StringIO()
    for line in meta:
        buf.write(f"# {line}\n")
    buf.write(",".join(names) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    """Write to stdout, or atomically to a file (temp + rename)."""
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".cimcol-", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(text.encode("utf-8"))
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _summary(text: str, csv_on_stdout: bool) -> None:
    # keep the human line off stdout when the CSV itself goes there
    print(text, file=sys.stderr if csv_on_stdout else sys.stdout)


def _ensure_finite(name: str, values) -> None:
    if not np.all(np.isfinite(values)):
        raise NumericError(f"{name} produced non-finite values")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _cmd_simulate(cfg: dict, out: str | None) -> None:
    rows = _build_rows(cfg)
    drive = _build_drive(cfg)
    column = WeightColumn(
        rows=rows,
        source=_build_source(cfg),
        sense=_build_sense(cfg),
        cap=_build_cap(cfg),
        topology=_build_topology(cfg),
    )
    trace = simulate(column, drive)
    _ensure_finite("simulate", [trace.final_v_diff])
    _ensure_finite("simulate", trace.v_p)
    _ensure_finite("simulate", trace.v_n)
    names = ["t_start_s", "t_end_s", "i_p_A", "i_n_A", "v_p_V", "v_n_V"]
    text = _render_csv(_header_lines(cfg), names, trace.segments())
    _emit(text, out)
    if trace.rail_warning:
        print("warning: output voltage exceeded the supply rail", file=sys.stderr)
    _summary(f"v_diff={_fmt(trace.final_v_diff)} segments={trace.n_segments}", out is None)


def _sweep_spec(cfg: dict) -> dict:
    sec = _section(cfg, "sweep")
    if "axis" not in sec or "values" not in sec:
        raise ConfigError("sweep section needs axis and values")
    if not isinstance(sec["values"], list) or not sec["values"]:
        raise ConfigError("sweep.values must be a non-empty list")
    return sec


def _cmd_sweep(cfg: dict, out: str | None) -> None:
    sweep = _sweep_spec(cfg)
    axis = sweep["axis"]
    rows = _build_rows(cfg)
    sense = _build_sense(cfg)
    cap = _build_cap(cfg)
    meta = _header_lines(cfg)

    if axis == "n":
        drive = _build_drive(cfg)
        x_pattern = list(drive.x[:2]) if drive.x.size >= 2 else [float(drive.x[0])] * 2
        result = sweep_n(
            rows[0],
            [int(v) for v in sweep["values"]],
            sweep.get("pattern", "alternating"),
            x_pattern=x_pattern,
            x_max=drive.x_max,
            source=_build_source(cfg),
            sense=sense,
            cap=cap,
        )
    elif axis == "x":
        drive_sec = _section(cfg, "drive")
        x_max = _number(drive_sec, "x_max_s", "drive")
        result = sweep_input(
            rows[0],
            [float(v) for v in sweep["values"]],
            [int(v) for v in sweep.get("n_values", [1])],
            x_max=x_max,
            source=_build_source(cfg),
            sense=sense,
            cap=cap,
        )
        for n, fit in result.metadata["fits"].items():
            meta.append(
                f"fit n={n}: slope_v_per_s={_fmt(fit['slope_v_per_s'])} "
                f"intercept_v={_fmt(fit['intercept_v'])} r_squared={_fmt(fit['r_squared'])}"
            )
    elif axis == "ibias":
        src = _section(cfg, "source", required=False)
        result = sweep_ibias(
            rows[0],
            [float(v) for v in sweep["values"]],
            [int(v) for v in sweep.get("n_values", [1])],
            sense,
            r_out=_number(src, "r_out_ohm", "source", math.inf),
            v_supply=_number(src, "v_supply_v", "source", 0.8),
        )
    else:
        raise ConfigError(f"unknown sweep axis {axis!r} (expected n, x, or ibias)")

    for name, col in result.columns.items():
        _ensure_finite(name, col)
    names = [result.axis_name] + list(result.columns)
    table = zip(result.axis, *result.columns.values())
    _emit(_render_csv(meta, names, table), out)
    _summary(f"sweep axis={result.axis_name} points={result.axis.size}", out is None)


def _cmd_mac(cfg: dict, out: str | None) -> None:
    sec = _section(cfg, "mac")
    for key in ("weights", "inputs"):
        if not isinstance(sec.get(key), list) or not sec[key]:
            raise ConfigError(f"mac section needs a non-empty {key!r} list")
    result = mac_pipeline(
        sec["weights"],
        sec["inputs"],
        weight_codec=_weight_codec(sec.get("weight_codec")),
        input_codec=_input_codec(_section(sec, "input_codec")),
        source=_build_source(cfg),
        sense=_build_sense(cfg),
        cap=_build_cap(cfg),
    )
    _ensure_finite("mac", [result.v_diff, result.decoded])
    names = ["v_diff_V", "decoded", "exact", "abs_error"]
    row = [(result.v_diff, result.decoded, result.exact, result.abs_error)]
    _emit(_render_csv(_header_lines(cfg), names, row), out)
    _summary(
        f"decoded={_fmt(result.decoded)} exact={_fmt(result.exact)} "
        f"abs_error={_fmt(result.abs_error)}",
        out is None,
    )


def _cmd_check(cfg: dict, out: str | None) -> None:
    rows = _build_rows(cfg)
    tol = _number(cfg, "matching_tol", "config", 1e-9)
    report = check_matching(rows, tol)
    text = str(report) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        _emit(text, out)
    if not report.ok:
        raise MatchingViolated(
            f"{len(report.violations)} of {len(rows)} rows deviate beyond tol={tol!r}"
        )


_COMMANDS = {
    "simulate": _cmd_simulate,
    "sweep": _cmd_sweep,
    "mac": _cmd_mac,
    "check": _cmd_check,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cimcol",
        description="Differential current-mode MAC column simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "run one transient and dump the segment trace"),
        ("sweep", "run a parameter sweep (axis: n, x, or ibias)"),
        ("mac", "run the quantized multiply-accumulate pipeline"),
        ("check", "verify the column matching condition"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", required=True, help="path to a JSON run configuration")
        p.add_argument("--out", default=None, help="output file (default: stdout)")
        p.add_argument("--seed", type=int, default=None, help="seed recorded in the output")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be non-negative")
            cfg["seed"] = args.seed
        _COMMANDS[args.command](cfg, args.out)
    except (ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConstraintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (NumericError, FloatingPointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
