"""Closed-form laws, parameter sweeps, and the end-to-end MAC path.

The closed-form dot-product law is the independent reference the event
simulation is verified against: for a matched column under complementary
drive the final differential voltage is

    v_diff = (i_bias / (N * c)) * sum_i (2*x_i - x_max) * w_i

with w_i the per-row effective weights. Everything else here is built on
repeated simulate/solve calls: scaling sweeps over the row count, input
voltage transfer sweeps, bias sweeps of the normalized differential
current, and the quantized multiply-accumulate pipeline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .devices import (
    CapacitorSpec,
    CurrentSourceSpec,
    DriveMode,
    PwmDrive,
    ResistancePair,
    RowState,
    SenseSpec,
    effective_weight,
)
from .engine import Topology, WeightColumn, simulate
from .errors import DegenerateInput, EmptyColumn, LengthMismatch, MatchingViolated
from .mapping import InputCodec, WeightCodec, build_column, check_matching, input_to_pulse
from .network import solve_nonideal

_PATTERNS = ("alternating", "broadcast")


def closed_form_v_diff(rows_or_weights, drive: PwmDrive, i_bias: float, c: float) -> float:
    """Final differential voltage from the matched-column law, no simulation.

    Accepts either resistance pairs (matching is checked at 1e-9 relative
    tolerance) or the effective weights directly. Only complementary
    drives obey the law.
    """
    if drive.mode is not DriveMode.COMPLEMENTARY:
        raise ValueError("the closed-form law holds for complementary drives only")
    seq = list(rows_or_weights)
    if not seq:
        raise EmptyColumn("need at least one row or weight")
    if isinstance(seq[0], ResistancePair):
        report = check_matching(seq, tol=1e-9)
        if not report.ok:
            raise MatchingViolated(
                f"rows are not matched: max relative deviation {report.max_rel_dev:.3e}"
            )
        w = np.array([effective_weight(p) for p in seq])
    else:
        w = np.asarray(seq, dtype=np.float64)
    if w.size != drive.n:
        raise LengthMismatch(f"{w.size} weights but {drive.n} pulse widths")
    signed = 2.0 * drive.x - drive.x_max
    return float(i_bias / (w.size * c) * np.dot(signed, w))


def max_idiff(pair: ResistancePair, source: CurrentSourceSpec, sense: SenseSpec) -> float:
    """Differential read current of one fully driven row."""
    sol = solve_nonideal([pair], [RowState.POS], source, sense)
    return sol.i_diff


def max_idiff_total(
    pair: ResistancePair, n: int, source: CurrentSourceSpec, sense: SenseSpec
) -> float:
    """Total differential current of n identical fully driven rows."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n!r}")
    sol = solve_nonideal([pair] * n, [RowState.POS] * n, source, sense)
    return sol.i_diff


@dataclass(frozen=True)
class SweepResult:
    """One swept axis plus any number of aligned result columns."""

    axis_name: str
    axis: np.ndarray
    columns: dict[str, np.ndarray]
    metadata: dict

    def __post_init__(self):
        axis = np.asarray(self.axis)
        if axis.ndim != 1 or axis.size == 0:
            raise ValueError("axis must be a non-empty 1-d array")
        if axis.size > 1 and not np.all(np.diff(axis.astype(np.float64)) > 0.0):
            raise ValueError("axis values must be strictly increasing")
        object.__setattr__(self, "axis", axis)
        for name, col in self.columns.items():
            if len(col) != axis.size:
                raise ValueError(f"column {name!r} length {len(col)} != axis {axis.size}")


def _fit_line(xs, ys) -> tuple[float, float, float]:
    """Least-squares line fit: (slope, intercept, r_squared)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    if xs.size != ys.size:
        raise LengthMismatch(f"{xs.size} x values but {ys.size} y values")
    if xs.size < 3:
        raise DegenerateInput("a linearity fit needs at least 3 points")
    x_mean = float(np.mean(xs))
    y_mean = float(np.mean(ys))
    sxx = float(np.sum((xs - x_mean) ** 2))
    if sxx == 0.0:
        raise DegenerateInput("x values must not all be equal")
    slope = float(np.sum((xs - x_mean) * (ys - y_mean))) / sxx
    intercept = y_mean - slope * x_mean
    ss_res = float(np.sum((ys - (slope * xs + intercept)) ** 2))
    ss_tot = float(np.sum((ys - y_mean) ** 2))
    if ss_tot == 0.0:
        return slope, intercept, 1.0
    return slope, intercept, 1.0 - ss_res / ss_tot


def linearity_r2(xs, ys) -> float:
    """Coefficient of determination of the best straight line through (xs, ys)."""
    return _fit_line(xs, ys)[2]


def _tile(base, n):
    return [base[i % len(base)] for i in range(n)]


def sweep_n(
    template_row: ResistancePair,
    n_values,
    pattern: str = "alternating",
    *,
    x_pattern,
    x_max: float,
    source: CurrentSourceSpec,
    sense: SenseSpec,
    cap: CapacitorSpec,
) -> SweepResult:
    """Final differential voltage versus row count, both topologies.

    "alternating" tiles (template, swapped template) rows with the first
    two pulse widths of x_pattern; "broadcast" replicates the template
    row and the first width everywhere. The conventional column runs
    precharged to the supply; the current-limited one uses cap as given.
    """
    if pattern not in _PATTERNS:
        raise ValueError(f"pattern must be one of {_PATTERNS}, got {pattern!r}")
    n_values = [int(n) for n in n_values]
    if not n_values or any(n < 1 for n in n_values):
        raise ValueError("n_values must be positive integers")
    x_pattern = list(x_pattern)
    if pattern == "alternating":
        if len(x_pattern) < 2:
            raise ValueError("alternating pattern needs two pulse widths")
        base_rows = [template_row, template_row.swapped()]
        base_x = x_pattern[:2]
    else:
        base_rows = [template_row]
        base_x = x_pattern[:1]

    precharged = replace(cap, v_init=source.v_supply)
    v_culd = np.empty(len(n_values))
    v_conv = np.empty(len(n_values))
    for j, n in enumerate(n_values):
        rows = tuple(_tile(base_rows, n))
        drive = PwmDrive(np.array(_tile(base_x, n)), x_max)
        culd = WeightColumn(rows, source, sense, cap, Topology.CURRENT_LIMITED)
        conv = WeightColumn(rows, source, sense, precharged, Topology.CONVENTIONAL)
        v_culd[j] = simulate(culd, drive).final_v_diff
        v_conv[j] = simulate(conv, drive).final_v_diff
    return SweepResult(
        axis_name="n",
        axis=np.array(n_values, dtype=np.int64),
        columns={
            "v_diff_current_limited_V": v_culd,
            "v_diff_conventional_V": v_conv,
        },
        metadata={"pattern": pattern, "x_max_s": x_max},
    )


def sweep_input(
    template_row: ResistancePair,
    x_values,
    n_values,
    *,
    x_max: float,
    source: CurrentSourceSpec,
    sense: SenseSpec,
    cap: CapacitorSpec,
) -> SweepResult:
    """Voltage transfer curve: v_diff versus shared pulse width, per row count.

    Every row stores the template weight and every row receives the swept
    width, so the curve is a straight line whose slope carries the sense
    attenuation. Per-n line fits land in metadata["fits"].
    """
    xs = np.asarray(x_values, dtype=np.float64)
    n_values = [int(n) for n in n_values]
    if not n_values or any(n < 1 for n in n_values):
        raise ValueError("n_values must be positive integers")
    columns: dict[str, np.ndarray] = {}
    fits: dict[int, dict[str, float]] = {}
    for n in n_values:
        column = WeightColumn((template_row,) * n, source, sense, cap)
        v = np.empty(xs.size)
        for j, xv in enumerate(xs):
            drive = PwmDrive(np.full(n, xv), x_max)
            v[j] = simulate(column, drive).final_v_diff
        columns[f"v_diff_n{n}_V"] = v
        slope, intercept, r2 = _fit_line(xs, v)
        fits[n] = {"slope_v_per_s": slope, "intercept_v": intercept, "r_squared": r2}
    return SweepResult(
        axis_name="x_s",
        axis=xs,
        columns=columns,
        metadata={"x_max_s": x_max, "fits": fits},
    )


def sweep_ibias(
    pair: ResistancePair,
    i_bias_values,
    n_values,
    sense: SenseSpec,
    *,
    r_out: float = math.inf,
    v_supply: float = 0.8,
) -> SweepResult:
    """Normalized differential current i_diff / i_bias versus bias current.

    The normalized value is the usable dynamic range of the read: ideal
    sensing pins it at the stored weight regardless of bias, while real
    sensing recovers range as the bias (and with it the sense conductance)
    grows.
    """
    ib = np.asarray(i_bias_values, dtype=np.float64)
    n_values = [int(n) for n in n_values]
    if not n_values or any(n < 1 for n in n_values):
        raise ValueError("n_values must be positive integers")
    columns = {f"norm_idiff_n{n}": np.empty(ib.size) for n in n_values}
    for j, bias in enumerate(ib):
        source = CurrentSourceSpec(i_bias=float(bias), r_out=r_out, v_supply=v_supply)
        for n in n_values:
            columns[f"norm_idiff_n{n}"][j] = max_idiff_total(pair, n, source, sense) / bias
    return SweepResult(
        axis_name="i_bias_a",
        axis=ib,
        columns=columns,
        metadata={"v_supply_v": v_supply},
    )


@dataclass(frozen=True)
class MacResult:
    """End-to-end multiply-accumulate outcome."""

    v_diff: float
    decoded: float
    exact: float
    abs_error: float


def mac_pipeline(
    weights,
    inputs,
    *,
    weight_codec: WeightCodec,
    input_codec: InputCodec,
    source: CurrentSourceSpec,
    sense: SenseSpec,
    cap: CapacitorSpec,
) -> MacResult:
    """Encode, simulate, and decode one dot product on the column.

    decoded rescales the final differential voltage by N*c/(x_max*i_bias),
    the inverse of the closed-form law's gain, so a perfect column returns
    exactly dot(inputs, weights).
    """
    weights = [float(w) for w in weights]
    inputs = [float(s) for s in inputs]
    if len(weights) != len(inputs):
        raise LengthMismatch(f"{len(weights)} weights but {len(inputs)} inputs")
    column = build_column(weights, weight_codec, source, sense, cap)
    x = np.array([input_to_pulse(s, input_codec) for s in inputs])
    drive = PwmDrive(x, input_codec.x_max)
    v_diff = simulate(column, drive).final_v_diff
    decoded = v_diff * column.n * cap.c / (input_codec.x_max * source.i_bias)
    exact = float(np.dot(inputs, weights))
    return MacResult(
        v_diff=v_diff,
        decoded=decoded,
        exact=exact,
        abs_error=abs(decoded - exact),
    )
