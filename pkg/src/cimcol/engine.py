"""Event-driven transient simulation of one weight column.

Pulse edges split the window into segments on which every row state is
constant, so each segment needs one DC solve and one exact update of the
output capacitors: a linear voltage ramp for the current-limited column,
an exponential decay toward ground for the conventional discharge column.
No time stepping is involved; the trace is exact for the circuit model.

Sign conventions: capacitor currents are positive charging. For the
conventional topology the stored per-segment current is the signed
average capacitor current, which is negative while a line discharges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .devices import (
    CapacitorSpec,
    CurrentSourceSpec,
    DriveMode,
    PwmDrive,
    ResistancePair,
    SenseSpec,
    pwm_edges,
)
from .errors import EmptyColumn, LengthMismatch, TimeOutOfRange


class Topology(str, Enum):
    """Column output stage style."""

    # tail source limits the total current; complementary cells steer it
    CURRENT_LIMITED = "current_limited"
    # precharged bit-line capacitors discharge through active cells
    CONVENTIONAL = "conventional"


@dataclass(frozen=True)
class WeightColumn:
    """A full column: stored weights plus its bias, sense and output stage."""

    rows: tuple[ResistancePair, ...]
    source: CurrentSourceSpec
    sense: SenseSpec
    cap: CapacitorSpec
    topology: Topology = Topology.CURRENT_LIMITED

    def __post_init__(self):
        rows = tuple(self.rows)
        if not rows:
            raise EmptyColumn("a column needs at least one row")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "topology", Topology(self.topology))
        if self.cap.v_init > self.source.v_supply:
            raise ValueError(
                f"v_init={self.cap.v_init!r} above the supply {self.source.v_supply!r}"
            )

    @property
    def n(self) -> int:
        return len(self.rows)

    def conductances(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-row conductance arrays (g_p, g_n) for the kernel solves."""
        r = np.array([(p.r_p, p.r_n) for p in self.rows])
        return 1.0 / r[:, 0], 1.0 / r[:, 1]


@dataclass(frozen=True)
class TransientTrace:
    """Piecewise-exact transient of the two output nodes.

    Arrays are per segment: bounds, signed average capacitor currents, and
    end-of-segment voltages. rate_p / rate_n hold the per-segment decay
    rates (1/s) for the conventional topology and are None otherwise.
    """

    topology: Topology
    t_start: np.ndarray
    t_end: np.ndarray
    i_p: np.ndarray
    i_n: np.ndarray
    v_p: np.ndarray
    v_n: np.ndarray
    v_init: float
    c: float
    final_v_diff: float
    rail_warning: bool = False
    rate_p: np.ndarray | None = None
    rate_n: np.ndarray | None = None

    @property
    def n_segments(self) -> int:
        return int(self.t_start.size)

    @property
    def x_max(self) -> float:
        return float(self.t_end[-1])

    def segments(self):
        """Yield (t_start, t_end, i_p, i_n, v_p_end, v_n_end) per segment."""
        for k in range(self.n_segments):
            yield (
                float(self.t_start[k]),
                float(self.t_end[k]),
                float(self.i_p[k]),
                float(self.i_n[k]),
                float(self.v_p[k]),
                float(self.v_n[k]),
            )

    def _starts(self, k: int) -> tuple[float, float]:
        if k == 0:
            return self.v_init, self.v_init
        return float(self.v_p[k - 1]), float(self.v_n[k - 1])


def simulate(column: WeightColumn, drive: PwmDrive) -> TransientTrace:
    """Run one column through one drive and return the exact transient.

    The drive must carry one pulse width per row. The conventional
    topology only uses the plain word lines, so the drive mode does not
    affect it.
    """
    if drive.n != column.n:
        raise LengthMismatch(f"column has {column.n} rows but drive has {drive.n} widths")
    edges = pwm_edges(drive)
    t_start = edges[:-1]
    t_end = edges[1:]
    dt = t_end - t_start
    gp, gn = column.conductances()
    x = drive.x
    c = column.cap.c
    v_init = column.cap.v_init

    if column.topology is Topology.CONVENTIONAL:
        gline_p, gline_n = _kernels.discharge_line_totals(gp, gn, x, edges)
        rate_p = gline_p / c
        rate_n = gline_n / c
        v_p = v_init * np.cumprod(np.exp(-rate_p * dt))
        v_n = v_init * np.cumprod(np.exp(-rate_n * dt))
        vps = np.concatenate(([v_init], v_p[:-1]))
        vns = np.concatenate(([v_init], v_n[:-1]))
        i_p = c * (v_p - vps) / dt
        i_n = c * (v_n - vns) / dt
        return TransientTrace(
            topology=column.topology,
            t_start=t_start,
            t_end=t_end,
            i_p=i_p,
            i_n=i_n,
            v_p=v_p,
            v_n=v_n,
            v_init=v_init,
            c=c,
            final_v_diff=float(v_p[-1] - v_n[-1]),
            rate_p=rate_p,
            rate_n=rate_n,
        )

    src = column.source
    wl_only = drive.mode is DriveMode.WL_ONLY
    if column.sense.is_ideal and math.isinf(src.r_out):
        i_p, i_n = _kernels.culd_ideal_totals(gp, gn, x, edges, wl_only, src.i_bias)
    else:
        r_s = column.sense.resolve_r_s(src.i_bias)
        g_out = 0.0 if math.isinf(src.r_out) else 1.0 / src.r_out
        i_p, i_n = _kernels.culd_nonideal_totals(
            gp, gn, x, edges, wl_only, src.i_bias, r_s, g_out, src.v_supply
        )
    v_p = v_init + np.cumsum(i_p * dt) / c
    v_n = v_init + np.cumsum(i_n * dt) / c
    rail = bool(np.max(np.abs(v_p)) > src.v_supply or np.max(np.abs(v_n)) > src.v_supply)
    return TransientTrace(
        topology=column.topology,
        t_start=t_start,
        t_end=t_end,
        i_p=i_p,
        i_n=i_n,
        v_p=v_p,
        v_n=v_n,
        v_init=v_init,
        c=c,
        final_v_diff=float(v_p[-1] - v_n[-1]),
        rail_warning=rail,
    )


def readout(trace: TransientTrace, t: float) -> float:
    """Differential output voltage at any time inside the window.

    Evaluates the piecewise closed form of the segment containing t, so
    the value is continuous across segment boundaries and lands exactly on
    final_v_diff at t = x_max.
    """
    if not 0.0 <= t <= trace.x_max:
        raise TimeOutOfRange(f"t={t!r} outside [0, {trace.x_max!r}]")
    if t >= trace.x_max:
        return trace.final_v_diff
    k = int(np.searchsorted(trace.t_start, t, side="right")) - 1
    vps, vns = trace._starts(k)
    dt = t - float(trace.t_start[k])
    if trace.topology is Topology.CONVENTIONAL:
        v_p = vps * math.exp(-float(trace.rate_p[k]) * dt)
        v_n = vns * math.exp(-float(trace.rate_n[k]) * dt)
    else:
        v_p = vps + float(trace.i_p[k]) * dt / trace.c
        v_n = vns + float(trace.i_n[k]) * dt / trace.c
    return v_p - v_n
