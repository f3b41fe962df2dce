"""Per-segment DC solves for the differential column.

Within one segment every row state is frozen, so the crossbar reduces to
two conductance totals: A into the positive bit line and B into the
negative one, both returning through the shared source line.

Ideal model. Perfect mirrors pin both bit lines and the tail sinks
exactly i_bias from the source line, so currents divide by conductance:

    i_p[i] = i_bias * ga[i] / (A + B)        (ga, gb per-row line conductances)

For a matched column (equal row conductance sums, N active rows) this
collapses to the per-row split i_bias * r_n / (N * (r_p + r_n)).

Nonideal model. Each bit line reaches the supply rail through a series
sense resistance r_s, and the tail is a Norton sink (i_bias in parallel
with r_out to ground) on the source line. Folding each line into its
Thevenin equivalent pa = A*gs/(gs + A), pb likewise, the source-line
voltage follows from one KCL equation:

    v_sl = ((pa + pb) * v_supply - i_bias) / (pa + pb + g_out)

after which bit-line voltages and per-row currents fall out directly.
With r_s = 0 and r_out infinite this reproduces the ideal solve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .devices import CurrentSourceSpec, ResistancePair, RowState, SenseSpec
from .errors import LengthMismatch


@dataclass(frozen=True)
class SegmentSolution:
    """DC operating point of the column during one segment.

    Currents are positive flowing from a bit line through the cells into
    the source line. Voltages are node potentials against ground.
    """

    i_p: np.ndarray
    i_n: np.ndarray
    i_p_total: float
    i_n_total: float
    v_sl: float
    v_blp: float
    v_bln: float

    @property
    def i_diff(self) -> float:
        return self.i_p_total - self.i_n_total


def _line_conductances(rows, states):
    """Per-row conductances (ga, gb) seen by the two bit lines."""
    rows = tuple(rows)
    states = tuple(states)
    if len(rows) != len(states):
        raise LengthMismatch(f"{len(rows)} rows but {len(states)} states")
    ga = np.zeros(len(rows))
    gb = np.zeros(len(rows))
    for i, (pair, state) in enumerate(zip(rows, states)):
        if state is RowState.POS:
            ga[i] = pair.g_p
            gb[i] = pair.g_n
        elif state is RowState.NEG:
            ga[i] = pair.g_n
            gb[i] = pair.g_p
    return ga, gb


def solve_ideal(rows, states, i_bias: float) -> SegmentSolution:
    """Current-divider solve with pinned bit lines and a stiff tail.

    Bit lines are reported at 0 V by convention; the source line sits at
    the voltage the total conductance develops under i_bias. A fully off
    column carries no current anywhere.
    """
    ga, gb = _line_conductances(rows, states)
    g_total = float(np.sum(ga) + np.sum(gb))
    if g_total == 0.0:
        zero = np.zeros_like(ga)
        return SegmentSolution(zero, zero.copy(), 0.0, 0.0, 0.0, 0.0, 0.0)
    i_p = i_bias * ga / g_total
    i_n = i_bias * gb / g_total
    return SegmentSolution(
        i_p=i_p,
        i_n=i_n,
        i_p_total=float(np.sum(i_p)),
        i_n_total=float(np.sum(i_n)),
        v_sl=i_bias / g_total,
        v_blp=0.0,
        v_bln=0.0,
    )


def solve_nonideal(
    rows, states, source: CurrentSourceSpec, sense: SenseSpec
) -> SegmentSolution:
    """Three-node closed-form solve with sense drops and finite tail shunt.

    All nodes float to the supply when every row is off (no current path,
    so no drop across the sense elements and none through r_out).
    """
    ga, gb = _line_conductances(rows, states)
    a = float(np.sum(ga))
    b = float(np.sum(gb))
    v_supply = source.v_supply
    if a + b == 0.0:
        zero = np.zeros_like(ga)
        return SegmentSolution(zero, zero.copy(), 0.0, 0.0, v_supply, v_supply, v_supply)

    r_s = sense.resolve_r_s(source.i_bias)
    g_out = 0.0 if math.isinf(source.r_out) else 1.0 / source.r_out
    if r_s > 0.0:
        gs = 1.0 / r_s
        pa = a * gs / (gs + a)
        pb = b * gs / (gs + b)
    else:
        pa, pb = a, b
    v_sl = ((pa + pb) * v_supply - source.i_bias) / (pa + pb + g_out)
    if r_s > 0.0:
        v_blp = (gs * v_supply + a * v_sl) / (gs + a) if a > 0.0 else v_supply
        v_bln = (gs * v_supply + b * v_sl) / (gs + b) if b > 0.0 else v_supply
    else:
        v_blp = v_bln = v_supply
    i_p = ga * (v_blp - v_sl)
    i_n = gb * (v_bln - v_sl)
    return SegmentSolution(
        i_p=i_p,
        i_n=i_n,
        i_p_total=float(np.sum(i_p)),
        i_n_total=float(np.sum(i_n)),
        v_sl=v_sl,
        v_blp=v_blp,
        v_bln=v_bln,
    )


def attenuation_closed_form(n: int, r_s: float, r_sum: float) -> float:
    """Differential-current shrink factor from series sense resistance.

    For a matched column of n active rows with per-row resistance sum
    r_sum, the differential current scales by 1 / (1 + 2*n*r_s / r_sum)
    against the ideal-sense value. Equals 1 when r_s = 0 and falls
    monotonically as n grows.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n!r}")
    if r_s < 0.0:
        raise ValueError(f"r_s must be non-negative, got {r_s!r}")
    if not r_sum > 0.0:
        raise ValueError(f"r_sum must be positive, got {r_sum!r}")
    return 1.0 / (1.0 + 2.0 * n * r_s / r_sum)


def conventional_req(resistances, active) -> float:
    """Equivalent discharge resistance of one bit line, conventional style.

    Active cells discharge the line capacitor in parallel; with nothing
    active the line holds its charge, modeled as infinite resistance.
    """
    resistances = tuple(resistances)
    active = tuple(active)
    if len(resistances) != len(active):
        raise LengthMismatch(f"{len(resistances)} resistances but {len(active)} flags")
    g = 0.0
    for r, on in zip(resistances, active):
        if not r > 0.0:
            raise ValueError(f"resistances must be positive, got {r!r}")
        if on:
            g += 1.0 / r
    return math.inf if g == 0.0 else 1.0 / g
