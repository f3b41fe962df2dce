"""Element models for differential current-mode MAC columns.

A signed weight is stored as a pair of resistances in a four-cell layout:
the word line gates r_p onto the positive bit line and r_n onto the
negative one, while the complementary word line gates the mirrored pair
(r_n positive, r_p negative). Inputs arrive as pulse widths on a shared
window, so each row is either in its direct state, its mirrored state, or
off at any instant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import InvalidDrive


class DriveMode(str, Enum):
    """What happens on a row after its pulse ends."""

    COMPLEMENTARY = "complementary"  # inverted word line takes over
    WL_ONLY = "wl_only"              # no inverted line: the row floats


class RowState(Enum):
    """Instantaneous gating state of one row."""

    POS = "pos"
    NEG = "neg"
    OFF = "off"


class SenseModel(str, Enum):
    """Behavioral families for the bit-line sense element."""

    IDEAL = "ideal"
    CONSTANT_R = "constant_r"
    GM_SCALED = "gm_scaled"


@dataclass(frozen=True)
class ResistancePair:
    """The two resistances (ohms) realizing one stored weight."""

    r_p: float
    r_n: float

    def __post_init__(self):
        if not (self.r_p > 0.0 and math.isfinite(self.r_p)):
            raise ValueError(f"r_p must be positive and finite, got {self.r_p!r}")
        if not (self.r_n > 0.0 and math.isfinite(self.r_n)):
            raise ValueError(f"r_n must be positive and finite, got {self.r_n!r}")

    def swapped(self) -> ResistancePair:
        """Pair with both values exchanged; negates the stored weight."""
        return ResistancePair(self.r_n, self.r_p)

    @property
    def g_p(self) -> float:
        return 1.0 / self.r_p

    @property
    def g_n(self) -> float:
        return 1.0 / self.r_n

    @property
    def g_sum(self) -> float:
        """Conductance sum. Its reciprocal is the row's parallel resistance."""
        return 1.0 / self.r_p + 1.0 / self.r_n


def effective_weight(pair: ResistancePair) -> float:
    """Signed weight encoded by a pair: (r_n - r_p) / (r_p + r_n).

    Always in (-1, 1); antisymmetric under swapping the two resistances.
    For a matched column this equals the row's normalized differential
    current N * (i_p - i_n) / i_bias, which is what makes the closed-form
    MAC law hold.
    """
    return (pair.r_n - pair.r_p) / (pair.r_p + pair.r_n)


@dataclass(frozen=True)
class PwmDrive:
    """Per-row pulse widths over a shared time window.

    Row i drives its word line for t in [0, x[i]) and, in complementary
    mode, its inverted line for t in [x[i], x_max). Widths of exactly 0 or
    x_max are legal degenerate cases (never, respectively always, direct).

    Parameters
    ----------
    x : array_like of float
        Pulse widths in seconds, one per row.
    x_max : float
        Window length in seconds; every width must lie in [0, x_max].
    mode : DriveMode
        Complementary (default) or word-line-only gating.
    """

    x: np.ndarray
    x_max: float
    mode: DriveMode = DriveMode.COMPLEMENTARY

    def __post_init__(self):
        x = np.ascontiguousarray(self.x, dtype=np.float64)
        if x.ndim != 1 or x.size == 0:
            raise InvalidDrive("pulse widths must form a non-empty 1-d sequence")
        if not (math.isfinite(self.x_max) and self.x_max > 0.0):
            raise InvalidDrive(f"x_max must be positive and finite, got {self.x_max!r}")
        bad = np.flatnonzero(~((x >= 0.0) & (x <= self.x_max)))
        if bad.size:
            i = int(bad[0])
            raise InvalidDrive(
                f"pulse width out of range at row {i}: x={x[i]!r} "
                f"not in [0, {self.x_max!r}]"
            )
        x.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "mode", DriveMode(self.mode))

    @property
    def n(self) -> int:
        return int(self.x.size)


def pwm_edges(drive: PwmDrive) -> np.ndarray:
    """Sorted unique segment boundaries: {0, x_max} plus interior pulse ends.

    Between consecutive boundaries every row's state is constant, so a
    piecewise solve over these segments reproduces the transient exactly.
    The result has at most n + 2 entries and always starts at 0 and ends
    at x_max.
    """
    x = drive.x
    interior = x[(x > 0.0) & (x < drive.x_max)]
    return np.unique(np.concatenate((interior, (0.0, drive.x_max))))


def row_state(drive: PwmDrive, row: int, t: float) -> RowState:
    """Gating state of one row at a time instant t in [0, x_max)."""
    if not 0.0 <= t < drive.x_max:
        raise ValueError(f"t={t!r} outside the drive window [0, {drive.x_max!r})")
    if t < drive.x[row]:
        return RowState.POS
    return RowState.NEG if drive.mode is DriveMode.COMPLEMENTARY else RowState.OFF


@dataclass(frozen=True)
class CurrentSourceSpec:
    """Tail current sink: bias magnitude, shunt output resistance, rail.

    r_out is the Norton shunt seen at the source line; infinity models the
    ideal cascode. v_supply is the rail the bit lines pull toward.
    """

    i_bias: float
    r_out: float = math.inf
    v_supply: float = 0.8

    def __post_init__(self):
        if not (math.isfinite(self.i_bias) and self.i_bias > 0.0):
            raise ValueError(f"i_bias must be positive and finite, got {self.i_bias!r}")
        if not self.r_out > 0.0:
            raise ValueError(f"r_out must be positive, got {self.r_out!r}")
        if not (math.isfinite(self.v_supply) and self.v_supply > 0.0):
            raise ValueError(f"v_supply must be positive and finite, got {self.v_supply!r}")


@dataclass(frozen=True)
class SenseSpec:
    """Behavioral model of the element copying bit-line current out.

    Ideal sensing pins the bit lines to the supply with zero drop. The
    constant_r model inserts a fixed series resistance r_s per line. The
    gm_scaled model ties the resistance to the bias point through
    r_s = 1 / (k * sqrt(i_bias)), so a hotter bias senses stiffer.
    """

    model: SenseModel = SenseModel.IDEAL
    r_s: float = 0.0
    k: float = 0.0

    def __post_init__(self):
        model = SenseModel(self.model)
        object.__setattr__(self, "model", model)
        if model is SenseModel.CONSTANT_R and not self.r_s > 0.0:
            raise ValueError("constant_r sensing requires r_s > 0 (use ideal() for zero)")
        if model is SenseModel.GM_SCALED and not self.k > 0.0:
            raise ValueError("gm_scaled sensing requires k > 0")

    @classmethod
    def ideal(cls) -> SenseSpec:
        return cls(SenseModel.IDEAL)

    @classmethod
    def constant_r(cls, r_s: float) -> SenseSpec:
        return cls(SenseModel.CONSTANT_R, r_s=r_s)

    @classmethod
    def gm_scaled(cls, k: float) -> SenseSpec:
        return cls(SenseModel.GM_SCALED, k=k)

    @property
    def is_ideal(self) -> bool:
        return self.model is SenseModel.IDEAL

    def resolve_r_s(self, i_bias: float) -> float:
        """Series sense resistance (ohms) at a given bias current."""
        if self.model is SenseModel.IDEAL:
            return 0.0
        if self.model is SenseModel.CONSTANT_R:
            return self.r_s
        return 1.0 / (self.k * math.sqrt(i_bias))


@dataclass(frozen=True)
class CapacitorSpec:
    """Integration capacitor on each output node."""

    c: float
    v_init: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise ValueError(f"capacitance must be positive and finite, got {self.c!r}")
        if not (math.isfinite(self.v_init) and self.v_init >= 0.0):
            raise ValueError(f"v_init must be non-negative and finite, got {self.v_init!r}")
